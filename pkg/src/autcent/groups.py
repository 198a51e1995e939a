"""Finite groups as Cayley tables, subgroups as element-id masks.

Every group here has elements ``0 .. order-1`` with ``0`` the identity.  A
group is either backed by a pc presentation (element id = lexicographic rank
of the normal form) or by a bare multiplication table (quotients).  All the
structural operations only look at ``table`` and ``gens``, so both backings
behave identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .pc import PcPresentation, _fmt


class GroupError(ValueError):
    pass


class NotNormalError(GroupError):
    pass


class NotAbelianError(GroupError):
    pass


class NotNilpotentError(GroupError):
    pass


def logp(n: int, p: int) -> int:
    """Exact base-``p`` logarithm of a power of ``p``."""
    k = 0
    while n > 1:
        n, r = divmod(n, p)
        if r:
            raise GroupError(f"{n * p + r} is not a power of {p}")
        k += 1
    return k


@dataclass(frozen=True, order=True)
class AbelianType:
    """``prod C_{p^e}`` over ``exponents`` (non-increasing, all >= 1)."""

    prime: int
    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        exps = tuple(sorted(self.exponents, reverse=True))
        if any(e < 1 for e in exps):
            raise ValueError("exponents must be positive")
        object.__setattr__(self, "exponents", exps)

    @property
    def order(self) -> int:
        return self.prime ** sum(self.exponents)

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def is_cyclic(self) -> bool:
        return len(self.exponents) <= 1

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return " x ".join(f"C{self.prime ** e}" for e in self.exponents)


class FiniteGroup:
    """A finite group on ids ``0..order-1`` with a full Cayley table."""

    def __init__(
        self,
        name: str,
        prime: int,
        table: np.ndarray,
        gens: Sequence[int],
        *,
        presentation: PcPresentation | None = None,
        parent: FiniteGroup | None = None,
        projection: np.ndarray | None = None,
        representatives: np.ndarray | None = None,
        validate: bool = True,
    ):
        self.name = name
        self.prime = prime
        self.table = table
        self.gens = tuple(int(g) for g in gens)
        self.presentation = presentation
        self.parent = parent
        self.projection = projection
        self.representatives = representatives
        if validate:
            self._validate()

    @property
    def backing(self) -> str:
        return "pc" if self.presentation is not None else "table"

    @classmethod
    def from_presentation(cls, pres: PcPresentation) -> FiniteGroup:
        n, p, N = pres.ngens, pres.prime, pres.order
        elems = [pres.element_from_id(x) for x in range(N)]
        right = np.empty((n, N), dtype=np.int32)
        for x, a in enumerate(elems):
            for i in range(n):
                right[i, x] = pres.element_id(pres._mul_gen(a, i))
        table = np.empty((N, N), dtype=np.int32)
        table[:, 0] = np.arange(N)
        for y in range(1, N):
            a = elems[y]
            k = max(i for i in range(n) if a[i])
            prev = y - p ** (n - 1 - k)
            # x * y = (x * y') * gk where y' is y with its last exponent lowered
            table[:, y] = right[k][table[:, prev]]
        gens = [pres.element_id(pres.generator(i)) for i in range(n)]
        return cls(pres.name, p, table, gens, presentation=pres, validate=False)

    def _validate(self) -> None:
        T, N = self.table, self.order
        if T.shape != (N, N) or T.min() < 0 or T.max() >= N:
            raise GroupError(f"{self.name}: malformed table")
        ar = np.arange(N)
        if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
            raise GroupError(f"{self.name}: 0 is not the identity")
        if not (np.all(np.sort(T, axis=1) == ar) and np.all(np.sort(T, axis=0) == ar[:, None])):
            raise GroupError(f"{self.name}: table is not a latin square")
        # (xy)g = x(yg) for all x, y and generators g, plus generation,
        # is equivalent to full associativity.
        for g in self.gens:
            if not np.array_equal(T[T, g], T[:, T[:, g]]):
                raise GroupError(f"{self.name}: table is not associative")
        if closure(self, self.gens).order != N:
            raise GroupError(f"{self.name}: generators do not generate")
        logp(N, self.prime)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def exponent_of_order(self) -> int:
        return logp(self.order, self.prime)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverse(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == 0)
        inv = np.empty(self.order, dtype=np.int32)
        inv[rows] = cols
        return inv

    @cached_property
    def pth_power(self) -> np.ndarray:
        ar = np.arange(self.order)
        y = ar.copy()
        for _ in range(self.prime - 1):
            y = self.table[y, ar]
        return y

    def commutators(self, xs, g) -> np.ndarray:
        """``[x, g]`` for every x in ``xs`` (array) and one element ``g``."""
        xs = np.asarray(xs)
        T, inv = self.table, self.inverse
        return T[T[inv[xs], inv[g]], T[xs, g]]

    def element_order(self, x: int) -> int:
        k = 1
        while x != 0:
            x = int(self.pth_power[x])
            k *= self.prime
        return k

    @cached_property
    def is_abelian(self) -> bool:
        T = self.table
        return all(T[a, b] == T[b, a] for a in self.gens for b in self.gens)

    def label(self, x: int) -> str:
        if self.presentation is not None:
            return _fmt(self.presentation.element_from_id(int(x)))
        if self.parent is not None and self.representatives is not None:
            return f"[{self.parent.label(int(self.representatives[x]))}]"
        return f"#{int(x)}"

    def whole(self) -> Subgroup:
        return Subgroup(self, np.ones(self.order, dtype=bool), self.gens)

    def trivial(self) -> Subgroup:
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        return Subgroup(self, mask, ())

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.name} order={self.order} backing={self.backing}>"


class Subgroup:
    """A subgroup stored as a boolean membership mask over its parent's ids."""

    def __init__(self, group: FiniteGroup, mask: np.ndarray, gens: Sequence[int] = ()):
        self.group = group
        self.mask = mask
        self.mask.flags.writeable = False
        self.gens = tuple(int(g) for g in gens)

    @cached_property
    def ids(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def order(self) -> int:
        return len(self.ids)

    @property
    def prime(self) -> int:
        return self.group.prime

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __le__(self, other: Subgroup) -> bool:
        return bool(np.all(other.mask[self.ids]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group is other.group and np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash(np.packbits(self.mask).tobytes())

    @property
    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_normal(self) -> bool:
        G = self.group
        for g in G.gens:
            conj = G.table[G.table[G.inverse[g], self.ids], g]
            if not np.all(self.mask[conj]):
                return False
        return True

    @cached_property
    def is_abelian(self) -> bool:
        T = self.group.table
        return all(T[a, b] == T[b, a] for a in self.gens for b in self.gens)

    def labels(self) -> list[str]:
        return [self.group.label(x) for x in self.ids]

    def __repr__(self) -> str:
        gens = ", ".join(self.group.label(g) for g in self.gens)
        return f"<Subgroup of {self.group.name} order={self.order} gens=[{gens}]>"


GroupLike = Union[FiniteGroup, Subgroup]


# closures ---------------------------------------------------------------


def _extend(G: FiniteGroup, mask: np.ndarray, gens: list[int], frontier: np.ndarray) -> None:
    """Grow ``mask`` in place to the closure under right multiplication by ``gens``."""
    g = np.asarray(gens)
    while frontier.size:
        new = G.table[np.ix_(frontier, g)].ravel()
        new = np.unique(new[~mask[new]])
        mask[new] = True
        frontier = new


def closure(G: FiniteGroup, seeds, base: Subgroup | None = None) -> Subgroup:
    """Subgroup generated by ``seeds`` (and ``base``), with a short generating list.

    Seeds already inside the running closure are skipped, so the recorded
    generating set has at most ``log_p |H|`` entries.
    """
    seeds = np.unique(np.asarray(seeds if isinstance(seeds, np.ndarray) else list(seeds), dtype=np.int64))
    if base is None:
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
        gens: list[int] = []
    else:
        mask = base.mask.copy()
        gens = list(base.gens)
    mask.flags.writeable = True
    while True:
        outside = seeds[~mask[seeds]] if seeds.size else seeds
        if not outside.size:
            break
        s = int(outside[0])
        gens.append(s)
        _extend(G, mask, gens, np.flatnonzero(mask))
    return Subgroup(G, mask, gens)


def normal_closure(G: FiniteGroup, seeds, base: Subgroup | None = None, by: Sequence[int] | None = None) -> Subgroup:
    """Smallest subgroup containing ``seeds`` and closed under conjugation by ``by`` (default: ``G.gens``)."""
    conjugators = G.gens if by is None else tuple(by)
    H = closure(G, seeds, base)
    while True:
        hs = np.asarray(H.gens, dtype=np.int64)
        if not hs.size or not conjugators:
            return H
        conj = np.concatenate([G.table[G.table[G.inverse[g], hs], g] for g in conjugators])
        if np.all(H.mask[conj]):
            return H
        H = closure(G, conj, H)


# structure --------------------------------------------------------------


def center(G: FiniteGroup) -> Subgroup:
    T = G.table
    mask = np.ones(G.order, dtype=bool)
    for g in G.gens:
        mask &= T[:, g] == T[g, :]
    return closure(G, np.flatnonzero(mask))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    comms = [int(G.commutators([a], b)[0]) for a in G.gens for b in G.gens]
    return normal_closure(G, comms)


def commutator_subgroup(H: Subgroup) -> Subgroup:
    """``[H, G]`` for a normal subgroup ``H``."""
    G = H.group
    hs = np.asarray(H.gens, dtype=np.int64)
    if not hs.size:
        return G.trivial()
    comms = np.concatenate([G.commutators(hs, g) for g in G.gens])
    return normal_closure(G, comms)


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    """``[G = gamma_1, gamma_2, .., gamma_c]``, every term nontrivial."""
    series = []
    H = G.whole()
    while not H.is_trivial():
        series.append(H)
        nxt = commutator_subgroup(H)
        if nxt == H:
            raise NotNilpotentError(f"{G.name}: lower central series stalls at order {H.order}")
        H = nxt
    return series


def upper_central_series(G: FiniteGroup) -> list[Subgroup]:
    """``[Z_1, .., Z_c = G]``."""
    series = []
    Z = G.trivial()
    while Z.order < G.order:
        mask = np.ones(G.order, dtype=bool)
        everything = np.arange(G.order)
        for g in G.gens:
            mask &= Z.mask[G.commutators(everything, g)]
        nxt = closure(G, np.flatnonzero(mask))
        if nxt.order == Z.order:
            raise NotNilpotentError(f"{G.name}: upper central series stalls at order {Z.order}")
        series.append(nxt)
        Z = nxt
    return series


def nilpotency_class(G: FiniteGroup) -> int:
    return len(lower_central_series(G))


def coclass(G: FiniteGroup) -> int:
    return G.exponent_of_order - nilpotency_class(G)


def frattini_subgroup(G: FiniteGroup) -> Subgroup:
    # For a p-group generated by X, Phi = normal closure of [X, X] and X^p.
    seeds = [int(G.commutators([a], b)[0]) for a in G.gens for b in G.gens]
    seeds += [int(G.pth_power[a]) for a in G.gens]
    return normal_closure(G, seeds)


def frattini_and_rank(G: FiniteGroup) -> tuple[Subgroup, int]:
    phi = frattini_subgroup(G)
    return phi, logp(G.order // phi.order, G.prime)


def subgroup_intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    if A.group is not B.group:
        raise GroupError("subgroups of different groups")
    G = A.group
    return closure(G, np.flatnonzero(A.mask & B.mask))


def subgroup_product(A: Subgroup, B: Subgroup) -> Subgroup:
    if A.group is not B.group:
        raise GroupError("subgroups of different groups")
    G = A.group
    mask = np.zeros(G.order, dtype=bool)
    mask[G.table[np.ix_(A.ids, B.ids)].ravel()] = True
    H = closure(G, np.concatenate([A.ids, B.ids]))
    if not np.array_equal(H.mask, mask):
        raise GroupError("AB is not a subgroup (neither factor normal?)")
    return H


def quotient(G: FiniteGroup, N: Subgroup, name: str | None = None) -> FiniteGroup:
    """Table-backed ``G/N``; coset ids follow their least element id."""
    if N.group is not G:
        raise GroupError("subgroup of a different group")
    if not N.is_normal():
        raise NotNormalError(f"subgroup of order {N.order} is not normal in {G.name}")
    reps_of = G.table[:, N.ids].min(axis=1)
    reps, proj = np.unique(reps_of, return_inverse=True)
    proj = proj.astype(np.int32)
    table = proj[G.table[np.ix_(reps, reps)]].astype(np.int32)
    gens = []
    for g in G.gens:
        q = int(proj[g])
        if q and q not in gens:
            gens.append(q)
    return FiniteGroup(
        name or f"{G.name}/N{N.order}",
        G.prime,
        table,
        gens,
        parent=G,
        projection=proj,
        representatives=reps,
    )


def pullback(Q: FiniteGroup, H: Subgroup) -> Subgroup:
    """Preimage in ``Q.parent`` of a subgroup of the quotient ``Q``."""
    G = Q.parent
    mask = H.mask[Q.projection]
    return closure(G, np.flatnonzero(mask))


def _members(X: GroupLike) -> tuple[FiniteGroup, np.ndarray]:
    if isinstance(X, Subgroup):
        return X.group, X.ids
    return X, np.arange(X.order)


def is_abelian(X: GroupLike) -> bool:
    return X.is_abelian


def abelian_invariants(X: GroupLike) -> AbelianType:
    """Type of an abelian p-group from the counts ``c_k = #{a : a^(p^k) = 1}``.

    ``c_k = p^(sum_i min(k, e_i))``, so ``log_p c_k - log_p c_{k-1}`` is the
    number of cyclic factors of exponent at least ``k``.
    """
    G, ids = _members(X)
    p = G.prime
    if not is_abelian(X):
        raise NotAbelianError(f"subgroup of {G.name} is not abelian")
    logp(len(ids), p)
    counts = []  # counts[k-1] = #{e_i >= k}
    prev = 0
    x = ids.copy()
    while True:
        x = G.pth_power[x]
        c = logp(int(np.count_nonzero(x == 0)), p)
        if c == prev:
            break
        counts.append(c - prev)
        prev = c
    exps = []
    for k, cnt in enumerate(counts, start=1):
        nxt = counts[k] if k < len(counts) else 0
        exps += [k] * (cnt - nxt)
    return AbelianType(p, tuple(exps))


def exponent(X: GroupLike) -> int:
    G, ids = _members(X)
    return max(G.element_order(int(x)) for x in ids)


def reduced_generators(H: Subgroup) -> list[int]:
    """A short generating list for display.

    For pc-backed groups candidates with fewer letters come first, then by
    leading generator, so ``<g4>`` is reported as ``[g4]`` rather than
    ``[g7, g4]`` and single generators win over products.
    """
    G = H.group
    ids = [int(x) for x in H.ids if x]
    if G.presentation is not None:
        pres = G.presentation

        def key(x):
            v = pres.element_from_id(x)
            support = [i for i, e in enumerate(v) if e]
            return (len(support), support[0], x)

        ids.sort(key=key)
    return _greedy(G, ids)


def _greedy(G: FiniteGroup, ordered: list[int]) -> list[int]:
    gens: list[int] = []
    span = G.trivial()
    for x in ordered:
        if x not in span:
            gens.append(x)
            span = closure(G, [x], span)
            if span.order == len(ordered) + 1:
                break
    return gens
