"""Brute-force ground truth for central automorphisms and direct factors.

Every central endomorphism has the form ``x -> x f(xG')`` for a homomorphism
``f: G/G' -> Z(G)``.  Enumerating ``Hom(G/G', Z(G))`` and evaluating each map on
all of ``G`` therefore gives ``Autcent(G)`` (bijective maps) and
``Autcent_Z(G)`` (bijective maps fixing the center pointwise) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    center,
    closure,
    derived_subgroup,
    frattini_subgroup,
    logp,
    normal_closure,
    quotient,
    subgroup_intersection,
    upper_central_series,
)
from .homs import Hom, abelian_basis, enumerate_homs
from .pc import LCG_SEED, lcg_indices

DEFAULT_HOM_BUDGET = 10_000
DEFAULT_SUBGROUP_BUDGET = 100_000
SAMPLED_PAIRS = 100


@dataclass(eq=False)
class CentralMap:
    hom: Hom
    images: np.ndarray  # alpha(x) for every element id x
    bijective: bool
    fixes_center: bool

    @property
    def key(self) -> bytes:
        return self.images.astype(np.int32).tobytes()

    @property
    def descriptor(self) -> tuple[int, ...]:
        return self.hom.images


@dataclass
class CentralAutomorphisms:
    endomorphisms: list[CentralMap]

    @property
    def autcent(self) -> list[CentralMap]:
        return [m for m in self.endomorphisms if m.bijective]

    @property
    def autcentz(self) -> list[CentralMap]:
        return [m for m in self.endomorphisms if m.bijective and m.fixes_center]


def _require_nonabelian(G: FiniteGroup) -> None:
    if G.is_abelian:
        raise GroupError(f"{G.name} is abelian; central automorphisms are all of Aut(G)")


def central_endomorphisms(G: FiniteGroup, budget: int = DEFAULT_HOM_BUDGET) -> list[CentralMap]:
    """One map ``x -> x f(xG')`` per ``f`` in ``Hom(G/G', Z(G))``, sorted by descriptor."""
    _require_nonabelian(G)
    Z = center(G)
    Q = quotient(G, derived_subgroup(G), name=f"{G.name}/G'")
    basis = abelian_basis(Q)
    homs = enumerate_homs(basis, Z, limit=budget)
    T = G.table
    everything = np.arange(G.order)
    pairs = [(a, b) for a in G.gens for b in G.gens]
    idx = list(lcg_indices(2 * SAMPLED_PAIRS, G.order, seed=LCG_SEED + 1))
    pairs += list(zip(idx[::2], idx[1::2]))
    a_ids = np.array([a for a, _ in pairs])
    b_ids = np.array([b for _, b in pairs])
    maps = []
    for f in homs:
        alpha = T[everything, f.values[Q.projection]]
        lhs = alpha[T[a_ids, b_ids]]
        rhs = T[alpha[a_ids], alpha[b_ids]]
        if not np.array_equal(lhs, rhs):
            raise RuntimeError(f"{G.name}: central map {f.images} is not an endomorphism")
        bijective = len(np.unique(alpha)) == G.order
        fixes = bool(np.array_equal(alpha[Z.ids], Z.ids))
        maps.append(CentralMap(f, alpha, bijective, fixes))
    maps.sort(key=lambda m: m.descriptor)
    return maps


def _check_closed(G: FiniteGroup, maps: list[CentralMap], what: str) -> None:
    """Fail unless ``maps`` is a group under composition.

    Generators are picked greedily from ``maps`` until the group they
    generate covers it; that group must then coincide with ``maps``.
    """
    wanted = {m.key for m in maps}
    ident = np.arange(G.order, dtype=np.int32)
    reached = {ident.tobytes(): ident}
    gens: list[np.ndarray] = []
    for m in maps:
        if m.key in reached:
            continue
        gens.append(m.images.astype(np.int32))
        frontier = list(reached.values())
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = g[a]
                    k = c.tobytes()
                    if k not in reached:
                        if k not in wanted:
                            raise RuntimeError(f"{G.name}: {what} is not closed under composition")
                        reached[k] = c
                        nxt.append(c)
            frontier = nxt
    if set(reached) != wanted:
        raise RuntimeError(f"{G.name}: {what} does not contain the identity")


def central_automorphisms(G: FiniteGroup, budget: int = DEFAULT_HOM_BUDGET) -> CentralAutomorphisms:
    data = CentralAutomorphisms(central_endomorphisms(G, budget))
    _check_closed(G, data.autcent, "Autcent")
    _check_closed(G, data.autcentz, "Autcent_Z")
    return data


def autcent_bruteforce(G: FiniteGroup, budget: int = DEFAULT_HOM_BUDGET) -> tuple[int, list[CentralMap]]:
    maps = central_automorphisms(G, budget).autcent
    return len(maps), maps


def autcentz_bruteforce(G: FiniteGroup, budget: int = DEFAULT_HOM_BUDGET) -> tuple[int, list[CentralMap]]:
    maps = central_automorphisms(G, budget).autcentz
    return len(maps), maps


def conjugation_map(G: FiniteGroup, g: int) -> np.ndarray:
    """``x -> g^-1 x g`` on every element id."""
    T = G.table
    return T[T[G.inverse[g], np.arange(G.order)], g]


@dataclass
class InnerCenterCheck:
    holds: bool
    distinct: int
    expected: int


def inner_center_check(G: FiniteGroup, data: CentralAutomorphisms | None = None) -> InnerCenterCheck:
    """Is every conjugation by an element of ``Z_2(G)`` a listed center-fixing central automorphism?"""
    _require_nonabelian(G)
    if data is None:
        data = central_automorphisms(G)
    series = upper_central_series(G)
    Z, Z2 = series[0], series[1]
    allowed = {m.key for m in data.autcentz}
    seen = set()
    holds = True
    for g in Z2.ids:
        key = conjugation_map(G, int(g)).astype(np.int32).tobytes()
        seen.add(key)
        holds &= key in allowed
    expected = Z2.order // Z.order
    return InnerCenterCheck(holds and len(seen) == expected, len(seen), expected)


def inner_automorphism_keys(G: FiniteGroup) -> set[bytes]:
    return {conjugation_map(G, g).astype(np.int32).tobytes() for g in range(G.order)}


# direct factors -------------------------------------------------------------


class Purity(str, Enum):
    PURELY_NONABELIAN = "purely non-abelian"
    FACTOR_FOUND = "factor found"
    INCONCLUSIVE = "inconclusive"


@dataclass
class DirectFactorResult:
    verdict: Purity
    factor: Subgroup | None = None
    complement: Subgroup | None = None
    explored: int = 0
    notes: list[str] = field(default_factory=list)


def _power(G: FiniteGroup, x: int, k: int) -> int:
    out = 0
    for _ in range(k % G.element_order(x)):
        out = int(G.table[out, x])
    return out


def maximal_subgroups(H: Subgroup) -> list[Subgroup]:
    """Maximal subgroups of ``H``: preimages of hyperplanes of ``H/Phi(H)``."""
    G, p = H.group, H.prime
    if H.is_trivial():
        return []
    seeds = [int(G.commutators([a], b)[0]) for a in H.gens for b in H.gens]
    seeds += [int(G.pth_power[a]) for a in H.gens]
    phi = normal_closure(G, seeds, by=H.gens)
    basis: list[int] = []
    span = phi
    for h in H.gens:
        if h not in span:
            basis.append(h)
            span = closure(G, [h], span)
    d = len(basis)
    out = []
    for lam in np.ndindex(*([p] * d)):
        nz = [i for i, c in enumerate(lam) if c]
        if not nz or lam[nz[0]] != 1:
            continue
        t = nz[0]
        kernel = []
        for s in range(d):
            if s == t:
                continue
            kernel.append(int(G.table[basis[s], _power(G, basis[t], -lam[s])]))
        out.append(closure(G, kernel, phi))
    return out


def direct_factor_search(G: FiniteGroup, budget: int = DEFAULT_SUBGROUP_BUDGET) -> DirectFactorResult:
    """Look for ``G = C x N`` with ``C`` nontrivial cyclic central.

    Any complement ``N`` of ``C`` (index ``|C|``) sits at the bottom of a
    chain of maximal subgroups ``G > M_1 > .. > N``; along the chain
    ``C cap M_k`` must drop by exactly ``p`` each step, which prunes the
    search.  "Purely non-abelian" is only returned after every cyclic
    central ``C`` has been exhausted.
    """
    p = G.prime
    Z = center(G)
    phi = frattini_subgroup(G)
    result = DirectFactorResult(Purity.PURELY_NONABELIAN)
    whole = G.whole()

    # a central element of order p outside Phi(G) always splits off
    for z in Z.ids:
        z = int(z)
        if z and G.pth_power[z] == 0 and z not in phi:
            C = closure(G, [z])
            for M in maximal_subgroups(whole):
                result.explored += 1
                if z not in M:
                    result.verdict = Purity.FACTOR_FOUND
                    result.factor, result.complement = C, M
                    result.notes.append("central element of order p outside Phi(G)")
                    return result

    cyclics: dict[bytes, Subgroup] = {}
    for z in Z.ids:
        if z:
            C = closure(G, [int(z)])
            cyclics.setdefault(C.key, C)
    for C in sorted(cyclics.values(), key=lambda C: (C.order, C.gens)):
        k = logp(C.order, p)
        level = {whole.key: whole}
        for step in range(1, k + 1):
            want = C.order // p**step
            nxt: dict[bytes, Subgroup] = {}
            for M in level.values():
                for M2 in maximal_subgroups(M):
                    if M2.key in nxt:
                        continue
                    result.explored += 1
                    if result.explored > budget:
                        result.verdict = Purity.INCONCLUSIVE
                        result.notes.append(f"subgroup budget {budget} exhausted")
                        return result
                    if subgroup_intersection(C, M2).order == want:
                        nxt[M2.key] = M2
            level = nxt
            if not level:
                break
        if level:
            N = min(level.values(), key=lambda M: tuple(M.ids))
            result.verdict = Purity.FACTOR_FOUND
            result.factor, result.complement = C, N
            return result
    return result


def omega1_center_in_frattini(G: FiniteGroup) -> bool:
    """Are all central elements of order dividing p inside Phi(G)?"""
    Z = center(G)
    phi = frattini_subgroup(G)
    return all(int(z) in phi for z in Z.ids if G.pth_power[z] == 0)
