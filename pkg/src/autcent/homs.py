"""Homomorphisms between finite abelian p-groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groups import AbelianType, FiniteGroup, GroupError, GroupLike, NotAbelianError, _members, abelian_invariants


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured size limit."""


def hom_order(A: AbelianType, B: AbelianType) -> int:
    """``|Hom(A, B)| = prod_{i,j} p^min(a_i, b_j)``."""
    if A.prime != B.prime:
        raise ValueError(f"prime mismatch: {A.prime} vs {B.prime}")
    return A.prime ** sum(min(a, b) for a in A.exponents for b in B.exponents)


@dataclass
class AbelianBasis:
    """Independent cyclic generators of an abelian group plus every element's coordinates."""

    group: FiniteGroup
    members: np.ndarray
    elements: tuple[int, ...]
    orders: tuple[int, ...]
    coords: dict[int, tuple[int, ...]]

    @property
    def type(self) -> AbelianType:
        p = self.group.prime
        exps = []
        for o in self.orders:
            e = 0
            while o > 1:
                o //= p
                e += 1
            exps.append(e)
        return AbelianType(p, tuple(exps))

    def evaluate(self, coord) -> int:
        x = 0
        for b, c, o in zip(self.elements, coord, self.orders):
            for _ in range(c % o):
                x = int(self.group.table[x, b])
        return x

    @cached_property
    def coord_array(self) -> np.ndarray:
        """Row ``k`` holds the coordinates of ``members[k]``."""
        return np.array([self.coords[int(x)] for x in self.members], dtype=np.int64).reshape(
            len(self.members), len(self.elements)
        )


def abelian_basis(A: GroupLike) -> AbelianBasis:
    """Greedy basis: largest order first, ties to the least id, independent of the span so far."""
    G, ids = _members(A)
    if not A.is_abelian:
        raise NotAbelianError(f"{G.name}: not abelian")
    T = G.table
    order_of = {int(x): G.element_order(int(x)) for x in ids}
    candidates = sorted(order_of, key=lambda x: (-order_of[x], x))
    span = np.zeros(G.order, dtype=bool)
    span[0] = True
    elements: list[int] = []
    orders: list[int] = []
    while np.count_nonzero(span) < len(ids):
        for x in candidates:
            if span[x]:
                continue
            powers = [x]
            while powers[-1] != 0:
                powers.append(int(T[powers[-1], x]))
            if any(span[y] for y in powers[:-1]):
                continue
            elements.append(x)
            orders.append(order_of[x])
            cyc = np.asarray(powers)
            span_ids = np.flatnonzero(span)
            span = np.zeros(G.order, dtype=bool)
            span[T[np.ix_(span_ids, cyc)].ravel()] = True
            break
        else:
            raise GroupError(f"{G.name}: greedy basis construction stalled")
    coords: dict[int, tuple[int, ...]] = {}
    for c in itertools.product(*(range(o) for o in orders)):
        x = 0
        for b, e in zip(elements, c):
            for _ in range(e):
                x = int(T[x, b])
        if x in coords:
            raise GroupError(f"{G.name}: basis is not independent")
        coords[x] = c
    if len(coords) != len(ids):
        raise GroupError(f"{G.name}: basis does not span")
    basis = AbelianBasis(G, np.asarray(ids), tuple(elements), tuple(orders), coords)
    if basis.type != abelian_invariants(A):
        raise GroupError(f"{G.name}: basis orders disagree with abelian invariants")
    return basis


@dataclass(frozen=True, eq=False)
class Hom:
    """A homomorphism fixed by the images of the domain basis."""

    basis: AbelianBasis
    codomain: FiniteGroup
    images: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    @cached_property
    def values(self) -> np.ndarray:
        """Image of every domain-group id (``-1`` outside the domain)."""
        T = self.codomain.table
        out = np.full(self.basis.group.order, -1, dtype=np.int64)
        acc = np.zeros(len(self.basis.members), dtype=np.int64)
        coords = self.basis.coord_array
        for k, (z, o) in enumerate(zip(self.images, self.basis.orders)):
            pw = [0]
            for _ in range(o - 1):
                pw.append(int(T[pw[-1], z]))
            acc = T[acc, np.asarray(pw)[coords[:, k]]]
        out[self.basis.members] = acc
        return out


def enumerate_homs(basis: AbelianBasis, B: GroupLike, limit: int | None = None) -> list[Hom]:
    """Every homomorphism from the basis' group into the abelian group ``B``.

    A basis element of order ``p^e`` may go to any ``z`` in ``B`` with
    ``z^(p^e) = 1``; descriptors come out in lexicographic order of images.
    """
    H, ids = _members(B)
    if not B.is_abelian:
        raise NotAbelianError("codomain is not abelian")
    if H.prime != basis.group.prime:
        raise ValueError("prime mismatch")
    choices = []
    for o in basis.orders:
        x = ids.copy()
        k = o
        while k > 1:
            x = H.pth_power[x]
            k //= H.prime
        choices.append([int(z) for z in ids[x == 0]])
    count = int(np.prod([len(c) for c in choices], dtype=object))
    if limit is not None and count > limit:
        raise BudgetExceeded(f"{count} homomorphisms exceeds budget {limit}")
    return [Hom(basis, H, imgs) for imgs in itertools.product(*choices)]
