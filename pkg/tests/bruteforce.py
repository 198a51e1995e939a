"""Naive reference computations that only look at a multiplication table.

Deliberately slow and simple: sets of ints, no shared code with the package.
"""

from __future__ import annotations

import functools
import itertools


class Table:
    """A group given by a full multiplication table (list of lists, identity 0)."""

    def __init__(self, rows):
        self.T = [list(map(int, r)) for r in rows]
        self.n = len(self.T)
        self.inv = [r.index(0) for r in self.T]

    def mul(self, a, b):
        return self.T[a][b]

    def comm(self, a, b):
        T, i = self.T, self.inv
        return T[T[i[a]][i[b]]][T[a][b]]

    def generated(self, seeds):
        out = {0}
        frontier = [0]
        seeds = list(seeds)
        while frontier:
            nxt = []
            for x in frontier:
                for s in seeds:
                    y = self.T[x][s]
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return out

    def center(self):
        T, r = self.T, range(self.n)
        return {z for z in r if all(T[z][x] == T[x][z] for x in r)}

    def derived(self):
        r = range(self.n)
        return self.generated({self.comm(a, b) for a in r for b in r})

    def power(self, a, k):
        x = 0
        for _ in range(k):
            x = self.T[x][a]
        return x

    def frattini(self, p):
        powers = {self.power(a, p) for a in range(self.n)}
        return self.generated(self.derived() | powers)

    def upper_series(self):
        r = range(self.n)
        series = [self.center()]
        while len(series[-1]) < self.n:
            prev = series[-1]
            series.append({x for x in r if all(self.comm(x, g) in prev for g in r)})
        return series

    def lower_series(self):
        r = range(self.n)
        series = [set(r)]
        while len(series[-1]) > 1:
            prev = series[-1]
            series.append(self.generated({self.comm(a, g) for a in prev for g in r}))
        return series

    def minimal_generators(self, p):
        """Elements independent modulo the Frattini subgroup (Burnside basis)."""
        phi = sorted(self.frattini(p))
        chosen = []
        for x in range(self.n):
            if x not in self.generated(chosen + phi):
                chosen.append(x)
        return chosen

    def element_order(self, a):
        k, x = 1, a
        while x:
            x = self.T[x][a]
            k += 1
        return k

    def abelian_exponents(self, p, members=None):
        """Invariants of an abelian p-group from how many elements have each order."""
        members = range(self.n) if members is None else members
        orders = [self.element_order(a) for a in members]
        # c_k = #{a : a^(p^k) = 1}; log_p(c_k / c_(k-1)) factors have exponent >= k
        c = [1]
        while c[-1] < len(orders):
            k = len(c)
            c.append(sum(1 for o in orders if (p**k) % o == 0))
        at_least = [_logp(c[k] // c[k - 1], p) for k in range(1, len(c))]
        exps = []
        for k, r in enumerate(at_least, start=1):
            nxt = at_least[k] if k < len(at_least) else 0
            exps += [k] * (r - nxt)
        return sorted(exps, reverse=True)


def _logp(n, p):
    r = 0
    while n > 1:
        n //= p
        r += 1
    return r


def homs_by_extension(Ta, gens, Tb):
    """Count homomorphisms by trying every tuple of images for ``gens``.

    A tuple gives a homomorphism iff defining ``phi(x g) = phi(x) phi(g)`` along
    a breadth-first walk never assigns two values to one element.
    """
    count = 0
    for images in itertools.product(range(len(Tb)), repeat=len(gens)):
        if _extend(Ta, Tb, gens, images) is not None:
            count += 1
    return count


def homs_by_relations(p, exps, Tb):
    """Count tuples in an abelian ``B`` satisfying the relations ``b_i^(p^a_i) = 1``."""
    B = Table(Tb)
    count = 1
    for a in exps:
        count *= sum(1 for b in range(B.n) if B.power(b, p**a) == 0)
    return count


def _extend(Ta, Tb, gens, images):
    phi = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, images):
                y, v = Ta[x][g], Tb[phi[x]][h]
                if y in phi:
                    if phi[y] != v:
                        return None
                else:
                    phi[y] = v
                    nxt.append(y)
        frontier = nxt
    return phi


def cyclic_product_table(p, exps):
    """``C_(p^e1) x ...`` as (table, ids of the standard generators)."""
    mods = [p**e for e in exps]
    elems = list(itertools.product(*(range(m) for m in mods)))
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[tuple((x + y) % m for x, y, m in zip(a, b, mods))] for b in elems] for a in elems]
    gens = [index[tuple(int(i == k) for i in range(len(mods)))] for k in range(len(mods))]
    return table, gens


def central_automorphism_counts(T, gens):
    """(|Autcent|, |Autcent_Z|) by trying every image tuple for ``gens``."""
    B = Table(T)
    Z = B.center()
    autcent = autcentz = 0
    for images in itertools.product(range(B.n), repeat=len(gens)):
        phi = _extend(B.T, B.T, gens, images)
        if phi is None or len(set(phi.values())) != B.n:
            continue
        if all(B.T[B.inv[x]][phi[x]] in Z for x in range(B.n)):
            autcent += 1
            autcentz += all(phi[z] == z for z in Z)
    return autcent, autcentz


# full tuple enumeration costs about |B|^rank(A) * |A| steps
EXTENSION_LIMIT = 300_000


def extension_cost(p, a, b):
    return (p ** sum(b)) ** len(a) * p ** sum(a) * max(len(a), 1)


@functools.lru_cache(maxsize=None)
def reference_hom_count(p, a, b):
    """|Hom(A, B)| for abelian types ``a``, ``b`` without using the min-exponent formula.

    Counts relation-respecting image tuples over all of ``B``; when the pair is
    small enough, full enumeration of image tuples must agree.
    """
    Ta, gens = cyclic_product_table(p, a)
    Tb, _ = cyclic_product_table(p, b)
    by_relations = homs_by_relations(p, a, Tb)
    if extension_cost(p, a, b) <= EXTENSION_LIMIT:
        by_extension = homs_by_extension(Ta, gens, Tb)
        if by_extension != by_relations:
            raise AssertionError(f"reference counts disagree for {a} -> {b}: {by_extension} vs {by_relations}")
    return by_relations
