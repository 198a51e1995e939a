import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from autcent.corpus import get_entry
from autcent.groups import AbelianType, FiniteGroup, center, derived_subgroup, quotient
from autcent.homs import BudgetExceeded, abelian_basis, enumerate_homs, hom_order

from bruteforce import EXTENSION_LIMIT, cyclic_product_table, extension_cost, reference_hom_count

# every abelian p-group type of order at most p^4 (81 at p = 3, 16 at p = 2)
TYPES = [(), (1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1), (4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
PAIRS = [(p, a, b) for p in (2, 3) for a in TYPES for b in TYPES]


def _table_group(p, exps, name):
    table, gens = cyclic_product_table(p, exps)
    return FiniteGroup(name, p, np.asarray(table, dtype=np.int32), gens)


def test_pair_coverage():
    assert len(PAIRS) == 288
    cheap = sum(extension_cost(*t) <= EXTENSION_LIMIT for t in PAIRS)
    assert cheap >= 240


@pytest.mark.parametrize("p, a, b", PAIRS, ids=lambda v: str(v))
def test_hom_order_matches_exhaustive_count(p, a, b):
    assert hom_order(AbelianType(p, a), AbelianType(p, b)) == reference_hom_count(p, a, b)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("exps", TYPES[1:], ids=str)
def test_greedy_basis_is_a_basis(p, exps):
    G = _table_group(p, exps, "t")
    basis = abelian_basis(G)
    assert basis.type == AbelianType(p, exps)
    assert len(basis.coords) == G.order
    # coordinates add under multiplication
    for x, y in itertools.islice(itertools.product(range(G.order), repeat=2), 0, 4000, 7):
        cx, cy = basis.coords[x], basis.coords[y]
        s = tuple((u + v) % o for u, v, o in zip(cx, cy, basis.orders))
        assert basis.coords[int(G.table[x, y])] == s
        assert basis.evaluate(cx) == x


@pytest.mark.parametrize(
    "p, a, b", [(3, (2, 1), (2,)), (2, (2, 1), (1, 1)), (3, (1, 1), (2, 1)), (2, (3,), (2, 1))], ids=str
)
def test_enumerated_homs_are_homomorphisms(p, a, b):
    A, B = _table_group(p, a, "A"), _table_group(p, b, "B")
    homs = enumerate_homs(abelian_basis(A), B)
    assert len(homs) == hom_order(AbelianType(p, a), AbelianType(p, b))
    seen = set()
    x = np.arange(A.order)
    for f in homs:
        v = f.values
        assert np.array_equal(v[A.table], B.table[v[x][:, None], v[x][None, :]])
        seen.add(v.tobytes())
    assert len(seen) == len(homs)
    assert [f.images for f in homs] == sorted(f.images for f in homs)


def test_enumeration_budget():
    A = _table_group(3, (1, 1, 1, 1), "A")
    with pytest.raises(BudgetExceeded):
        enumerate_homs(abelian_basis(A), A, limit=1000)


def test_prime_mismatch():
    with pytest.raises(ValueError):
        hom_order(AbelianType(2, (1,)), AbelianType(3, (1,)))


def test_example_hom_groups():
    # Hom(C9 x C3, C9) and Hom(C3 x C3, C9)
    assert hom_order(AbelianType(3, (2, 1)), AbelianType(3, (2,))) == 27
    assert hom_order(AbelianType(3, (1, 1)), AbelianType(3, (2,))) == 9


def test_hom_into_center_for_corpus_group():
    G = get_entry("ex-2187").group
    Q = quotient(G, derived_subgroup(G))
    homs = enumerate_homs(abelian_basis(Q), center(G))
    assert len(homs) == 27


types = st.builds(
    lambda p, e: (p, tuple(sorted(e, reverse=True))),
    st.sampled_from([2, 3, 5]),
    st.lists(st.integers(1, 5), max_size=5),
)


@given(types, types)
def test_hom_order_symmetric_and_multiplicative(x, y):
    (p, a), (_, b) = x, y
    A, B = AbelianType(p, a), AbelianType(p, b)
    assert hom_order(A, B) == hom_order(B, A)
    # Hom(A1 x A2, B) = Hom(A1, B) x Hom(A2, B)
    split = [AbelianType(p, (e,)) for e in a]
    assert hom_order(A, B) == int(np.prod([hom_order(s, B) for s in split], dtype=object))
    assert hom_order(A, AbelianType(p, ())) == 1
