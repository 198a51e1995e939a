import itertools
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autcent.groups import FiniteGroup
from autcent.corpus import EXAMPLE_GROUP, builtin_corpus, get_entry
from autcent.pc import (
    PcPresentation,
    PresentationError,
    WeightingError,
    check_consistency,
    collect_product,
    commutator,
    direct_product,
    element_order,
    enumerate_elements,
    format_presentation,
    inverse,
    lcg_indices,
    parse_presentation,
    parse_presentations,
    power,
)

DATA = Path(__file__).parent / "data"
LITERAL = DATA / "example-2187-literal.pcg"


def example():
    return get_entry(EXAMPLE_GROUP).presentation


def gen(G, i):
    return G.generator(i - 1)


# parsing ----------------------------------------------------------------------


def test_literal_example_file_shape():
    G = parse_presentation(LITERAL.read_text())
    assert (G.prime, G.ngens) == (3, 7)
    assert len(G.power_relations) == 3
    assert len(G.commutator_relations) == 3


def test_cyclic_five_from_single_generator_file():
    G = parse_presentation("group c\nprime 5\nngens 1\nend\n")
    assert G.order == 5
    assert len(enumerate_elements(G)) == 5


def test_weighting_violation_names_relation():
    text = "group w\nprime 3\nngens 3\ncomm 2 1: 1 0 0\nend\n"
    with pytest.raises(WeightingError, match="comm 2 1"):
        parse_presentation(text)


def test_power_weighting_violation():
    with pytest.raises(WeightingError, match="pow 2"):
        parse_presentation("group w\nprime 2\nngens 2\npow 2: 0 1\nend\n")


@pytest.mark.parametrize(
    "body, line, fragment",
    [
        ("prime 4\n", 2, "not prime"),
        ("prime 3\nngens 2\npow 1: 0 3\n", 4, "out of range"),
        ("prime 3\nngens 2\npow 1: 0 x\n", 4, "integer"),
        ("prime 3\nngens 2\npow 1: 0\n", 4, "expected 2 exponents"),
        ("prime 3\nngens 2\ncomm 1 2: 0 0\n", 4, "j > i"),
        ("prime 3\nngens 2\npow 3: 0 0\n", 4, "out of range"),
        ("prime 3\nngens 2\nfrob 1\n", 4, "unknown keyword"),
        ("prime 3\nngens 2\npow 1: 0 1\npow 1: 0 2\n", 5, "twice"),
    ],
)
def test_syntax_errors_report_line(body, line, fragment):
    with pytest.raises(PresentationError, match=fragment) as err:
        parse_presentation("group bad\n" + body + "end\n")
    assert err.value.line == line


def test_error_carries_column():
    with pytest.raises(PresentationError) as err:
        parse_presentation("group bad\nprime 3\nngens 2\npow 1: 0   7\nend\n")
    assert (err.value.line, err.value.column) == (4, 12)


def test_missing_end():
    with pytest.raises(PresentationError, match="no 'end'"):
        parse_presentation("group a\nprime 2\nngens 1\n")


def test_negative_exponents_normalized():
    G = parse_presentation("group n\nprime 3\nngens 2\npow 1: 0 -1\nend\n")
    assert G.power_relations[0] == (0, 2)


def test_multiple_blocks_and_roundtrip():
    text = "".join(format_presentation(e.presentation) for e in builtin_corpus())
    parsed = parse_presentations(text)
    assert [P.name for P in parsed] == [e.name for e in builtin_corpus()]
    for P, e in zip(parsed, builtin_corpus()):
        assert format_presentation(P) == format_presentation(e.presentation)


def test_exactly_one_block_required():
    two = "group a\nprime 2\nngens 1\nend\ngroup b\nprime 2\nngens 1\nend\n"
    with pytest.raises(PresentationError, match="exactly one"):
        parse_presentation(two)


# arithmetic on the order-2187 group -------------------------------------------


def test_g2_g1_collects_to_g1_g2_g3():
    G = example()
    assert collect_product(G, gen(G, 2), gen(G, 1)) == (1, 1, 1, 0, 0, 0, 0)


def test_g1_cubed_is_g4():
    G = example()
    assert collect_product(G, power(G, gen(G, 1), 2), gen(G, 1)) == gen(G, 4)


def test_power_relations_of_example():
    G = example()
    assert power(G, gen(G, 4), 3) == gen(G, 7)
    assert power(G, gen(G, 3), 3) == (0, 0, 0, 0, 0, 0, 2)
    assert power(G, gen(G, 5), 0) == G.identity


def test_commutators_of_example():
    G = example()
    # [g1,g2] = [g2,g1]^-1 = g3^-1, whose normal form is g3^2 g7 because g3^3 = g7^2
    assert commutator(G, gen(G, 1), gen(G, 2)) == inverse(G, gen(G, 3)) == (0, 0, 2, 0, 0, 0, 1)
    assert commutator(G, gen(G, 1), gen(G, 4)) == G.identity
    assert commutator(G, gen(G, 3), G.identity) == G.identity


def test_element_orders_of_example():
    G = example()
    assert element_order(G, G.identity) == 1
    assert element_order(G, gen(G, 4)) == 9
    assert element_order(G, gen(G, 7)) == 3


def test_example_has_2187_elements():
    assert len(enumerate_elements(example())) == 2187


def test_redundant_relations_hold():
    G = example()
    assert power(G, gen(G, 1), 27) == G.identity
    assert power(G, gen(G, 3), 9) == G.identity
    assert power(G, gen(G, 4), 9) == G.identity


# consistency ------------------------------------------------------------------


def test_every_corpus_entry_is_consistent():
    for e in builtin_corpus(check=False):
        report = e.consistency
        assert report.ok, report.summary()
        assert report.order == e.presentation.order


def test_literal_example_is_inconsistent():
    report = check_consistency(parse_presentation(LITERAL.read_text()))
    assert not report.ok
    assert any("[g2,g1]" in f or "g2^p" in f for f in report.failures)


def _with_comm(P, key, value, name):
    comms = dict(P.commutator_relations)
    comms[key] = value
    return PcPresentation(name, P.prime, P.ngens, P.power_relations, comms)


G5 = (0, 0, 0, 0, 1, 0, 0)


def test_comm_2_1_to_g5_gives_a_genuine_group():
    # This mutation happens to be consistent; an independent table check agrees.
    for base in (example(), parse_presentation(LITERAL.read_text())):
        mutated = _with_comm(base, (1, 0), G5, "mutated")
        assert check_consistency(mutated).ok
        T = FiniteGroup.from_presentation(mutated).table
        x = np.arange(len(T))
        for g in range(7):
            gid = mutated.element_id(mutated.generator(g))
            assert np.array_equal(T[T[x[:, None], x[None, :]], gid], T[x[:, None], T[x, gid][None, :]])


def test_broken_fixture_fails():
    report = check_consistency(parse_presentation((DATA / "broken.pcg").read_text()))
    assert not report.ok
    assert report.failures


def test_mutated_comm_3_2_fails():
    assert not check_consistency(_with_comm(example(), (2, 1), G5, "m"), sample=100).ok


def test_cyclic_five_consistent():
    report = check_consistency(parse_presentation("group c5\nprime 5\nngens 1\nend\n"))
    assert report.ok and report.order == 5


def test_lcg_sequence_is_fixed():
    # x1 = (1103515245 * 20240229 + 12345) mod 2^31
    first = (1103515245 * 20240229 + 12345) % 2**31
    assert next(lcg_indices(1, 2**31)) == first
    assert list(lcg_indices(5, 2187)) == list(lcg_indices(5, 2187))


def test_direct_product_order_and_consistency():
    he = get_entry("he27").presentation
    P = direct_product(get_entry("c9").presentation, he, "c9xhe27b")
    assert P.order == 243 and check_consistency(P).ok


# group axioms -----------------------------------------------------------------

# exhaustive axiom checks over the whole corpus live in the acceptance suite (criterion 8)


@pytest.mark.parametrize("name", ["ex-2187", "cl3-729", "d16"])
def test_table_agrees_with_collection(name):
    e = get_entry(name)
    P, G = e.presentation, e.group
    for x, y in zip(lcg_indices(200, P.order, seed=1), lcg_indices(200, P.order, seed=2)):
        prod = collect_product(P, P.element_from_id(x), P.element_from_id(y))
        assert P.element_id(prod) == G.table[x, y]


CORPUS_NAMES = [e.name for e in builtin_corpus(check=False)]


@st.composite
def corpus_elements(draw, k=3):
    P = get_entry(draw(st.sampled_from(CORPUS_NAMES))).presentation
    elems = [
        tuple(draw(st.lists(st.integers(0, P.prime - 1), min_size=P.ngens, max_size=P.ngens)))
        for _ in range(k)
    ]
    return P, elems


@settings(max_examples=150, deadline=None)
@given(corpus_elements())
def test_collection_axioms(data):
    P, (a, b, c) = data
    ab = collect_product(P, a, b)
    assert all(0 <= e < P.prime for e in ab)
    assert collect_product(P, ab, c) == collect_product(P, a, collect_product(P, b, c))
    assert collect_product(P, P.identity, a) == a == collect_product(P, a, P.identity)
    assert collect_product(P, a, power(P, a, -1)) == P.identity
    assert collect_product(P, inverse(P, a), a) == P.identity
    assert P.order % element_order(P, a) == 0


@settings(max_examples=100, deadline=None)
@given(corpus_elements(k=2), st.integers(-20, 20), st.integers(-20, 20))
def test_power_laws(data, m, n):
    P, (a, _) = data
    assert collect_product(P, power(P, a, m), power(P, a, n)) == power(P, a, m + n)


def test_element_ids_roundtrip():
    P = get_entry("c9xhe27").presentation
    for k, v in enumerate(itertools.islice(enumerate_elements(P), 300)):
        assert P.element_id(v) == k and P.element_from_id(k) == v
