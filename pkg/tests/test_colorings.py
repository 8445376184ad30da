import itertools

import pytest
from hypothesis import given, settings, strategies as st

from caring.colorings import (
    BLUE, GREEN, RED, TERNARY_CODE, YELLOW, BinaryLabeling, ColoringRounds,
    LabelingPropertyError, binary_four_color_rounds, coloring_as_rounds, default_labeling,
    dump_rounds, encode_rounds_to_ternary, hamiltonian_decomposition_coloring,
    has_two_ones_of_four_property, is_trifferent, load_rounds, log2_ceil, one_factorization,
    p_lower_bound, paired_one_factorization_coloring, three_color_rounds_from_labels,
)
from caring.graph import EdgeColoring, FormatError, PatternKind, edges
from caring.verify import monochromatic_free, rounds_rainbow_p4


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
def test_walecki_classes_are_hamiltonian_cycles(n):
    c = hamiltonian_decomposition_coloring(n)
    assert c.k == (n - 1) // 2
    for i in range(c.k):
        g = c.class_graph(i)
        assert g.edge_count == n and all(g.degree(v) == 2 for v in range(n)) and g.is_connected()


def test_walecki_rejects_even():
    with pytest.raises(ValueError):
        hamiltonian_decomposition_coloring(8)


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_one_factorization(n):
    fs = one_factorization(n)
    assert len(fs) == n - 1
    seen = set()
    for f in fs:
        assert sorted(x for e in f for x in e) == list(range(n))
        seen.update(frozenset(e) for e in f)
    assert len(seen) == n * (n - 1) // 2


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_paired_factorization_has_max_degree_two(n):
    c = paired_one_factorization_coloring(n)
    assert c.k == n // 2
    assert all(c.class_graph(i).degree(v) <= 2 for i in range(c.k) for v in range(n))
    assert monochromatic_free(c, PatternKind.K13).verdict


def test_four_color_rule_by_hand():
    lab = BinaryLabeling.from_strings(["000", "001", "011", "110"])
    r = binary_four_color_rounds(4, lab)
    # 001 vs 011: coordinate 0 both 0, 1 first difference, 2 both 1
    assert [r.rounds[i].color(1, 2) for i in range(3)] == [BLUE, RED, GREEN]
    # 011 vs 110: differ first at 0, then 1 agrees, 2 differs later
    assert [r.rounds[i].color(2, 3) for i in range(3)] == [RED, GREEN, YELLOW]


@pytest.mark.parametrize("n", [4, 5, 8, 9, 16, 17])
def test_round_count(n):
    r = binary_four_color_rounds(n)
    assert len(r) == log2_ceil(n) and r.palette == 4
    t = encode_rounds_to_ternary(r)
    assert len(t) == 2 * len(r) and t.palette == 3


def test_log2_ceil():
    assert [log2_ceil(n) for n in (1, 2, 3, 4, 5, 8, 9, 64, 65)] == [0, 1, 2, 2, 3, 3, 4, 6, 7]


def test_trifference_of_code():
    assert is_trifferent(TERNARY_CODE) == (True, None)
    # brute force over all 3-subsets
    for trio in itertools.combinations(TERNARY_CODE.values(), 3):
        assert any(len({w[i] for w in trio}) == 3 for i in range(2))
    bad = {0: (0, 0), 1: (0, 1), 2: (1, 1), 3: (2, 2)}
    assert is_trifferent(bad) == (False, (0, 1, 2))


def test_ternary_encoding_uses_code():
    r = binary_four_color_rounds(8)
    t = encode_rounds_to_ternary(r)
    for i, c in enumerate(r.rounds):
        for e, x in enumerate(c.colors):
            assert (t.rounds[2 * i].colors[e], t.rounds[2 * i + 1].colors[e]) == TERNARY_CODE[x]
    with pytest.raises(ValueError):
        encode_rounds_to_ternary(t)


def brute_two_ones(labels):
    for quad in itertools.combinations(range(len(labels)), 4):
        if not any(sum(labels[v][i] for v in quad) == 2 for i in range(len(labels[0]))):
            return False, quad
    return True, None


def test_default_labeling_lacks_two_ones_property():
    lab = default_labeling(8)
    assert has_two_ones_of_four_property(lab) == brute_two_ones(lab.labels) == (False, (0, 1, 2, 4))
    with pytest.raises(LabelingPropertyError) as exc:
        three_color_rounds_from_labels(lab)
    assert exc.value.quadruple == (0, 1, 2, 4)


labelings = st.integers(4, 9).flatmap(lambda n: st.integers(3, 6).flatmap(
    lambda t: st.lists(st.tuples(*[st.integers(0, 1)] * t), min_size=n, max_size=n, unique=True)
)).filter(lambda labs: len(labs) <= 2 ** len(labs[0]))


@settings(max_examples=60, deadline=None)
@given(labelings)
def test_two_ones_labelings_give_p4_rounds(labs):
    lab = BinaryLabeling(len(labs[0]), tuple(labs))
    ok, quad = has_two_ones_of_four_property(lab)
    assert (ok, quad) == brute_two_ones(lab.labels)
    if ok:
        assert rounds_rainbow_p4(three_color_rounds_from_labels(lab)).verdict


def test_two_ones_labeling_example():
    # weight-2 words of length 4: any four have a coordinate with exactly two 1s
    words = [w for w in itertools.product((0, 1), repeat=4) if sum(w) == 2]
    lab = BinaryLabeling(4, tuple(words))
    assert has_two_ones_of_four_property(lab)[0] == brute_two_ones(words)[0]


def test_labeling_validation():
    with pytest.raises(ValueError):
        BinaryLabeling(2, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        BinaryLabeling(2, ((0, 2),))


def test_p_lower_bound():
    # ceil(log3(n-1)) checked against floating point away from powers of three
    assert [p_lower_bound(n) for n in (2, 3, 4, 10, 11, 28, 29, 82)] == [0, 1, 1, 2, 3, 3, 4, 4]


def test_rounds_roundtrip_and_errors():
    r = binary_four_color_rounds(6)
    assert load_rounds(dump_rounds(r)) == r
    with pytest.raises(FormatError):
        load_rounds("")
    with pytest.raises(FormatError) as exc:
        load_rounds("3 1 2\n0 1 5\n")
    assert exc.value.line == 2
    with pytest.raises(FormatError):
        load_rounds("3 2 2\n0 1 1\n")
    with pytest.raises(FormatError):
        load_rounds("3 1 two\n0 1 1\n")


def test_rounds_validate_members():
    with pytest.raises(ValueError):
        ColoringRounds(4, 3, (EdgeColoring(4, 4, (0,) * 6),))
    c = EdgeColoring(4, 2, (0, 1, 0, 1, 0, 1))
    assert coloring_as_rounds(c).rounds == (c,)
    assert len(edges(4)) == 6
