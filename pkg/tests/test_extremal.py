import itertools
import os

import pytest

from caring.extremal import (
    BudgetExceeded, SearchBudget, exact_a, exact_b, exact_f, exact_g, exact_p, ramsey_feasible,
)
from caring.graph import EdgeColoring, PatternKind, num_edges
from caring.verify import (
    is_caring, monochromatic_free, rainbow_everywhere, rounds_rainbow_p4, scan_monochromatic,
)

K3, K13, P4 = PatternKind.K3, PatternKind.K13, PatternKind.P4


# Frozen from the backtracking oracle and cross-checked below by plain
# enumeration where that is affordable.
B_VALUES = {
    (K13, 4): 2, (K13, 5): 2, (K13, 6): 3, (K13, 7): 3, (K13, 8): 4,
    (P4, 4): 2, (P4, 5): 3, (P4, 6): 4, (P4, 7): 4, (P4, 8): 4,
    (K3, 3): 2, (K3, 4): 2, (K3, 5): 2, (K3, 6): 3,
}
A_VALUES = {(K13, 4): 3, (K13, 5): 3, (K13, 6): 3, (P4, 4): 3, (P4, 5): 3, (P4, 6): 3}
G_VALUES = {(K13, 4): 3, (K13, 5): 3, (K13, 6): 3, (P4, 4): 3, (P4, 5): 4, (P4, 6): 4}


@pytest.mark.parametrize("key", sorted(B_VALUES, key=lambda k: (k[0].value, k[1])))
def test_b_values(key):
    kind, n = key
    res = exact_b(n, kind)
    assert res.value == B_VALUES[key]
    assert res.witness.k == res.value
    assert monochromatic_free(res.witness, kind).verdict


@pytest.mark.parametrize("key", sorted(A_VALUES, key=lambda k: (k[0].value, k[1])))
def test_a_and_g_values(key):
    kind, n = key
    a, g = exact_a(n, kind), exact_g(n, kind)
    assert (a.value, g.value) == (A_VALUES[key], G_VALUES[key])
    assert rainbow_everywhere(a.witness, kind).verdict
    assert is_caring(g.witness, kind).verdict


def test_g_dominates_a_and_b():
    for (kind, n), g in G_VALUES.items():
        assert g >= max(A_VALUES[(kind, n)], B_VALUES[(kind, n)])


def _copies(n, kind):
    """Edge-index triples of every copy of the pattern in K_n, grouped by subset."""
    idx = {e: i for i, e in enumerate((u, v) for v in range(n) for u in range(v))}
    out = []
    for sub in itertools.combinations(range(n), kind.order):
        group = set()
        for p in itertools.permutations(sub):
            if kind is K3:
                es = [(p[0], p[1]), (p[1], p[2]), (p[0], p[2])]
            elif kind is K13:
                es = [(p[0], p[1]), (p[0], p[2]), (p[0], p[3])]
            else:
                es = [(p[0], p[1]), (p[1], p[2]), (p[2], p[3])]
            group.add(tuple(sorted(idx[tuple(sorted(e))] for e in es)))
        out.append(list(group))
    return out


def _mono_free(groups):
    return lambda cs: not any(cs[a] == cs[b] == cs[c] for g in groups for a, b, c in g)


def _rainbow(groups):
    return lambda cs: all(
        any(cs[a] != cs[b] and cs[b] != cs[c] and cs[a] != cs[c] for a, b, c in g) for g in groups)


def _brute_min(n, pred, kmax):
    for k in range(1, kmax + 1):
        if any(pred(cs) for cs in itertools.product(range(k), repeat=num_edges(n))):
            return k
    return None


def test_symmetry_breaking_is_sound_n5():
    """Unsymmetrized enumeration of every coloring of K5 agrees with the oracle."""
    for kind in (K13, K3, P4):
        assert _brute_min(5, _mono_free(_copies(5, kind)), 3) == B_VALUES[(kind, 5)]


def test_a_and_g_by_enumeration():
    for kind in (K13, P4):
        for n in (4, 5):
            groups = _copies(n, kind)
            mono, rainbow = _mono_free(groups), _rainbow(groups)
            assert _brute_min(n, rainbow, 3) == A_VALUES[(kind, n)]
            caring = _brute_min(n, lambda cs: mono(cs) and rainbow(cs), 3)
            # None means more than 3 colors are needed
            assert caring == (G_VALUES[(kind, n)] if G_VALUES[(kind, n)] <= 3 else None)


def test_small_extra_values():
    assert exact_b(9, P4).value == 4
    assert exact_b(9, K13).value == 4
    assert exact_a(7, K13).value == 3 and exact_g(7, K13).value == 3
    assert exact_a(7, P4).value == 3 and exact_g(7, P4).value == 4


@pytest.mark.parametrize("n,q,value", [(4, 4, 4), (4, 6, 6), (5, 3, 3), (5, 4, 4), (6, 3, 3), (6, 4, 4)])
def test_f_values(n, q, value):
    res = exact_f(n, 4, q)
    assert res.value == value
    w = res.witness
    assert all(len({w.color(a, b) for a, b in itertools.combinations(quad, 2)}) >= q
               for quad in itertools.combinations(range(n), 4))


def test_f_argument_checks():
    with pytest.raises(ValueError):
        exact_f(5, 3, 3)
    with pytest.raises(ValueError):
        exact_f(5, 4, 7)


def test_p_values():
    for n in (4, 5):
        res = exact_p(n)
        assert res.value == 1
        assert rounds_rainbow_p4(res.witness).verdict


def test_ramsey_two_colors():
    ok, w = ramsey_feasible(5, 2)
    assert ok and scan_monochromatic(w, K3).verdict and w.k == 2
    assert ramsey_feasible(6, 2) == (False, None)
    ok, w = ramsey_feasible(2, 2)
    assert ok


def test_ramsey_three_colors_small():
    ok, w = ramsey_feasible(10, 3)
    assert ok and scan_monochromatic(w, K3).verdict


def test_guards_and_budgets():
    with pytest.raises(BudgetExceeded):
        exact_b(10, P4)
    with pytest.raises(BudgetExceeded):
        ramsey_feasible(5, 4)
    with pytest.raises(BudgetExceeded) as exc:
        exact_b(8, P4, SearchBudget(node_cap=50))
    assert exc.value.nodes > 0
    with pytest.raises(BudgetExceeded):
        exact_g(6, P4, SearchBudget(max_colors=3))
    with pytest.raises(ValueError):
        SearchBudget(time_cap=0)
    with pytest.raises(ValueError):
        exact_b(3, P4)


def test_search_is_deterministic():
    a, b = exact_g(6, P4), exact_g(6, P4)
    assert (a.value, a.nodes, a.witness) == (b.value, b.nodes, b.witness)


@pytest.mark.slow
def test_ramsey_16_3():
    budget = SearchBudget(time_cap=float(os.environ.get("CARING_BUDGET_SECONDS", 3600)))
    ok, w = ramsey_feasible(16, 3, budget)
    assert ok and scan_monochromatic(w, K3).verdict
