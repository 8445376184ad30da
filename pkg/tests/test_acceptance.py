"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""
import itertools
import math
import random
import time
from importlib import resources

from caring.colorings import (
    TERNARY_CODE, binary_four_color_rounds, encode_rounds_to_ternary,
    hamiltonian_decomposition_coloring, is_trifferent, log2_ceil,
    paired_one_factorization_coloring,
)
from caring.designs import (
    is_good_kts, is_resolvable, is_steiner, kts9_base, kts_coloring, kts_power_of_three,
)
from caring.extremal import exact_a, exact_b, exact_g, ramsey_feasible
from caring.graph import EdgeColoring, PatternKind, num_edges
from caring.scan import default_workers
from caring.shannon import (
    capacity_lower_bound, chromatic_number, complete_graph, cycle_graph, is_k_colorable,
    PowerView, load_certificate, max_clique, mycielski_graph, mycielskian, or_power, resolve_descriptor,
    root_compare, verify_certificate,
)
from caring.verify import (
    _structural_ok, is_caring, monochromatic_free, rounds_rainbow_p4, scan_monochromatic,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

K3, K13, P4 = PatternKind.K3, PatternKind.K13, PatternKind.P4
WORKERS = default_workers()


def record(number, title, ok, seconds, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({seconds:.2f}s){' ' + detail if detail else ''}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _cert(name):
    return load_certificate((resources.files("caring") / "data" / name).read_text())


def test_criterion_1_kts_chain():
    t0 = time.perf_counter()
    ok, details = True, []
    for t, g in ((2, 4), (3, 13), (4, 40)):
        ks = kts_power_of_three(t)
        n = 3 ** t
        c = kts_coloring(ks)
        rep = is_caring(c, P4, WORKERS)
        step = (is_steiner(ks.flatten())[0] and is_resolvable(ks)[0]
                and is_good_kts(ks, WORKERS)[0] and rep.verdict
                and c.k == (n - 1) // 2 == g and not c.unused_colors()
                and rep.counts["subsets"] == math.comb(n, 4))
        details.append(f"g({n},P4)<={c.k}")
        ok &= step
    # g >= b, and the oracle's b(9,P4) = 4 makes g(9,P4) = 4 exact
    b9 = exact_b(9, P4).value
    ok &= b9 == 4
    details.append(f"b(9,P4)={b9}")
    seconds = time.perf_counter() - t0
    ok &= seconds < 60
    assert record(1, "KTS chain t=2,3,4 caring for P4", ok, seconds, ", ".join(details))


def test_criterion_2_star_caring():
    t0 = time.perf_counter()
    ok = True
    for ks in (kts9_base(), kts_power_of_three(3)):
        c = kts_coloring(ks)
        ok &= is_caring(c, K13, WORKERS).verdict and c.k == (ks.n - 1) // 2
    seconds = time.perf_counter() - t0
    ok &= seconds < 5
    assert record(2, "KTS colorings caring for K13 with (n-1)/2 colors", ok, seconds)


def test_criterion_3_b_star_both_directions():
    t0 = time.perf_counter()
    ok = True
    for n in (5, 7, 9, 11, 13, 15):
        c = hamiltonian_decomposition_coloring(n)
        ok &= c.k == (n - 1) // 2 and monochromatic_free(c, K13, WORKERS).verdict
    for n in (4, 6, 8, 10):
        c = paired_one_factorization_coloring(n)
        ok &= c.k == math.ceil((n - 1) / 2) and monochromatic_free(c, K13, WORKERS).verdict
    oracle = {n: exact_b(n, K13).value for n in (4, 5, 6, 7)}
    ok &= all(v == math.ceil((n - 1) / 2) for n, v in oracle.items())
    seconds = time.perf_counter() - t0
    ok &= seconds < 300
    assert record(3, "b(n,K13) = ceil((n-1)/2) by construction and by search", ok, seconds,
                  f"oracle {oracle}")


def test_criterion_4_multi_round():
    t0 = time.perf_counter()
    ok, tallies = True, []
    for n in (8, 16, 32, 64):
        rounds = binary_four_color_rounds(n)
        rep = rounds_rainbow_p4(rounds, WORKERS)
        ok &= len(rounds) == log2_ceil(n) and rep.verdict and rep.counts["min_rainbow_witnesses"] >= 4
        tern = encode_rounds_to_ternary(rounds)
        ok &= len(tern) == 2 * log2_ceil(n) and tern.palette == 3
        ok &= rounds_rainbow_p4(tern, WORKERS).verdict
        tallies.append(rep.counts["min_rainbow_witnesses"])
    seconds = time.perf_counter() - t0
    ok &= seconds < 60
    assert record(4, "binary 4-color rounds and ternary encoding, n=8..64", ok, seconds,
                  f"min tallies {tallies}")


def test_criterion_5_trifference():
    t0 = time.perf_counter()
    ok = is_trifferent(TERNARY_CODE) == (True, None)
    trios = list(itertools.combinations(TERNARY_CODE.values(), 3))
    ok &= len(trios) == 4 and all(any(len({w[i] for w in trio}) == 3 for i in range(2)) for trio in trios)
    assert record(5, "codewords 00,01,12,22 are trifferent", ok, time.perf_counter() - t0)


def test_criterion_6_shannon_certificates():
    t0 = time.perf_counter()
    five, p28 = _cert("shannon5.cert"), _cert("grotzsch28.cert")
    ok = verify_certificate(five) == (True, None) and five.size == 5
    ok &= verify_certificate(p28) == (True, None) and p28.size == 28
    view = PowerView(*resolve_descriptor(p28.descriptor)[:2])
    checks = [view.adjacent(a, b) for a, b in itertools.combinations(p28.vertices, 2)]
    ok &= len(checks) == 378 and all(checks)
    c5 = capacity_lower_bound(cycle_graph(5), 2)
    ok &= c5.clique_size == 5 and math.isclose(c5.value, math.sqrt(5), rel_tol=1e-12)
    G, t, _ = resolve_descriptor(p28.descriptor)
    m4 = capacity_lower_bound(G, t, certificate=p28)
    # the fourth root of 28 is 2.3003266..., i.e. 2.3003 to the digits quoted
    ok &= m4.clique_size == 28 and math.isclose(m4.value, 28 ** 0.25, rel_tol=1e-12)
    ok &= round(m4.value, 4) == 2.3003
    ok &= 28 ** 2 > 5 ** 4 and root_compare(28, 4, 5, 2) == 1
    seconds = time.perf_counter() - t0
    ok &= seconds < 1
    assert record(6, "C5^2 5-clique and M(C5)^4 28-clique certificates", ok, seconds,
                  f"bound {m4.value:.6f} > sqrt5")


def test_criterion_7_exact_clique():
    t0 = time.perf_counter()
    c5sq = or_power(cycle_graph(5), 2)
    res = max_clique(c5sq)
    ok = c5sq.n == 25 and res.size == 5 and res.exact
    m4 = mycielski_graph(4)
    ok &= max_clique(m4).size == 2
    mk2 = mycielskian(complete_graph(2))
    ok &= mk2.n == 5 and mk2.edge_count == 5 and mk2.is_connected()
    ok &= all(mk2.degree(v) == 2 for v in range(5))
    ok &= not is_k_colorable(m4, 3)[0] and chromatic_number(m4) == 4
    seconds = time.perf_counter() - t0
    ok &= seconds < 10
    assert record(7, "exact cliques, M(K2) = C5, chi(M4) = 4", ok, seconds)


def test_criterion_8_ramsey():
    t0 = time.perf_counter()
    feasible, witness = ramsey_feasible(5, 2)
    ok = feasible and witness.k == 2 and scan_monochromatic(witness, K3).verdict
    ok &= ramsey_feasible(6, 2) == (False, None)
    seconds = time.perf_counter() - t0
    ok &= seconds < 60
    assert record(8, "ramsey_feasible(5,2) true, (6,2) false", ok, seconds)


def test_criterion_9_property_suites():
    t0 = time.perf_counter()
    rng = random.Random(20261018)
    violations = 0
    for i in range(200):
        n = rng.randint(4, 10)
        k = rng.choice([1, 2, 3, 4, num_edges(n) // 3 + 1, num_edges(n) // 2 + 1])
        c = EdgeColoring(n, k, tuple(rng.randrange(k) for _ in range(num_edges(n))))
        for kind in (K3, K13, P4):
            violations += _structural_ok(c, kind) != scan_monochromatic(c, kind).verdict
    for kind in (K13, P4):
        for n in (4, 5, 6):
            a, b, g = exact_a(n, kind).value, exact_b(n, kind).value, exact_g(n, kind).value
            violations += g < max(a, b)
    for t in (2, 3):
        c = kts_coloring(kts_power_of_three(t))
        for v in range(c.n):
            for u, w in itertools.combinations([x for x in range(c.n) if x != v], 2):
                if c.color(v, u) == c.color(v, w) != c.color(u, w):
                    violations += 1
    seconds = time.perf_counter() - t0
    assert record(9, "property suites", violations == 0, seconds, f"{violations} violations")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    raise SystemExit(1 if failed else 0)
