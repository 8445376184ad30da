"""Backtracking oracles for the extremal coloring parameters at small n.

All searches color the edges of K_n one at a time in lexicographic order
(vertex 0's edges first) with two sound symmetry reductions:

* colors are introduced in increasing order (per round), so the first edge
  always gets color 0;
* in single-round searches the colors on vertex 0's edges are nondecreasing,
  which is a relabeling of vertices 1..n-1.

Monochromatic patterns are rejected as soon as their last edge is colored;
subset conditions (rainbow copy, number of colors) are checked when the last
edge of the subset is colored.  Triangle-free searches (Ramsey, b for K3) use
a forward-checking variant with dynamic edge order instead.
"""
from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field
from typing import Callable

from .colorings import ColoringRounds
from .graph import EdgeColoring, PatternKind, iter_bits, local_templates, num_edges
from .graph import edges as canonical_edges

DEFAULT_GUARDS = {
    "b": 9, "b_K3": 6, "g": 7, "a": 7, "f": 8, "ramsey": 16, "p": 5,
}


def _default_time_cap() -> float:
    return float(os.environ.get("CARING_BUDGET_SECONDS", 600))


@dataclass
class SearchBudget:
    """Caps for one search.  ``max_vertices=None`` uses the operation's guard."""

    max_vertices: int | None = None
    max_colors: int = 12
    node_cap: int = 200_000_000
    time_cap: float = field(default_factory=_default_time_cap)

    def __post_init__(self):
        if self.max_vertices is not None and self.max_vertices < 1:
            raise ValueError("max_vertices must be positive")
        if self.max_colors < 1 or self.node_cap < 1 or self.time_cap <= 0:
            raise ValueError("budget caps must be positive")


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, nodes: int = 0, seconds: float = 0.0):
        super().__init__(message)
        self.nodes = nodes
        self.seconds = seconds


@dataclass
class SearchResult:
    parameter: str
    n: int
    kind: str | None
    value: int
    nodes: int
    seconds: float
    witness: EdgeColoring | ColoringRounds | None = None


def _guard(budget: SearchBudget, key: str, n: int) -> None:
    limit = budget.max_vertices if budget.max_vertices is not None else DEFAULT_GUARDS[key]
    if n > limit:
        raise BudgetExceeded(f"n={n} above the vertex guard {limit} for {key}")


class _EdgeSearch:
    """Depth-first edge coloring search; see the module docstring."""

    def __init__(self, n: int, k: int, budget: SearchBudget, *, rounds: int = 1,
                 mono: PatternKind | None = None, subset_size: int | None = None,
                 subset_ok: Callable[[list], bool] | None = None):
        self.n, self.k, self.rounds = n, k, rounds
        self.budget = budget
        self.mono = mono
        self.order = [(u, v) for u in range(n) for v in range(u + 1, n)]
        pos = {e: i for i, e in enumerate(self.order)}
        self.completes: list[list[tuple[int, ...]]] = [[] for _ in self.order]
        self.subset_ok = subset_ok
        if subset_ok is not None and n >= subset_size:
            local = canonical_edges(subset_size)
            for sub in itertools.combinations(range(n), subset_size):
                ps = tuple(pos[(sub[i], sub[j])] for i, j in local)
                self.completes[max(ps)].append(ps)
        self.nodes = 0
        self.start = 0.0

    def _tick(self):
        self.nodes += 1
        if self.nodes % 4096 == 0 or self.nodes > self.budget.node_cap:
            elapsed = time.perf_counter() - self.start
            if self.nodes > self.budget.node_cap:
                raise BudgetExceeded("node cap exceeded", self.nodes, elapsed)
            if elapsed > self.budget.time_cap:
                raise BudgetExceeded("time cap exceeded", self.nodes, elapsed)

    def _mono_hit(self, nb, u, v, c) -> bool:
        au, av = nb[c][u], nb[c][v]
        if self.mono is PatternKind.K3:
            return bool(au & av)
        if self.mono is PatternKind.K13:
            return au.bit_count() >= 2 or av.bit_count() >= 2
        # P4 through the new edge uv, as middle edge or as an end edge
        bu, bv = au & ~(1 << v), av & ~(1 << u)
        if bu and bv and not (bu == bv and bu.bit_count() == 1):
            return True
        keep = ~((1 << u) | (1 << v))
        return any(nb[c][x] & keep for x in iter_bits(bu | bv))

    def run(self):
        """Return per-round color lists of a valid coloring, or None."""
        self.start = time.perf_counter()
        m = len(self.order)
        R, k = self.rounds, self.k
        cols = [[-1] * m for _ in range(R)]
        maxused = [-1] * R
        nb = [[0] * self.n for _ in range(k)] if self.mono else None
        single = R == 1
        values = list(itertools.product(range(k), repeat=R))

        def rec(i: int) -> bool:
            if i == m:
                return True
            u, v = self.order[i]
            for val in values:
                if any(val[r] > maxused[r] + 1 for r in range(R)):
                    continue
                if single and u == 0 and v >= 2 and val[0] < cols[0][i - 1]:
                    continue
                c = val[0]
                if nb is not None and self._mono_hit(nb, u, v, c):
                    continue
                self._tick()
                saved = maxused[:]
                for r in range(R):
                    cols[r][i] = val[r]
                    if val[r] > maxused[r]:
                        maxused[r] = val[r]
                ok = True
                if self.subset_ok is not None:
                    for ps in self.completes[i]:
                        if not self.subset_ok([[cols[r][p] for p in ps] for r in range(R)]):
                            ok = False
                            break
                if ok:
                    if nb is not None:
                        nb[c][u] |= 1 << v
                        nb[c][v] |= 1 << u
                    if rec(i + 1):
                        return True
                    if nb is not None:
                        nb[c][u] &= ~(1 << v)
                        nb[c][v] &= ~(1 << u)
                for r in range(R):
                    cols[r][i] = -1
                maxused[:] = saved
            return False

        if not rec(0):
            return None
        return cols

    def coloring(self, cols, r: int = 0) -> EdgeColoring:
        by_pair = dict(zip(self.order, cols[r]))
        return EdgeColoring(self.n, self.k, tuple(by_pair[e] for e in canonical_edges(self.n)))


class _TriangleSearch:
    """Forward-checking search for triangle-free k-colorings of K_n.

    Every uncolored edge keeps a bitmask of colors that would not close a
    monochromatic triangle.  Vertex 0's edges go first in a fixed order
    (nondecreasing colors), then the edge with the fewest options is picked
    next.  A color not yet used anywhere is only tried in its smallest form,
    which is sound under any edge order because unused colors are
    interchangeable.

    A vertex's neighbors in one color span a triangle-free (k-1)-coloring,
    so each color degree is capped by the largest such clique; the cap comes
    from the same search run with k-1 colors.
    """

    def __init__(self, n: int, k: int, budget: SearchBudget, cap: int | None = None):
        self.n, self.k, self.budget = n, k, budget
        self.cap = cap if cap is not None else _color_degree_cap(k, budget)
        self.nodes = 0
        self.start = 0.0

    _tick = _EdgeSearch._tick

    def run(self):
        n, k, cap = self.n, self.k, self.cap
        self.start = time.perf_counter()
        full = (1 << k) - 1
        dom = [[full] * n for _ in range(n)]
        col = [[-1] * n for _ in range(n)]
        nb = [[0] * n for _ in range(k)]
        free = {(u, v) for u in range(n) for v in range(u + 1, n)}
        trail: list[tuple[int, int, int]] = []
        used = [0]  # number of colors in use

        def assign(u, v, c) -> bool:
            """Color uv with c and prune; False (with changes on the trail) on a wipeout."""
            col[u][v] = col[v][u] = c
            free.discard((u, v))
            bit = 1 << c
            ok = True
            for a, b in ((u, v), (v, u)):
                for w in iter_bits(nb[c][a]):
                    if col[b][w] < 0 and dom[b][w] & bit:
                        trail.append((b, w, dom[b][w]))
                        dom[b][w] &= ~bit
                        dom[w][b] = dom[b][w]
                        if not dom[b][w]:
                            ok = False
            nb[c][u] |= 1 << v
            nb[c][v] |= 1 << u
            for a in (u, v):
                deg = nb[c][a].bit_count()
                if deg > cap:
                    ok = False
                elif deg == cap:
                    for w in range(n):
                        if w != a and col[a][w] < 0 and dom[a][w] & bit:
                            trail.append((a, w, dom[a][w]))
                            dom[a][w] &= ~bit
                            dom[w][a] = dom[a][w]
                            if not dom[a][w]:
                                ok = False
            return ok

        def unassign(u, v, c, mark):
            while len(trail) > mark:
                a, b, d = trail.pop()
                dom[a][b] = dom[b][a] = d
            nb[c][u] &= ~(1 << v)
            nb[c][v] &= ~(1 << u)
            col[u][v] = col[v][u] = -1
            free.add((u, v))

        def rec(i: int) -> bool:
            if not free:
                return True
            if i < n - 1:
                u, v = 0, i + 1
            else:
                u, v = min(free, key=lambda e: (dom[e[0]][e[1]].bit_count(), e))
            options = dom[u][v]
            for c in range(min(k, used[0] + 1)):
                if not options >> c & 1:
                    continue
                if u == 0 and v >= 2 and c < col[0][v - 1]:
                    continue
                self._tick()
                mark, before = len(trail), used[0]
                used[0] = max(used[0], c + 1)
                if assign(u, v, c) and rec(i + 1):
                    return True
                unassign(u, v, c, mark)
                used[0] = before
            return False

        if not rec(0):
            return None
        return [[col[u][v] for u, v in canonical_edges(n)]]

    def coloring(self, cols, r: int = 0) -> EdgeColoring:
        return EdgeColoring(self.n, self.k, tuple(cols[r]))


_CAP_CACHE: dict[int, int] = {}


def _color_degree_cap(k: int, budget: SearchBudget) -> int:
    """Largest n admitting a triangle-free (k-1)-coloring of K_n."""
    j = k - 1
    if j <= 0:
        return 1
    if j not in _CAP_CACHE:
        n = 2
        while _TriangleSearch(n + 1, j, budget).run() is not None:
            n += 1
        _CAP_CACHE[j] = n
    return _CAP_CACHE[j]


def _rainbow_pred(kind: PatternKind):
    templates = local_templates(kind)

    def ok(cols):
        c = cols[0]
        return any(c[a] != c[b] and c[b] != c[x] and c[a] != c[x] for a, b, x in templates)

    return ok


def _minimize(parameter: str, n: int, kind, budget: SearchBudget, start: int, make) -> SearchResult:
    t0 = time.perf_counter()
    nodes = 0
    for k in range(max(1, start), budget.max_colors + 1):
        search = make(k)
        try:
            cols = search.run()
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"{parameter}(n={n}): {exc}", nodes + exc.nodes,
                                 time.perf_counter() - t0) from None
        nodes += search.nodes
        if cols is not None:
            return SearchResult(parameter, n, str(kind) if kind else None, k, nodes,
                                time.perf_counter() - t0, search.coloring(cols))
    raise BudgetExceeded(f"{parameter}(n={n}) needs more than {budget.max_colors} colors",
                         nodes, time.perf_counter() - t0)


def exact_b(n: int, kind: PatternKind, budget: SearchBudget | None = None) -> SearchResult:
    """Least k with a k-coloring of K_n containing no monochromatic copy."""
    budget = budget or SearchBudget()
    _guard(budget, "b_K3" if kind is PatternKind.K3 else "b", n)
    if n < kind.order:
        raise ValueError(f"n must be at least {kind.order}")
    if kind is PatternKind.K3:
        return _minimize("b", n, kind, budget, 1, lambda k: _TriangleSearch(n, k, budget))
    return _minimize("b", n, kind, budget, 1,
                     lambda k: _EdgeSearch(n, k, budget, mono=kind))


def exact_a(n: int, kind: PatternKind, budget: SearchBudget | None = None) -> SearchResult:
    """Least k such that every |V(F)|-subset holds a rainbow copy."""
    budget = budget or SearchBudget()
    _guard(budget, "a", n)
    if n < kind.order:
        raise ValueError(f"n must be at least {kind.order}")
    return _minimize("a", n, kind, budget, 3, lambda k: _EdgeSearch(
        n, k, budget, subset_size=kind.order, subset_ok=_rainbow_pred(kind)))


def exact_g(n: int, kind: PatternKind, budget: SearchBudget | None = None) -> SearchResult:
    """Least k admitting a caring coloring (no monochromatic copy, rainbow copy everywhere)."""
    budget = budget or SearchBudget()
    _guard(budget, "g", n)
    if n < kind.order:
        raise ValueError(f"n must be at least {kind.order}")
    return _minimize("g", n, kind, budget, 3, lambda k: _EdgeSearch(
        n, k, budget, mono=kind, subset_size=kind.order, subset_ok=_rainbow_pred(kind)))


def exact_f(n: int, p: int, q: int, budget: SearchBudget | None = None) -> SearchResult:
    """Least k such that every p-subset spans at least q colors (p = 4 only)."""
    budget = budget or SearchBudget()
    if p != 4:
        raise ValueError("only p = 4 is supported")
    if not 1 <= q <= 6:
        raise ValueError("q must lie in 1..6")
    _guard(budget, "f", n)
    if n < p:
        raise ValueError(f"n must be at least {p}")
    return _minimize("f", n, None, budget, q, lambda k: _EdgeSearch(
        n, k, budget, subset_size=4, subset_ok=lambda cols: len(set(cols[0])) >= q))


def ramsey_feasible(n: int, k: int, budget: SearchBudget | None = None):
    """Is there a k-coloring of K_n without a monochromatic triangle?

    Returns ``(True, witness)`` or ``(False, None)``.
    """
    ok, witness, _ = _ramsey_search(n, k, budget)
    return ok, witness


def _ramsey_search(n: int, k: int, budget: SearchBudget | None = None):
    budget = budget or SearchBudget()
    _guard(budget, "ramsey", n)
    if k > 3:
        raise BudgetExceeded(f"k={k} above the color guard 3")
    if k < 1:
        raise ValueError("k must be positive")
    if n < 3:
        return True, EdgeColoring(n, k, (0,) * num_edges(n)), 0
    search = _TriangleSearch(n, k, budget)
    cols = search.run()
    if cols is None:
        return False, None, search.nodes
    return True, search.coloring(cols), search.nodes


def _p4_rounds_pred(rounds: int):
    templates = local_templates(PatternKind.P4)

    def ok(cols):
        for c in cols:
            for a, b, x in templates:
                if c[a] != c[b] and c[b] != c[x] and c[a] != c[x]:
                    return True
        return False

    return ok


def exact_p(n: int, budget: SearchBudget | None = None) -> SearchResult:
    """Least number of 3-colorings of K_n giving every quadruple a rainbow P4."""
    budget = budget or SearchBudget()
    _guard(budget, "p", n)
    if n < 4:
        raise ValueError("n must be at least 4")
    t0 = time.perf_counter()
    nodes = 0
    for r in range(1, budget.max_colors + 1):
        search = _EdgeSearch(n, 3, budget, rounds=r, subset_size=4, subset_ok=_p4_rounds_pred(r))
        cols = search.run()
        nodes += search.nodes
        if cols is not None:
            witness = ColoringRounds(n, 3, tuple(search.coloring(cols, i) for i in range(r)))
            return SearchResult("p", n, "P4", r, nodes, time.perf_counter() - t0, witness)
    raise BudgetExceeded(f"p(n={n}) needs more than {budget.max_colors} rounds", nodes)

