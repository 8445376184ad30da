"""OR-products, Mycielskians, exact maximum clique and capacity lower bounds.

In the OR-product two distinct pairs are adjacent when they are adjacent in at
least one coordinate.  Vertex (g, h) of G x H gets index g*|H| + h, so vertices
of G^t are base-|V(G)| numbers with the first coordinate most significant.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .extremal import BudgetExceeded, SearchBudget
from .graph import SimpleGraph, iter_bits

MATERIALIZE_CAP = 20000


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, combinations(range(n), 2))


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return SimpleGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def mycielskian(G: SimpleGraph) -> SimpleGraph:
    """Originals 0..n-1, twin of i at n+i, apex at 2n."""
    n = G.n
    es = list(G.edges())
    for i, j in G.edges():
        es.append((n + i, j))
        es.append((n + j, i))
    es.extend((n + i, 2 * n) for i in range(n))
    return SimpleGraph.from_edges(2 * n + 1, es)


def mycielski_graph(k: int) -> SimpleGraph:
    """M_k: M_2 = K_2, M_3 = C_5, M_4 = M(C_5) (Groetzsch graph).

    M_3 is the cyclically labeled C_5 (isomorphic to M(K_2)), so M_4 uses the
    labels 0..4, twins 5..9, apex 10.
    """
    if k < 2:
        raise ValueError("Mycielski graphs start at k = 2")
    if k == 2:
        return complete_graph(2)
    G = cycle_graph(5)
    for _ in range(k - 3):
        G = mycielskian(G)
    return G


def or_product(G: SimpleGraph, H: SimpleGraph, cap: int = MATERIALIZE_CAP) -> SimpleGraph:
    N = G.n * H.n
    if N > cap:
        raise ValueError(f"product has {N} vertices, above the cap {cap}")
    nh = H.n
    block = (1 << nh) - 1
    rep = sum(1 << (g * nh) for g in range(G.n))  # one bit per block, no carries
    adj = []
    for g in range(G.n):
        gmask = 0
        for g2 in iter_bits(G.adj[g]):
            gmask |= block << (g2 * nh)
        for h in range(nh):
            adj.append(gmask | H.adj[h] * rep)
    return SimpleGraph._unchecked(N, adj)


def or_power(G: SimpleGraph, t: int, cap: int = MATERIALIZE_CAP) -> SimpleGraph:
    if t < 1:
        raise ValueError("power must be at least 1")
    if G.n ** t > cap:
        raise ValueError(f"G^{t} has {G.n ** t} vertices, above the cap {cap}; use PowerView")
    out = G
    for _ in range(t - 1):
        out = or_product(out, G, cap)
    return out


class PowerView:
    """G^t with adjacency computed on demand; vertices are length-t tuples."""

    def __init__(self, base: SimpleGraph, t: int):
        if t < 1:
            raise ValueError("power must be at least 1")
        self.base, self.t = base, t

    @property
    def n(self) -> int:
        return self.base.n ** self.t

    def encode(self, seq: Sequence[int]) -> int:
        i = 0
        for x in seq:
            i = i * self.base.n + x
        return i

    def decode(self, i: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.t):
            i, x = divmod(i, self.base.n)
            out.append(x)
        return tuple(reversed(out))

    def adjacent(self, a: Sequence[int], b: Sequence[int]) -> bool:
        adj = self.base.adj
        return any(adj[x] >> y & 1 for x, y in zip(a, b))


@dataclass(frozen=True)
class CliqueResult:
    size: int
    vertices: tuple[int, ...]
    exact: bool
    nodes: int


def _degeneracy_order(G: SimpleGraph) -> list[int]:
    """Vertices in smallest-last order reversed: densest core first."""
    deg = [G.degree(v) for v in range(G.n)]
    alive = (1 << G.n) - 1
    removed = []
    for _ in range(G.n):
        v = min(iter_bits(alive), key=lambda x: deg[x])
        removed.append(v)
        alive &= ~(1 << v)
        for w in iter_bits(G.adj[v] & alive):
            deg[w] -= 1
    return removed[::-1]


def _greedy_clique(adj: Sequence[int]) -> list[int]:
    best: list[int] = []
    for s in range(len(adj)):
        clique, cand = [s], adj[s]
        while cand:
            v = max(iter_bits(cand), key=lambda x: (adj[x] & cand).bit_count())
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return best


def max_clique(G: SimpleGraph, budget: SearchBudget | None = None) -> CliqueResult:
    """Exact maximum clique: branch and bound with greedy-coloring bounds.

    On budget exhaustion the best clique found so far is returned with
    ``exact=False``.
    """
    budget = budget or SearchBudget()
    n = G.n
    if n == 0:
        return CliqueResult(0, (), True, 0)
    order = _degeneracy_order(G)
    pos = {v: i for i, v in enumerate(order)}
    adj = [0] * n
    for v in range(n):
        for w in iter_bits(G.adj[v]):
            adj[pos[v]] |= 1 << pos[w]

    best = _greedy_clique(adj) if n <= 2000 else [0]
    stack: list[int] = []
    nodes = 0
    start = time.perf_counter()

    def expand(P: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget.node_cap or (nodes % 1024 == 0 and time.perf_counter() - start > budget.time_cap):
            raise BudgetExceeded("clique search budget exceeded", nodes)
        verts, bounds = [], []
        Q, color = P, 0
        while Q:
            color += 1
            avail = Q
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~low & ~adj[v]
                Q &= ~low
                verts.append(v)
                bounds.append(color)
        for i in range(len(verts) - 1, -1, -1):
            if len(stack) + bounds[i] <= len(best):
                return
            v = verts[i]
            stack.append(v)
            newP = P & adj[v]
            if newP:
                expand(newP)
            elif len(stack) > len(best):
                best = stack[:]
            stack.pop()
            P &= ~(1 << v)

    exact = True
    try:
        expand((1 << n) - 1)
    except BudgetExceeded:
        exact = False
    clique = tuple(sorted(order[i] for i in best))
    for a, b in combinations(clique, 2):
        if not G.has_edge(a, b):
            raise AssertionError(f"internal error: {a} and {b} not adjacent")
    return CliqueResult(len(clique), clique, exact, nodes)


# -- certificates -----------------------------------------------------------

@dataclass(frozen=True)
class CliqueCertificate:
    descriptor: str
    vertices: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


_NAMED = {"GROTZSCH": "M(C5)", "GROETZSCH": "M(C5)", "M4": "M(C5)", "PENTAGON": "C5"}


def resolve_graph(name: str) -> tuple[SimpleGraph, int | None]:
    """Graph for a name like C5, K3, M4, M(C5) or grotzsch.

    Also returns the size of the graph the top-level Mycielskian was built
    from (None when the graph is not a Mycielskian), which fixes the
    ``3'``/``z`` token notation.
    """
    key = name.strip().replace(" ", "")
    key = _NAMED.get(key.upper(), key)
    m = re.fullmatch(r"[Mm]\((.+)\)", key)
    if m:
        inner, _ = resolve_graph(m.group(1))
        return mycielskian(inner), inner.n
    m = re.fullmatch(r"([CKM])(\d+)", key.upper())
    if m:
        kind, size = m.group(1), int(m.group(2))
        if kind == "C":
            return cycle_graph(size), None
        if kind == "K":
            return complete_graph(size), None
        G = mycielski_graph(size)
        return G, (G.n - 1) // 2 if size >= 4 else None
    raise ValueError(f"unknown graph {name!r}")


def resolve_descriptor(descriptor: str) -> tuple[SimpleGraph, int, int | None]:
    m = re.fullmatch(r"\s*(.+?)\s*(?:\^\s*(\d+))?\s*", descriptor)
    if not m:
        raise ValueError(f"cannot parse descriptor {descriptor!r}")
    G, twins = resolve_graph(m.group(1))
    return G, int(m.group(2) or 1), twins


_TOKEN = re.compile(r"(\d)('?)|(z)")


def parse_sequence(text: str, twins_of: int | None = None) -> tuple[int, ...]:
    """``0'0'00`` style (digit, primed digit for a twin, z for the apex) or
    comma-separated integer ids."""
    text = text.strip()
    if "," in text:
        return tuple(int(x) for x in text.split(","))
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad token at {text[pos:]!r} in {text!r}")
        digit, prime, z = m.groups()
        if (prime or z) and twins_of is None:
            raise ValueError(f"twin/apex token in {text!r} but the graph is not a Mycielskian")
        if z:
            out.append(2 * twins_of)
        elif prime:
            out.append(twins_of + int(digit))
        else:
            out.append(int(digit))
        pos = m.end()
    return tuple(out)


def format_sequence(seq: Sequence[int], twins_of: int | None = None, n: int = 10) -> str:
    if twins_of is None:
        return "".join(map(str, seq)) if n <= 10 else ",".join(map(str, seq))
    if twins_of > 10:
        return ",".join(map(str, seq))
    out = []
    for x in seq:
        if x == 2 * twins_of:
            out.append("z")
        elif x >= twins_of:
            out.append(f"{x - twins_of}'")
        else:
            out.append(str(x))
    return "".join(out)


def load_certificate(text: str) -> CliqueCertificate:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty certificate")
    descriptor = lines[0]
    _, _, twins = resolve_descriptor(descriptor)
    verts = []
    for ln in lines[1:]:
        verts.extend(parse_sequence(tok, twins) for tok in ln.split())
    return CliqueCertificate(descriptor, tuple(verts))


def dump_certificate(cert: CliqueCertificate) -> str:
    G, _, twins = resolve_descriptor(cert.descriptor)
    return "\n".join([cert.descriptor] + [format_sequence(v, twins, G.n) for v in cert.vertices]) + "\n"


def verify_certificate(cert: CliqueCertificate) -> tuple[bool, tuple | None]:
    """Check every pair of the listed vertices for adjacency in the power graph."""
    G, t, _ = resolve_descriptor(cert.descriptor)
    view = PowerView(G, t)
    for v in cert.vertices:
        if len(v) != t or any(not 0 <= x < G.n for x in v):
            raise ValueError(f"malformed vertex {v} for {cert.descriptor}")
    for a, b in combinations(cert.vertices, 2):
        if not view.adjacent(a, b):
            return False, (a, b)
    return True, None


def certificate_from_clique(result: CliqueResult, base: SimpleGraph, t: int,
                            descriptor: str) -> CliqueCertificate:
    view = PowerView(base, t)
    return CliqueCertificate(descriptor, tuple(view.decode(v) for v in result.vertices))


def product_clique(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Concatenations of a clique of G^s with a clique of G^t: a clique of G^(s+t)."""
    return [tuple(x) + tuple(y) for x, y in product(a, b)]


# -- capacity ---------------------------------------------------------------

@dataclass(frozen=True)
class CapacityBound:
    value: float
    clique_size: int
    t: int
    exact: bool  # clique_size is the clique number of G^t
    source: str


def capacity_lower_bound(G: SimpleGraph, t: int, budget: SearchBudget | None = None,
                         certificate: CliqueCertificate | None = None,
                         cap: int = MATERIALIZE_CAP, search: bool | None = None) -> CapacityBound:
    """omega(G^t)^(1/t), or a certified clique size^(1/t) as a lower bound.

    With a certificate the clique search is skipped unless ``search=True``.
    """
    if search is None:
        search = certificate is None
    if t < 1:
        raise ValueError("power must be at least 1")
    if G.n == 0:
        raise ValueError("empty graph")
    best, exact, source = 0, False, ""
    if certificate is not None:
        view = PowerView(G, t)
        seqs = certificate.vertices
        if any(len(v) != t or any(not 0 <= x < G.n for x in v) for v in seqs):
            raise ValueError("certificate vertices do not live in G^t")
        for a, b in combinations(seqs, 2):
            if not view.adjacent(a, b):
                raise ValueError(f"certificate is not a clique: {a} and {b} are non-adjacent")
        best, source = len(seqs), "certificate"
    if search and G.n ** t <= cap:
        res = max_clique(or_power(G, t, cap), budget)
        if res.size >= best:
            best, exact, source = res.size, res.exact, "search"
    elif search:
        base = max_clique(G, budget)
        best, source = base.size ** t, "product"
    return CapacityBound(best ** (1.0 / t), best, t, exact, source)


def root_compare(a: int, s: int, b: int, t: int) -> int:
    """Sign of a^(1/s) - b^(1/t), decided with integers (a^t vs b^s)."""
    lhs, rhs = a ** t, b ** s
    return (lhs > rhs) - (lhs < rhs)


# -- coloring ---------------------------------------------------------------

def is_k_colorable(G: SimpleGraph, k: int) -> tuple[bool, list[int] | None]:
    """Backtracking proper vertex k-coloring, most-constrained vertex first."""
    n = G.n
    color = [-1] * n
    order = sorted(range(n), key=lambda v: -G.degree(v))

    def rec(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        used = {color[w] for w in iter_bits(G.adj[v]) if color[w] >= 0}
        top = max(color) + 1  # new colors only in increasing order
        for c in range(min(k, top + 1)):
            if c not in used:
                color[v] = c
                if rec(i + 1):
                    return True
                color[v] = -1
        return False

    if rec(0):
        return True, color
    return False, None


def chromatic_number(G: SimpleGraph) -> int:
    for k in range(1 if G.n else 0, G.n + 1):
        if is_k_colorable(G, k)[0]:
            return k
    return 0
