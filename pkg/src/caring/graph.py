"""Complete-graph edge indexing, simple graphs, edge colorings and pattern copies.

Edges of K_n are indexed colexicographically: the pair {u, v} with u < v gets
index v*(v-1)/2 + u.  The index does not depend on n, so colorings of K_n embed
as prefixes of colorings of K_{n+1}.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(u: int, v: int, n: int) -> int:
    """Canonical index of the unordered pair {u, v} in K_n."""
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"vertex out of range for n={n}: ({u}, {v})")
    if u == v:
        raise ValueError(f"loop ({u}, {v}) is not an edge")
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def edge_pair(e: int) -> tuple[int, int]:
    """Inverse of :func:`edge_index`."""
    if e < 0:
        raise ValueError(f"negative edge index {e}")
    v = (1 + math.isqrt(1 + 8 * e)) // 2
    return e - v * (v - 1) // 2, v


def edges(n: int) -> list[tuple[int, int]]:
    """All pairs of K_n in canonical order."""
    return [(u, v) for v in range(n) for u in range(v)]


def subsets(n: int, r: int) -> Iterator[tuple[int, ...]]:
    """Sorted r-subsets of range(n) in lexicographic order."""
    if r < 1:
        raise ValueError(f"subset size must be positive, got {r}")
    if n < r:
        raise ValueError(f"cannot choose {r} of {n} vertices")
    return itertools.combinations(range(n), r)


class PatternKind(enum.Enum):
    K3 = "K3"
    K13 = "K13"
    P4 = "P4"

    @property
    def order(self) -> int:
        return 3 if self is PatternKind.K3 else 4

    @classmethod
    def parse(cls, text: str) -> "PatternKind":
        key = text.strip().upper().replace(",", "").replace("_", "")
        if key in ("K3", "TRIANGLE"):
            return cls.K3
        if key in ("K13", "STAR", "CLAW"):
            return cls.K13
        if key in ("P4", "PATH"):
            return cls.P4
        raise ValueError(f"unknown pattern {text!r} (expected K3, K13 or P4)")

    def __str__(self) -> str:
        return self.value


class PatternCopy(NamedTuple):
    """One labeled copy of a pattern.

    ``vertices`` is the path order for P4, center-then-leaves for K13 and the
    sorted triangle for K3; ``edges`` holds the three canonical edge indices.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, int, int]


def _eid(u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def pattern_copies(kind: PatternKind, subset: Sequence[int]) -> list[PatternCopy]:
    subset = tuple(subset)
    if len(subset) != kind.order:
        raise ValueError(f"{kind} needs {kind.order} vertices, got {len(subset)}")
    if len(set(subset)) != len(subset) or min(subset) < 0:
        raise ValueError(f"invalid vertex subset {subset}")
    subset = tuple(sorted(subset))
    if kind is PatternKind.K3:
        a, b, c = subset
        return [PatternCopy(subset, (_eid(a, b), _eid(a, c), _eid(b, c)))]
    if kind is PatternKind.K13:
        out = []
        for center in subset:
            leaves = tuple(x for x in subset if x != center)
            out.append(
                PatternCopy((center,) + leaves, tuple(_eid(center, x) for x in leaves))
            )
        return out
    out = []
    for p in itertools.permutations(subset):
        if p[0] < p[3]:
            out.append(PatternCopy(p, (_eid(p[0], p[1]), _eid(p[1], p[2]), _eid(p[2], p[3]))))
    return out


def local_templates(kind: PatternKind) -> list[tuple[int, int, int]]:
    """Pattern copies on the local subset 0..r-1, as positions into the local
    edge list ``edges(r)``.  Used by the vectorized scanners."""
    return [c.edges for c in pattern_copies(kind, range(kind.order))]


class SimpleGraph:
    """Undirected simple graph on vertices 0..n-1 with int-bitset adjacency."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: Sequence[int]):
        if n < 0 or len(adj) != n:
            raise ValueError("adjacency length must equal n")
        adj = tuple(int(a) for a in adj)
        full = (1 << n) - 1
        for v, a in enumerate(adj):
            if a & ~full:
                raise ValueError(f"vertex {v} has a neighbor out of range")
            if a >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            for w in iter_bits(a):
                if not adj[w] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {w})")
        self.n = n
        self.adj = adj

    @classmethod
    def _unchecked(cls, n: int, adj: Sequence[int]) -> "SimpleGraph":
        g = cls.__new__(cls)
        g.n, g.adj = n, tuple(adj)
        return g

    @classmethod
    def from_edges(cls, n: int, edge_list: Iterable[tuple[int, int]]) -> "SimpleGraph":
        adj = [0] * n
        for u, v in edge_list:
            if u == v:
                raise ValueError(f"loop ({u}, {v})")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def induced(self, vertices: Sequence[int]) -> "SimpleGraph":
        pos = {v: i for i, v in enumerate(vertices)}
        return SimpleGraph.from_edges(
            len(vertices),
            [(pos[u], pos[v]) for u, v in self.edges() if u in pos and v in pos],
        )

    def complement(self) -> "SimpleGraph":
        full = (1 << self.n) - 1
        return SimpleGraph(self.n, [full & ~a & ~(1 << v) for v, a in enumerate(self.adj)])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen, frontier = 1, 1
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == (1 << self.n) - 1

    def is_triangle_free(self) -> bool:
        return all(not (self.adj[u] & self.adj[v]) for u, v in self.edges())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimpleGraph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={self.edge_count})"

    def to_text(self) -> str:
        """DIMACS-like edge list: ``n m`` then one ``u v`` per line, 0-indexed."""
        es = self.edges()
        return "\n".join([f"{self.n} {len(es)}"] + [f"{u} {v}" for u, v in es]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SimpleGraph":
        lines = [
            (i, ln.split()) for i, ln in enumerate(text.splitlines(), 1)
            if ln.strip() and not ln.lstrip().startswith(("c ", "#"))
        ]
        if not lines:
            raise FormatError("empty graph file", 1)
        lineno, head = lines[0]
        try:
            n, m = (int(x) for x in head)
        except ValueError:
            raise FormatError("header must be 'n m'", lineno) from None
        if len(lines) - 1 != m:
            raise FormatError(f"header declares {m} edges, found {len(lines) - 1}", lineno)
        pairs = []
        for lineno, parts in lines[1:]:
            try:
                u, v = (int(x) for x in parts)
            except ValueError:
                raise FormatError("edge line must be 'u v'", lineno) from None
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"bad edge ({u}, {v})", lineno)
            pairs.append((u, v))
        return cls.from_edges(n, pairs)


def iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class FormatError(ValueError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class EdgeColoring:
    """A k-coloring of the edges of K_n, stored in canonical edge order."""

    n: int
    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if len(colors) != num_edges(self.n):
            raise ValueError(f"expected {num_edges(self.n)} edge colors, got {len(colors)}")
        if self.k < 1 and colors:
            raise ValueError("k must be positive")
        bad = [c for c in colors if not 0 <= c < self.k]
        if bad:
            raise ValueError(f"color id {bad[0]} outside [0, {self.k})")

    @classmethod
    def from_function(cls, n: int, k: int, fn: Callable[[int, int], int]) -> "EdgeColoring":
        return cls(n, k, tuple(fn(u, v) for u, v in edges(n)))

    @classmethod
    def from_matrix(cls, matrix, k: int | None = None) -> "EdgeColoring":
        m = np.asarray(matrix)
        n = m.shape[0]
        colors = tuple(int(m[u, v]) for u, v in edges(n))
        return cls(n, k if k is not None else max(colors, default=-1) + 1, colors)

    def color(self, u: int, v: int) -> int:
        return self.colors[edge_index(u, v, self.n)]

    @cached_property
    def matrix(self) -> np.ndarray:
        """Symmetric n x n color matrix with -1 on the diagonal (read-only)."""
        m = np.full((self.n, self.n), -1, dtype=np.int32)
        if self.n > 1:
            us, vs = np.array(edges(self.n)).T
            m[us, vs] = self.colors
            m[vs, us] = self.colors
        m.setflags(write=False)
        return m

    def classes(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.k)]
        for (u, v), c in zip(edges(self.n), self.colors):
            out[c].append((u, v))
        return out

    def class_graph(self, c: int) -> SimpleGraph:
        return SimpleGraph.from_edges(self.n, self.classes()[c])

    def unused_colors(self) -> list[int]:
        used = set(self.colors)
        return [c for c in range(self.k) if c not in used]
