"""Steiner and Kirkman triple systems.

The only systems built here are the affine plane AG(2,3) and its recursive
tripling to 3^t points; anything else comes in through :func:`load_kts`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import scan
from .graph import EdgeColoring, FormatError, edge_pair, num_edges

MAX_T = 7


@dataclass(frozen=True)
class TripleSystem:
    n: int
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        norm = []
        for tr in self.triples:
            tr = tuple(sorted(int(x) for x in tr))
            if len(tr) != 3 or len(set(tr)) != 3:
                raise ValueError(f"not a triple of distinct points: {tr}")
            if tr[0] < 0 or tr[2] >= self.n:
                raise ValueError(f"triple {tr} outside 0..{self.n - 1}")
            norm.append(tr)
        object.__setattr__(self, "triples", tuple(norm))


@dataclass(frozen=True)
class KirkmanSystem:
    n: int
    classes: tuple[tuple[tuple[int, int, int], ...], ...]

    def __post_init__(self):
        classes = tuple(TripleSystem(self.n, cls).triples for cls in self.classes)
        object.__setattr__(self, "classes", classes)

    def flatten(self) -> TripleSystem:
        return TripleSystem(self.n, tuple(tr for cls in self.classes for tr in cls))


def _pair_ids(tr):
    a, b, c = tr
    return (b * (b - 1) // 2 + a, c * (c - 1) // 2 + a, c * (c - 1) // 2 + b)


def is_steiner(ts: TripleSystem) -> tuple[bool, tuple[int, int] | None]:
    """Every pair covered exactly once; else the first bad pair in edge order."""
    cover = np.zeros(num_edges(ts.n), dtype=np.int64)
    for tr in ts.triples:
        for e in _pair_ids(tr):
            cover[e] += 1
    bad = np.flatnonzero(cover != 1)
    if len(bad):
        return False, edge_pair(int(bad[0]))
    return True, None


def is_resolvable(ks: KirkmanSystem) -> tuple[bool, int | None]:
    """Each class partitions the points and the union is Steiner.

    The witness is the first class that is not a partition, or the first class
    holding a triple that covers an already covered pair; it is None when the
    classes are fine but some pair is left uncovered.
    """
    points = set(range(ks.n))
    for i, cls in enumerate(ks.classes):
        seen = [p for tr in cls for p in tr]
        if len(seen) != ks.n or set(seen) != points:
            return False, i
    covered: set[int] = set()
    for i, cls in enumerate(ks.classes):
        for tr in cls:
            for e in _pair_ids(tr):
                if e in covered:
                    return False, i
                covered.add(e)
    if len(covered) != num_edges(ks.n):
        return False, None
    return True, None


def kts_coloring(ks: KirkmanSystem) -> EdgeColoring:
    ok, where = is_resolvable(ks)
    if not ok:
        raise ValueError(f"not a Kirkman system (class {where})")
    colors = [0] * num_edges(ks.n)
    for i, cls in enumerate(ks.classes):
        for tr in cls:
            for e in _pair_ids(tr):
                colors[e] = i
    return EdgeColoring(ks.n, len(ks.classes), tuple(colors))


def _first_bad_quad(rows: np.ndarray, matrix: np.ndarray):
    # KTS colorings put at least 3 colors on any K4, so "bad" means exactly 3
    bad = np.flatnonzero(scan.distinct_count(scan.local_edge_colors(matrix, rows)) <= 3)
    return tuple(int(x) for x in rows[bad[0]]) if len(bad) else None


def is_good_kts(ks: KirkmanSystem, workers: int = 1) -> tuple[bool, tuple[int, ...] | None]:
    """No 4 points whose six pairs lie in only three parallel classes."""
    m = kts_coloring(ks).matrix
    for hit in scan.map_chunks(_first_bad_quad, ks.n, 4, (m,), workers):
        if hit is not None:
            return False, hit
    return True, None


def kts9_base() -> KirkmanSystem:
    """AG(2,3): point (x, y) is 3x + y, classes are the four line directions."""
    def pt(x, y):
        return 3 * (x % 3) + y % 3

    classes = [
        [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(3)],
        [(pt(0, y), pt(1, y), pt(2, y)) for y in range(3)],
        [(pt(0, b), pt(1, b + 1), pt(2, b + 2)) for b in range(3)],
        [(pt(0, b), pt(1, b + 2), pt(2, b + 4)) for b in range(3)],
    ]
    return KirkmanSystem(9, tuple(tuple(c) for c in classes))


def trivial_kts() -> KirkmanSystem:
    """The one-triple system on 3 points."""
    return KirkmanSystem(3, (((0, 1, 2),),))


def lift_kts(ks: KirkmanSystem) -> KirkmanSystem:
    """Triple a KTS on m points to one on 3m points.

    Point (l, j) becomes l*m + j.  The old classes are copied onto the three
    blocks side by side; each shift j adds the class
    {(0, a), (1, a+j), (2, a+2j)} with arithmetic mod m.
    """
    m = ks.n
    classes = [
        tuple(tuple(l * m + p for p in tr) for l in range(3) for tr in cls)
        for cls in ks.classes
    ]
    for j in range(m):
        classes.append(tuple((a, m + (a + j) % m, 2 * m + (a + 2 * j) % m) for a in range(m)))
    return KirkmanSystem(3 * m, tuple(classes))


def kts_power_of_three(t: int, max_t: int = MAX_T) -> KirkmanSystem:
    if t < 2:
        raise ValueError(f"t must be at least 2, got {t}")
    if t > max_t:
        raise ValueError(f"t={t} exceeds the guard limit {max_t}")
    ks = kts9_base()
    for _ in range(t - 2):
        ks = lift_kts(ks)
    return ks


def dump_kts(ks: KirkmanSystem) -> str:
    lines = [f"{ks.n} {len(ks.classes)}"]
    for i, cls in enumerate(ks.classes):
        lines.append(f"class {i}")
        lines.extend(f"{a} {b} {c}" for a, b, c in cls)
    return "\n".join(lines) + "\n"


def load_kts(text: str) -> KirkmanSystem:
    """Parse and fully validate a KTS file; errors carry a line number."""
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise FormatError("empty KTS file", 1)
    lineno, head = lines[0]
    try:
        n, c = (int(x) for x in head)
    except ValueError:
        raise FormatError("header must be 'n c'", lineno) from None
    if n < 3 or n % 6 != 3:
        raise FormatError(f"no Kirkman system exists on {n} points", lineno)
    if c != (n - 1) // 2:
        raise FormatError(f"a KTS on {n} points has {(n - 1) // 2} classes, header says {c}", lineno)
    per = n // 3
    if len(lines) != 1 + c * (per + 1):
        raise FormatError(f"expected {c} classes of {per} triples", lines[-1][0])
    classes = []
    starts = {}
    pos = 1
    for i in range(c):
        lineno, parts = lines[pos]
        if parts != ["class", str(i)]:
            raise FormatError(f"expected 'class {i}'", lineno)
        starts[i] = lineno
        cls = []
        for lineno, parts in lines[pos + 1: pos + 1 + per]:
            try:
                tr = tuple(int(x) for x in parts)
            except ValueError:
                raise FormatError("triple line must be three integers", lineno) from None
            if len(tr) != 3 or len(set(tr)) != 3 or min(tr) < 0 or max(tr) >= n:
                raise FormatError(f"bad triple {parts}", lineno)
            cls.append(tr)
        classes.append(tuple(cls))
        pos += per + 1
    ks = KirkmanSystem(n, tuple(classes))
    ok, where = is_resolvable(ks)
    if not ok:
        if where is None:
            raise FormatError("classes do not cover every pair", lines[0][0])
        raise FormatError(f"class {where} breaks resolvability", starts[where])
    return ks

