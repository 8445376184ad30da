"""Exhaustive verification of monochromatic-freeness, rainbow copies and
multi-round guarantees.

Every check scans all subsets (numpy, chunked by smallest vertex) and reports
the lexicographically smallest failing subset as its witness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Any

import numpy as np

from . import scan
from .colorings import ColoringRounds
from .graph import (
    EdgeColoring, PatternKind, edge_pair, edges, iter_bits, local_templates, pattern_copies,
)

# structural and scanning verdicts are both computed up to this many vertices
SCAN_LIMIT = 12


@dataclass
class VerifyReport:
    check: str
    verdict: bool
    witness: dict[str, Any] | None = None
    counts: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "verdict": "pass" if self.verdict else "fail",
            "witness": self.witness,
            "counts": dict(self.counts),
            "notes": list(self.notes),
        }


def _copy_witness(kind, subset, template_index, colors):
    copy = pattern_copies(kind, subset)[template_index]
    return {
        "subset": list(subset),
        "copy": list(copy.vertices),
        "edges": [list(e) for e in _pairs(copy.edges)],
        "colors": [int(c) for c in colors],
    }


def _pairs(eids):
    return [edge_pair(e) for e in eids]


def _subset_colors(matrix, subset):
    pairs = [(subset[i], subset[j]) for i, j in edges(len(subset))]
    if matrix.ndim == 2:
        return [int(matrix[u, v]) for u, v in pairs]
    return [[int(x) for x in matrix[:, u, v]] for u, v in pairs]


# -- monochromatic copies ---------------------------------------------------

def _mono_chunk(rows, matrix, templates):
    mask = scan.mono_mask(scan.local_edge_colors(matrix, rows), templates)
    hit = np.flatnonzero(mask.any(axis=1))
    if not len(hit):
        return None
    i = int(hit[0])
    return tuple(int(x) for x in rows[i]), int(np.flatnonzero(mask[i])[0])


def scan_monochromatic(c: EdgeColoring, kind: PatternKind, workers: int = 1) -> VerifyReport:
    """Direct scan of every copy of the pattern."""
    report = VerifyReport(f"mono-scan:{kind}", True, counts={"subsets": 0})
    if c.n < kind.order:
        return report
    templates = local_templates(kind)
    results = scan.map_chunks(_mono_chunk, c.n, kind.order, (c.matrix, templates), workers)
    report.counts["subsets"] = _n_subsets(c.n, kind.order)
    for hit in results:
        if hit is not None:
            subset, t = hit
            cols = [c.color(u, v) for u, v in _pairs(pattern_copies(kind, subset)[t].edges)]
            report.verdict = False
            report.witness = _copy_witness(kind, subset, t, cols)
            break
    return report


def _n_subsets(n, r):
    return comb(n, r) if n >= r else 0


def _class_adjacency(c: EdgeColoring) -> list[list[int]]:
    adj = [[0] * c.n for _ in range(c.k)]
    for (u, v), col in zip(edges(c.n), c.colors):
        adj[col][u] |= 1 << v
        adj[col][v] |= 1 << u
    return adj


def _structural_ok(c: EdgeColoring, kind: PatternKind) -> bool:
    adj = _class_adjacency(c)
    if kind is PatternKind.K13:
        return all(a.bit_count() <= 2 for cls in adj for a in cls)
    if kind is PatternKind.K3:
        return all(
            not (cls[u] & cls[v])
            for cls in adj for u in range(c.n) for v in iter_bits(cls[u] >> (u + 1) << (u + 1))
        )
    # P4: every component of every class is a triangle or a star
    for cls in adj:
        seen = 0
        for s in range(c.n):
            if seen >> s & 1 or not cls[s]:
                continue
            comp, frontier = 1 << s, 1 << s
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= cls[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            size = comp.bit_count()
            m = sum(cls[v].bit_count() for v in iter_bits(comp)) // 2
            triangle = size == 3 and m == 3
            star = m == size - 1 and any(cls[v].bit_count() == size - 1 for v in iter_bits(comp))
            if not (triangle or star):
                return False
    return True


def monochromatic_free(c: EdgeColoring, kind: PatternKind, workers: int = 1,
                       scan_limit: int = SCAN_LIMIT) -> VerifyReport:
    """No monochromatic copy of the pattern.

    The verdict comes from class structure: color degree at most 2 for K13,
    triangle and star components for P4, no closed triangle for K3.  Up to
    ``scan_limit`` vertices (and on any failure) the copy-by-copy scan runs
    too and the two must agree.
    """
    ok = _structural_ok(c, kind)
    report = VerifyReport(f"mono:{kind}", ok, counts={"subsets": _n_subsets(c.n, kind.order)})
    if ok and c.n > scan_limit:
        report.notes.append("structural check only")
        return report
    scanned = scan_monochromatic(c, kind, workers)
    if scanned.verdict != ok:
        raise RuntimeError(f"structural and scanning verdicts disagree for {kind}")
    report.witness = scanned.witness
    return report


# -- rainbow copies ---------------------------------------------------------

def _rainbow_chunk(rows, matrix, templates):
    mask = scan.rainbow_mask(scan.local_edge_colors(matrix, rows), templates)
    if mask.ndim == 3:  # (rounds, rows, copies) -> per-row tally over rounds and copies
        tally = mask.sum(axis=(0, 2))
    else:
        tally = mask.sum(axis=1)
    miss = np.flatnonzero(tally == 0)
    first = tuple(int(x) for x in rows[miss[0]]) if len(miss) else None
    return first, int(tally.min()) if len(tally) else 0, int(tally.sum()), len(rows)


def _rainbow_scan(matrix, n, kind, workers):
    templates = local_templates(kind)
    results = scan.map_chunks(_rainbow_chunk, n, kind.order, (matrix, templates), workers)
    first = next((r[0] for r in results if r[0] is not None), None)
    counts = {
        "subsets": sum(r[3] for r in results),
        "min_rainbow_witnesses": min((r[1] for r in results), default=0),
        "rainbow_witnesses": sum(r[2] for r in results),
    }
    return first, counts


def rainbow_everywhere(c: EdgeColoring, kind: PatternKind, workers: int = 1) -> VerifyReport:
    """Every |V(F)|-subset carries a copy whose three edges get three colors."""
    first, counts = _rainbow_scan(c.matrix, c.n, kind, workers)
    report = VerifyReport(f"rainbow:{kind}", first is None, counts=counts)
    if first is not None:
        report.witness = {"subset": list(first), "edge_colors": _subset_colors(c.matrix, first)}
    if kind is PatternKind.K3:
        report.notes.append("trivial case: every triangle must be 3-colored")
    return report


def is_caring(c: EdgeColoring, kind: PatternKind, workers: int = 1) -> VerifyReport:
    mono = monochromatic_free(c, kind, workers)
    rainbow = rainbow_everywhere(c, kind, workers)
    report = VerifyReport(f"caring:{kind}", mono.verdict and rainbow.verdict)
    report.counts = {**rainbow.counts, "colors": c.k, "unused_colors": len(c.unused_colors())}
    report.notes = mono.notes + rainbow.notes
    if not mono.verdict:
        report.witness = {"reason": "monochromatic", **mono.witness}
    elif not rainbow.verdict:
        report.witness = {"reason": "no rainbow copy", **rainbow.witness}
    return report


# -- several rounds ---------------------------------------------------------

def rounds_rainbow_p4(rounds: ColoringRounds, workers: int = 1) -> VerifyReport:
    """Every quadruple has a rainbow P4 in at least one round.

    ``min_rainbow_witnesses`` is the minimum over quadruples of the number of
    (round, P4 copy) pairs that are rainbow.
    """
    if rounds.palette not in (3, 4):
        raise ValueError(f"palette must be 3 or 4, got {rounds.palette}")
    first, counts = _rainbow_scan(rounds.stacked(), rounds.n, PatternKind.P4, workers)
    counts["rounds"] = len(rounds)
    report = VerifyReport("rounds-p4", first is None, counts=counts)
    if first is not None:
        report.witness = {"subset": list(first), "edge_colors": _subset_colors(rounds.stacked(), first)}
    return report


def _triangle_chunk(rows, matrix, required):
    ok = (scan.distinct_count(scan.local_edge_colors(matrix, rows)) >= required).any(axis=0)
    miss = np.flatnonzero(~ok)
    return (tuple(int(x) for x in rows[miss[0]]) if len(miss) else None), len(rows)


def rounds_triangle_multicolored(rounds: ColoringRounds, required_colors: int,
                                 workers: int = 1) -> VerifyReport:
    """Every triangle sees at least ``required_colors`` colors in some round."""
    if required_colors not in (2, 3):
        raise ValueError("required_colors must be 2 or 3")
    matrix = rounds.stacked()
    results = scan.map_chunks(_triangle_chunk, rounds.n, 3, (matrix, required_colors), workers)
    first = next((r[0] for r in results if r[0] is not None), None)
    report = VerifyReport(
        f"rounds-triangle:{required_colors}", first is None,
        counts={"subsets": sum(r[1] for r in results), "rounds": len(rounds)},
    )
    if first is not None:
        report.witness = {"subset": list(first), "edge_colors": _subset_colors(matrix, first)}
    return report
