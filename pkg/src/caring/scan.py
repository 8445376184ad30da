"""Chunked, optionally parallel scanning of all r-subsets of range(n).

Subsets are produced in lexicographic order, one chunk per smallest vertex.
Chunk results come back in chunk order regardless of the worker count, so a
caller that takes the first failing row of the first failing chunk always
gets the lexicographically smallest failing subset.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable

import numpy as np

from .graph import edges


def subset_chunk(n: int, r: int, first: int) -> np.ndarray:
    """All sorted r-subsets of range(n) whose smallest element is ``first``."""
    rest = n - first - 1
    count = math.comb(rest, r - 1)
    if r == 1:
        return np.full((1, 1), first, dtype=np.int64)
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(first + 1, n), r - 1)),
        dtype=np.int64,
        count=count * (r - 1),
    )
    out = np.empty((count, r), dtype=np.int64)
    out[:, 0] = first
    out[:, 1:] = flat.reshape(count, r - 1)
    return out


def local_edge_colors(matrix: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Colors of the C(r,2) local edges of every subset row.

    ``matrix`` is (n, n) or (rounds, n, n); the result is (rows, C(r,2)) or
    (rounds, rows, C(r,2)), local edges in canonical order.
    """
    r = rows.shape[1]
    cols = [matrix[..., rows[:, i], rows[:, j]] for i, j in edges(r)]
    return np.stack(cols, axis=-1)


def rainbow_mask(cols: np.ndarray, templates) -> np.ndarray:
    """Boolean (..., copies): the copy's three edges carry three distinct colors."""
    out = []
    for a, b, c in templates:
        x, y, z = cols[..., a], cols[..., b], cols[..., c]
        out.append((x != y) & (y != z) & (x != z))
    return np.stack(out, axis=-1)


def mono_mask(cols: np.ndarray, templates) -> np.ndarray:
    out = []
    for a, b, c in templates:
        x = cols[..., a]
        out.append((x == cols[..., b]) & (x == cols[..., c]))
    return np.stack(out, axis=-1)


def distinct_count(cols: np.ndarray) -> np.ndarray:
    s = np.sort(cols, axis=-1)
    return 1 + (np.diff(s, axis=-1) != 0).sum(axis=-1)


def _run_chunk(fn: Callable, n: int, r: int, first: int, args: tuple) -> Any:
    return fn(subset_chunk(n, r, first), *args)


def default_workers() -> int:
    return os.cpu_count() or 1


def map_chunks(fn: Callable, n: int, r: int, args: tuple = (), workers: int = 1) -> list:
    """Apply ``fn(rows, *args)`` to every first-vertex chunk, in order.

    ``fn`` must be a module-level function when ``workers > 1``.
    """
    if n < r:
        return []
    firsts = range(n - r + 1)
    if workers <= 1 or n - r + 1 < 2:
        return [_run_chunk(fn, n, r, a, args) for a in firsts]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futs = [pool.submit(_run_chunk, fn, n, r, a, args) for a in firsts]
        return [f.result() for f in futs]
