"""Explicit colorings: Hamiltonian decompositions, paired one-factorizations and
the multi-round binary-label families."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import scan
from .graph import EdgeColoring, FormatError, edge_index, edges, num_edges

BLUE, GREEN, RED, YELLOW = 0, 1, 2, 3
COLOR_NAMES = ("blue", "green", "red", "yellow")
# ternary rounds built from labels: 0 = both bits 0, 1 = both bits 1, 2 = bits differ
MIXED = 2

# codewords of length 2 over {0,1,2}; any three are trifferent somewhere
TERNARY_CODE = {BLUE: (0, 0), GREEN: (0, 1), RED: (1, 2), YELLOW: (2, 2)}


@dataclass(frozen=True)
class ColoringRounds:
    n: int
    palette: int
    rounds: tuple[EdgeColoring, ...]

    def __post_init__(self):
        object.__setattr__(self, "rounds", tuple(self.rounds))
        for i, c in enumerate(self.rounds):
            if c.n != self.n:
                raise ValueError(f"round {i} colors K_{c.n}, expected K_{self.n}")
            if c.k != self.palette:
                raise ValueError(f"round {i} has palette {c.k}, expected {self.palette}")

    def __len__(self) -> int:
        return len(self.rounds)

    def stacked(self) -> np.ndarray:
        """(rounds, n, n) color matrices."""
        if not self.rounds:
            return np.zeros((0, self.n, self.n), dtype=np.int32)
        return np.stack([c.matrix for c in self.rounds])


@dataclass(frozen=True)
class BinaryLabeling:
    t: int
    labels: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        labels = tuple(tuple(int(b) for b in lab) for lab in self.labels)
        object.__setattr__(self, "labels", labels)
        if any(len(lab) != self.t or set(lab) - {0, 1} for lab in labels):
            raise ValueError(f"labels must be 0/1 sequences of length {self.t}")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_strings(cls, words) -> "BinaryLabeling":
        words = list(words)
        t = len(words[0]) if words else 0
        return cls(t, tuple(tuple(int(ch) for ch in w) for w in words))

    def array(self) -> np.ndarray:
        return np.array(self.labels, dtype=np.int8).reshape(self.n, self.t)


def log2_ceil(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


def default_labeling(n: int) -> BinaryLabeling:
    """Binary forms of 0..n-1, zero-padded to ceil(log2 n) digits."""
    t = log2_ceil(n)
    return BinaryLabeling(t, tuple(tuple((v >> (t - 1 - i)) & 1 for i in range(t)) for v in range(n)))


def hamiltonian_decomposition_coloring(n: int) -> EdgeColoring:
    """Walecki decomposition of K_n, n odd, into (n-1)/2 Hamiltonian cycles.

    Vertex n-1 is the hub; cycle i is the zigzag path 0, 1, -1, 2, -2, ...
    on Z_{n-1} shifted by i, closed through the hub.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"Hamiltonian decomposition needs odd n >= 3, got {n}")
    m = n - 1
    zigzag = [0]
    for s in range(1, m // 2 + 1):
        zigzag.append(s)
        if len(zigzag) < m:
            zigzag.append(m - s)
    colors = [-1] * num_edges(n)
    for i in range(m // 2):
        cycle = [n - 1] + [(p + i) % m for p in zigzag]
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            colors[edge_index(a, b, n)] = i
    return EdgeColoring(n, m // 2, tuple(colors))


def one_factorization(n: int) -> list[list[tuple[int, int]]]:
    """Circle method: n-1 perfect matchings of K_n, n even."""
    if n < 2 or n % 2:
        raise ValueError(f"one-factorization needs even n >= 2, got {n}")
    m = n - 1
    out = []
    for r in range(m):
        match = [(min(r, m), max(r, m))]
        for i in range(1, n // 2):
            a, b = (r + i) % m, (r - i) % m
            match.append((min(a, b), max(a, b)))
        out.append(match)
    return out


def paired_one_factorization_coloring(n: int) -> EdgeColoring:
    """Matchings 2i and 2i+1 share color i; the last one is alone when n-1 is odd."""
    if n < 4 or n % 2:
        raise ValueError(f"paired one-factorization needs even n >= 4, got {n}")
    colors = [-1] * num_edges(n)
    for r, match in enumerate(one_factorization(n)):
        for u, v in match:
            colors[edge_index(u, v, n)] = r // 2
    return EdgeColoring(n, n // 2, tuple(colors))


def _four_color(lu, lv, i: int) -> int:
    if lu[i] == lv[i]:
        return BLUE if lu[i] == 0 else GREEN
    return YELLOW if lu[:i] != lv[:i] else RED


def binary_four_color_rounds(n: int, labeling: BinaryLabeling | None = None) -> ColoringRounds:
    """One 4-coloring per label coordinate.

    For coordinate i: blue if both bits are 0, green if both are 1, red if they
    differ at i and agree on every earlier coordinate, yellow otherwise.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    lab = labeling or default_labeling(n)
    if lab.n != n:
        raise ValueError(f"labeling has {lab.n} labels for n={n}")
    L = lab.labels
    rounds = [
        EdgeColoring(n, 4, tuple(_four_color(L[u], L[v], i) for u, v in edges(n)))
        for i in range(lab.t)
    ]
    return ColoringRounds(n, 4, tuple(rounds))


def is_trifferent(code: dict[int, tuple[int, ...]]) -> tuple[bool, tuple[int, ...] | None]:
    """Any three codewords are pairwise distinct in a common coordinate."""
    for trio in combinations(sorted(code), 3):
        words = [code[c] for c in trio]
        if not any(len({w[i] for w in words}) == 3 for i in range(len(words[0]))):
            return False, trio
    return True, None


def encode_rounds_to_ternary(rounds: ColoringRounds, code=TERNARY_CODE) -> ColoringRounds:
    """Replace every 4-color round by two 3-color rounds via the codeword map."""
    if rounds.palette != 4:
        raise ValueError(f"expected palette 4, got {rounds.palette}")
    width = len(next(iter(code.values())))
    out = []
    for c in rounds.rounds:
        for pos in range(width):
            out.append(EdgeColoring(rounds.n, 3, tuple(code[x][pos] for x in c.colors)))
    return ColoringRounds(rounds.n, 3, tuple(out))


class LabelingPropertyError(ValueError):
    def __init__(self, quadruple):
        super().__init__(f"no coordinate splits labels {quadruple} two-and-two")
        self.quadruple = quadruple


def _first_unsplit(rows: np.ndarray, arr: np.ndarray):
    ones = arr[rows].sum(axis=1)  # (rows, t)
    bad = np.flatnonzero(~(ones == 2).any(axis=1))
    return tuple(int(x) for x in rows[bad[0]]) if len(bad) else None


def has_two_ones_of_four_property(lab: BinaryLabeling, workers: int = 1):
    """Every four labels have a coordinate where exactly two of them are 1."""
    if lab.n < 4:
        return True, None
    arr = lab.array()
    for hit in scan.map_chunks(_first_unsplit, lab.n, 4, (arr,), workers):
        if hit is not None:
            return False, hit
    return True, None


def three_color_rounds_from_labels(lab: BinaryLabeling, workers: int = 1) -> ColoringRounds:
    """One 3-coloring per coordinate: both 0, both 1, or mixed."""
    ok, quad = has_two_ones_of_four_property(lab, workers)
    if not ok:
        raise LabelingPropertyError(quad)
    L = lab.labels
    rounds = []
    for i in range(lab.t):
        rounds.append(EdgeColoring.from_function(
            lab.n, 3, lambda u, v: MIXED if L[u][i] != L[v][i] else L[u][i]))
    return ColoringRounds(lab.n, 3, tuple(rounds))


def p_lower_bound(n: int) -> int:
    """ceil(log3(n-1)): two edges at a vertex must differ in some round."""
    if n < 2:
        return 0
    r, cap = 0, 1
    while cap < n - 1:
        cap *= 3
        r += 1
    return r


def dump_rounds(rounds: ColoringRounds) -> str:
    lines = [f"{rounds.n} {len(rounds)} {rounds.palette}"]
    lines.extend(" ".join(map(str, c.colors)) for c in rounds.rounds)
    return "\n".join(lines) + "\n"


def load_rounds(text: str) -> ColoringRounds:
    lines = [(i, ln.split()) for i, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise FormatError("empty rounds file", 1)
    lineno, head = lines[0]
    try:
        n, r, p = (int(x) for x in head)
    except ValueError:
        raise FormatError("header must be 'n r p'", lineno) from None
    if n < 1 or r < 0 or p < 1:
        raise FormatError("header values out of range", lineno)
    m = num_edges(n)
    ids: list[tuple[int, int]] = []
    for lineno, parts in lines[1:]:
        for tok in parts:
            try:
                ids.append((lineno, int(tok)))
            except ValueError:
                raise FormatError(f"non-integer color {tok!r}", lineno) from None
    if len(ids) != r * m:
        raise FormatError(f"expected {r * m} color ids, found {len(ids)}", lines[-1][0])
    for lineno, x in ids:
        if not 0 <= x < p:
            raise FormatError(f"color {x} outside palette {p}", lineno)
    vals = [x for _, x in ids]
    return ColoringRounds(n, p, tuple(EdgeColoring(n, p, tuple(vals[i * m:(i + 1) * m])) for i in range(r)))


def coloring_as_rounds(c: EdgeColoring) -> ColoringRounds:
    return ColoringRounds(c.n, c.k, (c,))

