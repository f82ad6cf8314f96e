"""Near-tournament statistics over sets of dice.

Building the beats digraph on m dice gives a *near tournament*: every
unordered pair carries exactly one directed edge unless the pair ties.
This module computes the triangle statistics that make quasirandomness
visible at desk scale:

* the triple census (transitive / intransitive / incomplete),
* the path-of-length-two double-counting identity,
* out-degree concentration around (m-1)/2,
* frequencies of the small sub-tournament patterns (k = 3, 4).

Triples touching a tied pair are counted as *incomplete* and excluded
from the transitive/intransitive fractions; with ties of probability
o(1) this bucket is a vanishing correction.

The census avoids the O(m^3) triple loop: directed 3-cycles come from
``trace(W^3)/3`` with W the 0/1 win matrix, and the incomplete bucket
from inclusion-exclusion over tied pairs.  The brute-force classifier
lives in the test suite as the oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dice_core import Die
from .samplers import RngStream


@dataclass
class Tournament:
    """Directed beats graph; ties kept separately so edges stay one-way."""

    vertex_count: int
    edges: list[tuple[int, int]]          # (winner, loser)
    tie_pairs: list[tuple[int, int]]      # unordered, i < j
    _win: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def win_matrix(self) -> np.ndarray:
        """Boolean (m, m) matrix, ``W[i, j]`` iff i beats j.  Cached."""
        if self._win is None:
            m = self.vertex_count
            w = np.zeros((m, m), dtype=bool)
            if self.edges:
                arr = np.asarray(self.edges)
                w[arr[:, 0], arr[:, 1]] = True
            self._win = w
        return self._win

    def out_degrees(self) -> np.ndarray:
        return self.win_matrix().sum(axis=1)

    def in_degrees(self) -> np.ndarray:
        return self.win_matrix().sum(axis=0)


@dataclass(frozen=True)
class TripleCensus:
    transitive: int
    intransitive: int
    incomplete: int
    total: int


def _score_matrix(dice: list[Die]) -> np.ndarray:
    """Doubled score sums for every ordered pair, vectorised.

    ``S[i, j] = 2 * sum_t g_{dice[i]}(faces_j[t]) = sum_t 2 f_i(b_t) - n^2``;
    S is exactly antisymmetric and ``S[i, j] < 0`` iff die i beats die j.
    """
    m = len(dice)
    n = dice[0].n
    faces = np.asarray([d.faces for d in dice], dtype=np.int64)
    counts = np.zeros((m, n + 2), dtype=np.int64)
    np.add.at(counts, (np.arange(m)[:, None], faces), 1)
    cum = np.cumsum(counts, axis=1)
    # f2[i, v] = 2*#{faces_i < v} + #{faces_i = v} for v = 1..n
    f2 = np.zeros((m, n + 1), dtype=np.int64)
    values = np.arange(1, n + 1)
    f2[:, 1:] = 2 * cum[:, values - 1] + counts[:, values]
    gathered = f2[:, faces]            # (m, m, n): f2_i at faces of die j
    return gathered.sum(axis=2) - n * n


def build_tournament(dice: list[Die]) -> Tournament:
    """Pairwise beats over all C(m, 2) pairs via the score-sum reduction."""
    if not dice:
        return Tournament(0, [], [])
    n = dice[0].n
    for d in dice:
        if d.n != n:
            raise ValueError(f"mismatched side counts: {d.n} != {n}")
    s = _score_matrix(dice)
    m = len(dice)
    edges: list[tuple[int, int]] = []
    ties: list[tuple[int, int]] = []
    for i in range(m):
        row = s[i]
        for j in range(i + 1, m):
            v = row[j]
            if v < 0:
                edges.append((i, j))
            elif v > 0:
                edges.append((j, i))
            else:
                ties.append((i, j))
    return Tournament(m, edges, ties)


def triple_census(t: Tournament) -> TripleCensus:
    """Classify all C(m, 3) vertex triples without enumerating them.

    Directed 3-cycles are ``trace(W^3)/3``; triples touching a tie come
    from inclusion-exclusion over tied pairs (a pair of tied edges shares
    at most one vertex inside a triple, three tied edges must form a
    triangle).  Transitive triples are the complete remainder.
    """
    m = t.vertex_count
    total = math.comb(m, 3)
    w = t.win_matrix().astype(np.int64)
    cyclic = int(np.trace(w @ w @ w)) // 3
    tie_count = len(t.tie_pairs)
    if tie_count:
        tie_deg = np.zeros(m, dtype=np.int64)
        tmat = np.zeros((m, m), dtype=np.int64)
        for i, j in t.tie_pairs:
            tie_deg[i] += 1
            tie_deg[j] += 1
            tmat[i, j] = tmat[j, i] = 1
        shared = int(sum(math.comb(int(d), 2) for d in tie_deg))
        tie_triangles = int(np.trace(tmat @ tmat @ tmat)) // 6
        incomplete = tie_count * (m - 2) - shared + tie_triangles
    else:
        incomplete = 0
    complete = total - incomplete
    return TripleCensus(
        transitive=complete - cyclic,
        intransitive=cyclic,
        incomplete=incomplete,
        total=total,
    )


@dataclass(frozen=True)
class Path2Report:
    """Both sides of the length-two-path double count.

    ``paths_direct`` counts ordered pairs of composable edges x->y->z by
    matrix product; ``sum_out_in`` is Σ_y d+(y) d-(y); ``triangle_form``
    is (#complete triples) + 2·(#directed 3-cycles).  On a tie-free
    tournament all three agree exactly and ``holds`` says so; with ties
    present the counts are reported and ``holds`` is None.
    """

    paths_direct: int
    sum_out_in: int
    triangle_form: int
    tie_free: bool
    holds: Optional[bool]


def path2_identity_check(t: Tournament) -> Path2Report:
    w = t.win_matrix().astype(np.int64)
    paths_direct = int((w @ w).sum())
    d_out = w.sum(axis=1)
    d_in = w.sum(axis=0)
    sum_out_in = int((d_out * d_in).sum())
    census = triple_census(t)
    complete = census.transitive + census.intransitive
    triangle_form = complete + 2 * census.intransitive
    tie_free = not t.tie_pairs
    holds = (
        bool(paths_direct == sum_out_in == triangle_form) if tie_free else None
    )
    return Path2Report(
        paths_direct=paths_direct,
        sum_out_in=sum_out_in,
        triangle_form=triangle_form,
        tie_free=tie_free,
        holds=holds,
    )


@dataclass(frozen=True)
class OutdegreeSummary:
    vertex_count: int
    epsilon: float
    mean: float
    variance: float
    concentrated_fraction: float


def outdegree_concentration(t: Tournament, epsilon: float) -> OutdegreeSummary:
    """Fraction of vertices with normalised out-degree within 1/2 ± epsilon."""
    m = t.vertex_count
    if m < 2:
        raise ValueError("need at least two vertices")
    d = t.out_degrees().astype(np.float64)
    ratio = d / (m - 1)
    inside = np.abs(ratio - 0.5) <= epsilon
    return OutdegreeSummary(
        vertex_count=m,
        epsilon=epsilon,
        mean=float(d.mean()),
        variance=float(d.var()),
        concentrated_fraction=float(inside.mean()),
    )


# ---------------------------------------------------------------------------
# Small-pattern census (k = 3, 4)
# ---------------------------------------------------------------------------

_K3_NAMES = {(0, 1, 2): "transitive", (1, 1, 1): "cyclic"}
_K4_NAMES = {
    (0, 1, 2, 3): "transitive",
    (1, 1, 1, 3): "one_beats_cycle",
    (0, 2, 2, 2): "cycle_beats_one",
    (1, 1, 2, 2): "strong",
}

_pattern_tables: dict[int, tuple[np.ndarray, list[str], dict[str, int]]] = {}


def _pattern_table(k: int) -> tuple[np.ndarray, list[str], dict[str, int]]:
    """code -> class index lookup over all labeled k-tournaments.

    A labeled tournament on k vertices is encoded by one bit per pair
    (p, q), p < q, set iff p beats q.  Classes are isomorphism classes,
    named by their sorted score sequence (see _K3_NAMES/_K4_NAMES); the
    table also records how many labeled tournaments fall in each class,
    which gives the uniform-reference probabilities size / 2^C(k,2).
    """
    if k in _pattern_tables:
        return _pattern_tables[k]
    if k not in (3, 4):
        raise ValueError("pattern census supports k in {3, 4}")
    pairs = list(itertools.combinations(range(k), 2))
    nbits = len(pairs)
    names_map = _K3_NAMES if k == 3 else _K4_NAMES
    class_of = np.empty(2**nbits, dtype=np.int64)
    names: list[str] = []
    sizes: dict[str, int] = {}
    for code in range(2**nbits):
        wins = [[False] * k for _ in range(k)]
        for bit, (p, q) in enumerate(pairs):
            if code >> bit & 1:
                wins[p][q] = True
            else:
                wins[q][p] = True
        scores = tuple(sorted(sum(row) for row in wins))
        name = names_map[scores]
        if name not in names:
            names.append(name)
            sizes[name] = 0
        sizes[name] += 1
        class_of[code] = names.index(name)
    _pattern_tables[k] = (class_of, names, sizes)
    return _pattern_tables[k]


@dataclass
class PatternCensus:
    """Observed frequencies of k-vertex sub-tournament shapes.

    Only tie-free k-subsets are classified.  ``exhaustive`` tells whether
    every subset was examined or a uniform sample of ``examined`` subsets
    was taken; ``labeled_sizes[name] / 2**C(k,2)`` is the uniform-random
    reference probability for each class.
    """

    k: int
    examined: int
    tie_free: int
    class_counts: dict[str, int]
    labeled_sizes: dict[str, int]
    exhaustive: bool

    def frequencies(self) -> dict[str, float]:
        if self.tie_free == 0:
            return {name: float("nan") for name in self.class_counts}
        return {
            name: count / self.tie_free
            for name, count in self.class_counts.items()
        }

    def reference(self) -> dict[str, float]:
        denom = 2.0 ** math.comb(self.k, 2)
        return {n: s / denom for n, s in self.labeled_sizes.items()}


def pattern_frequencies(
    t: Tournament,
    k: int,
    rng: Optional[RngStream] = None,
    sample_limit: int = 200_000,
) -> PatternCensus:
    """Frequencies of the k-vertex patterns among tie-free k-subsets.

    Exhausts all C(m, k) subsets when that count is within
    ``sample_limit``; otherwise classifies a uniform sample of
    ``sample_limit`` subsets drawn from ``rng`` (deterministic for a fixed
    stream).
    """
    class_of, names, sizes = _pattern_table(k)
    m = t.vertex_count
    counts = {name: 0 for name in names}
    total_subsets = math.comb(m, k) if m >= k else 0
    if total_subsets == 0:
        return PatternCensus(k, 0, 0, counts, dict(sizes), True)
    exhaustive = total_subsets <= sample_limit
    if exhaustive:
        idx = np.fromiter(
            itertools.chain.from_iterable(
                itertools.combinations(range(m), k)
            ),
            dtype=np.int64,
        ).reshape(total_subsets, k)
    else:
        if rng is None:
            rng = RngStream(0, 0)
        gen = rng.generator()
        rows: list[np.ndarray] = []
        need = sample_limit
        while need > 0:
            cand = gen.integers(0, m, size=(need + need // 4 + 16, k))
            distinct = np.ones(len(cand), dtype=bool)
            for p in range(k):
                for q in range(p + 1, k):
                    distinct &= cand[:, p] != cand[:, q]
            good = cand[distinct][:need]
            rows.append(good)
            need -= len(good)
        idx = np.concatenate(rows)
    w = t.win_matrix()
    pairs = list(itertools.combinations(range(k), 2))
    code = np.zeros(len(idx), dtype=np.int64)
    decided = np.ones(len(idx), dtype=bool)
    for bit, (p, q) in enumerate(pairs):
        fwd = w[idx[:, p], idx[:, q]]
        bwd = w[idx[:, q], idx[:, p]]
        decided &= fwd | bwd
        code |= fwd.astype(np.int64) << bit
    tie_free_codes = code[decided]
    classes = class_of[tie_free_codes]
    binc = np.bincount(classes, minlength=len(names))
    for i, name in enumerate(names):
        counts[name] = int(binc[i])
    return PatternCensus(
        k=k,
        examined=int(len(idx)),
        tie_free=int(decided.sum()),
        class_counts=counts,
        labeled_sizes=dict(sizes),
        exhaustive=exhaustive,
    )
