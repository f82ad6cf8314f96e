"""Uniform random dice in both models.

Three samplers:

* :func:`sample_balanced_rejection` — draw i.i.d. uniform faces, accept
  iff the sum is ``n(n+1)/2``.  Exactly uniform over balanced sequences;
  the acceptance probability is about ``1.38 * n**-1.5`` and is bounded
  below by ``n**-1.5 / 4``.
* :func:`sample_balanced_exact` — sequential sampling with exact
  big-integer completion counts from a dynamic program; uniform with no
  rejection, capped at moderate ``n`` (the DP table holds counts up to
  ``n**n``).
* :func:`sample_multiset` — same sequential idea over non-decreasing
  sequences, uniform over canonical multisets.

Randomness comes from :class:`RngStream`, a thin wrapper over numpy's
Philox counter-based generator.  Identical ``(seed, stream_index)``
always reproduces the same draws; distinct stream indices give
independent streams, which is what the experiment drivers use to shard
trials deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dice_core import Die, Model

#: Largest n for which the exact samplers build their DP tables by default.
EXACT_MODE_CAP = 64

#: Rejection gives up after this many attempts (practically unreachable).
DEFAULT_ATTEMPT_CAP = 10**9


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible randomness source.

    ``seed`` is the 64-bit master seed of a whole experiment;
    ``stream_index`` identifies one trial shard.  The pair is used
    directly as the Philox key, so streams never overlap and the mapping
    is stable across platforms and thread schedules.
    """

    seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if not 0 <= self.stream_index < 2**64:
            raise ValueError("stream_index must fit in 64 bits")

    def generator(self) -> np.random.Generator:
        """A fresh numpy Generator positioned at the start of this stream."""
        key = np.array([self.seed, self.stream_index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, index: int) -> "RngStream":
        """Stream with the same seed and a different index."""
        return RngStream(self.seed, index)


@dataclass
class SamplerStats:
    """Attempt accounting for rejection sampling."""

    attempts: int = 0
    accepts: int = 0

    @property
    def acceptance_rate(self) -> float:
        if self.attempts == 0:
            return float("nan")
        return self.accepts / self.attempts


# ---------------------------------------------------------------------------
# Counting dynamic programs (shared, cached, read-only after construction)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def balanced_counts(n: int) -> tuple[tuple[int, ...], ...]:
    """``table[k][s]`` = number of sequences in ``[1,n]^k`` with sum ``s``.

    Exact big integers, ``0 <= k <= n`` and ``0 <= s <= n(n+1)/2``.  Row
    ``n`` at column ``n(n+1)/2`` is the balanced-sequence support size.
    Built once per ``n`` with prefix sums (O(n^3) additions) and cached.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    top = n * (n + 1) // 2
    rows = [(1,) + (0,) * top]
    prev = rows[0]
    for _ in range(1, n + 1):
        prefix = [0] * (top + 2)
        for s in range(top + 1):
            prefix[s + 1] = prefix[s] + prev[s]
        # faces take values 1..n, so row[s] sums prev[s-n .. s-1]
        row = tuple(
            prefix[s] - prefix[max(0, s - n)] for s in range(top + 1)
        )
        rows.append(row)
        prev = row
    return tuple(rows)


@lru_cache(maxsize=None)
def _partition_count(t: int, k: int, w: int) -> int:
    """Partitions of ``t`` into exactly ``k`` parts, each in ``[1, w]``.

    Recurrence: split on whether the smallest part equals 1 (remove it)
    or all parts exceed 1 (subtract 1 from each).  Memoised globally;
    recursion depth is at most ``k + w``.
    """
    if t < 0 or k < 0:
        return 0
    if k == 0:
        return 1 if t == 0 else 0
    if w <= 0:
        return 0
    if t < k or t > k * w:
        return 0
    return _partition_count(t - 1, k - 1, w) + _partition_count(t - k, k, w - 1)


def count_multiset(n: int) -> int:
    """Number of canonical multiset dice with n sides (exact)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _partition_count(n * (n + 1) // 2, n, n)


def _multiset_completions(parts_left: int, sum_left: int, lo: int, n: int) -> int:
    """Non-decreasing sequences of ``parts_left`` values in ``[lo, n]`` summing
    to ``sum_left``.  Shift every value down by ``lo - 1`` to reduce to the
    bounded-parts partition count."""
    shift = (lo - 1) * parts_left
    return _partition_count(sum_left - shift, parts_left, n - lo + 1)


# ---------------------------------------------------------------------------
# Bulk face generation for rejection sampling
# ---------------------------------------------------------------------------

def _uniform_faces(gen: np.random.Generator, rows: int, n: int) -> np.ndarray:
    """(rows, n) array of i.i.d. uniform faces in [1, n].

    Draws full-range unsigned words (the fast power-of-two path of numpy's
    bounded-integer generation), rejects the sliver at the top that would
    bias the modulus, and maps the survivors.  The stream is consumed in a
    deterministic order for a given sequence of calls.
    """
    if n == 1:
        return np.ones((rows, 1), dtype=np.uint8)
    if n <= 255:
        dtype, span = np.uint8, 256
    elif n <= 65535:
        dtype, span = np.uint16, 65536
    else:
        raise ValueError("side counts above 65535 are not supported")
    lim = (span // n) * n
    need = rows * n
    keep = np.empty(0, dtype=dtype)
    # Oversample by the exact rejection rate plus a small safety margin so a
    # second top-up draw is rare.
    pending = need
    while keep.size < need:
        m = int(pending * span / lim * 1.02) + 64
        raw = gen.integers(0, span, size=m, dtype=dtype)
        good = raw[raw < lim]
        keep = good if keep.size == 0 else np.concatenate([keep, good])
        pending = need - keep.size
    faces = keep[:need] % n
    faces += 1
    return faces.reshape(rows, n)


def sample_balanced_block(
    n: int,
    count: int,
    rng: RngStream,
    attempt_cap: int = DEFAULT_ATTEMPT_CAP,
) -> tuple[np.ndarray, SamplerStats]:
    """``count`` independent uniform balanced sequences as a (count, n) array.

    The workhorse behind :func:`sample_balanced_rejection` and the Monte
    Carlo drivers: candidate rows are drawn in large batches and scanned in
    stream order, so the result is a deterministic function of the stream
    and every accepted row is an independent uniform die.  ``attempts`` in
    the returned stats counts candidate rows up to and including the last
    accepted one.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if count < 0:
        raise ValueError("count must be >= 0")
    gen = rng.generator()
    target = n * (n + 1) // 2
    out = np.empty((count, n), dtype=np.uint8 if n <= 255 else np.uint16)
    got = 0
    attempts = 0
    stats = SamplerStats()
    # Acceptance probability is ~1.38 n^-1.5; size batches to the expected
    # remaining need plus two standard deviations so most shards finish in
    # one or two draws.
    p_est = 1.38 * n ** -1.5
    while got < count:
        remaining = count - got
        mean_rows = remaining / p_est
        batch = int(mean_rows + 2.0 * (remaining ** 0.5) / p_est) + 32
        batch = min(batch, max(4 * 10**6 // n, 64))
        rows = _uniform_faces(gen, batch, n)
        sums = rows.sum(axis=1, dtype=np.int32 if n <= 255 else np.int64)
        hits = np.flatnonzero(sums == target)
        take = hits[:remaining]
        out[got : got + take.size] = rows[take]
        got += take.size
        if take.size == remaining:
            attempts += int(take[-1]) + 1
        else:
            attempts += batch
        if attempts > attempt_cap:
            raise RuntimeError(
                f"rejection sampler exceeded {attempt_cap} attempts at n={n}"
            )
    stats.attempts = attempts
    stats.accepts = count
    return out, stats


def sample_balanced_rejection(
    n: int,
    rng: RngStream,
    attempt_cap: int = DEFAULT_ATTEMPT_CAP,
) -> tuple[Die, SamplerStats]:
    """One uniform balanced-sequence die by rejection, with attempt stats."""
    block, stats = sample_balanced_block(n, 1, rng, attempt_cap=attempt_cap)
    faces = tuple(int(v) for v in block[0])
    return Die(faces, n, Model.BALANCED_SEQUENCE), stats


# ---------------------------------------------------------------------------
# Exact sequential samplers
# ---------------------------------------------------------------------------

def _as_generator(rng: "RngStream | np.random.Generator") -> np.random.Generator:
    """Accept a stream spec or a live generator (to draw several dice)."""
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def _uniform_below(gen: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) for an arbitrary-precision bound."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    bits = bound.bit_length()
    words = (bits + 63) // 64
    mask = (1 << bits) - 1
    while True:
        r = 0
        for w in gen.integers(0, 2**63, size=2 * words, dtype=np.int64):
            r = (r << 63) | int(w)
        r &= mask
        if r < bound:
            return r


def sample_balanced_exact(
    n: int, rng: "RngStream | np.random.Generator", cap: int = EXACT_MODE_CAP
) -> Die:
    """One uniform balanced sequence with no rejection.

    Face ``k`` is drawn with probability proportional to the exact count
    of completions of the remaining suffix, read off the cached DP table.
    """
    if n > cap:
        raise ValueError(f"n={n} above exact-mode cap {cap}")
    table = balanced_counts(n)
    gen = _as_generator(rng)
    remaining = n * (n + 1) // 2
    faces = []
    for k in range(n, 0, -1):
        row = table[k - 1]
        total = table[k][remaining]
        r = _uniform_below(gen, total)
        acc = 0
        for v in range(1, n + 1):
            s = remaining - v
            if s < 0:
                break
            acc += row[s]
            if r < acc:
                faces.append(v)
                remaining -= v
                break
        else:  # pragma: no cover - the DP identity guarantees a hit
            raise AssertionError("completion counts failed to cover the draw")
    return Die(tuple(faces), n, Model.BALANCED_SEQUENCE)


def sample_multiset(
    n: int, rng: "RngStream | np.random.Generator", cap: int = EXACT_MODE_CAP
) -> Die:
    """One uniform canonical multiset die.

    Faces are drawn in non-decreasing order; the weight of choosing value
    ``v`` next is the exact count of non-decreasing completions with all
    later values in ``[v, n]``.
    """
    if n > cap:
        raise ValueError(f"n={n} above exact-mode cap {cap}")
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = _as_generator(rng)
    remaining = n * (n + 1) // 2
    lo = 1
    faces = []
    for parts_left in range(n, 0, -1):
        total = _multiset_completions(parts_left, remaining, lo, n)
        if total <= 0:  # pragma: no cover - valid states always complete
            raise AssertionError("no completions from a reachable state")
        r = _uniform_below(gen, total)
        acc = 0
        for v in range(lo, n + 1):
            acc += _multiset_completions(parts_left - 1, remaining - v, v, n)
            if r < acc:
                faces.append(v)
                remaining -= v
                lo = v
                break
        else:  # pragma: no cover
            raise AssertionError("completion counts failed to cover the draw")
    return Die(tuple(faces), n, Model.MULTISET_CANONICAL)
