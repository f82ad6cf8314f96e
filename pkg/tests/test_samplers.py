"""Tests for the seeded samplers: correctness, uniformity, determinism."""

import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intransitive_dice import (
    Model,
    RngStream,
    balanced_counts,
    count_balanced,
    count_multiset,
    sample_balanced_block,
    sample_balanced_exact,
    sample_balanced_rejection,
    sample_multiset,
)
from intransitive_dice.samplers import _uniform_below


def brute_count_balanced(n):
    target = n * (n + 1) // 2
    return sum(
        1
        for faces in itertools.product(range(1, n + 1), repeat=n)
        if sum(faces) == target
    )


def test_dp_counts_match_brute_force():
    for n in range(1, 7):
        assert count_balanced(n) == brute_count_balanced(n)


def test_dp_known_values():
    assert [count_balanced(n) for n in (2, 3, 4, 5)] == [2, 7, 44, 381]
    # partial-length slices of the table are composition counts too
    table = balanced_counts(4)
    # length-2 sequences over [1,4] summing to 5: (1,4),(2,3),(3,2),(4,1)
    assert table[2][5] == 4


def test_multiset_counts():
    # number of partitions of n(n+1)/2 into exactly n parts of size <= n
    assert [count_multiset(n) for n in (1, 2, 3, 4, 5, 6)] == [1, 1, 2, 5, 12, 32]


class TestBlockSampler:
    def test_shape_and_constraints(self):
        block, stats = sample_balanced_block(9, 500, RngStream(0, 0))
        assert block.shape == (500, 9)
        assert block.min() >= 1 and block.max() <= 9
        assert (block.sum(axis=1) == 45).all()
        assert stats.accepts == 500
        assert stats.attempts >= 500
        assert 0 < stats.acceptance_rate <= 1

    def test_stream_determinism(self):
        a, _ = sample_balanced_block(7, 200, RngStream(123, 5))
        b, _ = sample_balanced_block(7, 200, RngStream(123, 5))
        c, _ = sample_balanced_block(7, 200, RngStream(123, 6))
        assert (a == b).all()
        assert (a != c).any()

    def test_zero_count(self):
        block, stats = sample_balanced_block(5, 0, RngStream(0, 0))
        assert block.shape == (0, 5)
        assert stats.attempts == 0

    def test_attempt_cap_trips(self):
        with pytest.raises(RuntimeError, match="attempts"):
            sample_balanced_block(40, 1000, RngStream(0, 0), attempt_cap=10)

    def test_large_face_values_use_wide_dtype(self):
        # n > 255 exercises the uint16 path and the int64 row sums
        block, _ = sample_balanced_block(300, 3, RngStream(1, 0))
        assert (block.sum(axis=1) == 300 * 301 // 2).all()

    def test_rejection_wrapper(self):
        die, stats = sample_balanced_rejection(6, RngStream(9, 9))
        assert die.n == 6 and sum(die.faces) == 21
        assert die.model is Model.BALANCED_SEQUENCE
        assert stats.accepts == 1


def chi2_within_3_sigma(observed, expected_per_cell):
    """Pearson chi-square against a uniform target, gated at mean + 3 sd.

    For k cells the statistic has mean k-1 and variance 2(k-1); a seeded
    draw landing past three standard deviations would indicate a real
    uniformity defect rather than noise.
    """
    k = len(observed)
    stat = sum((o - expected_per_cell) ** 2 / expected_per_cell for o in observed)
    df = k - 1
    return stat <= df + 3.0 * math.sqrt(2.0 * df), stat


def test_exact_sampler_uniform_over_sequences():
    n, draws = 4, 44_000
    gen = RngStream(2024, 0).generator()
    counts = Counter(sample_balanced_exact(n, gen).faces for _ in range(draws))
    assert len(counts) == 44
    ok, stat = chi2_within_3_sigma(list(counts.values()), draws / 44)
    assert ok, f"chi2={stat:.1f} too large for 43 dof"


def test_multiset_sampler_uniform_over_classes():
    n, draws = 5, 24_000
    gen = RngStream(7, 1).generator()
    counts = Counter(sample_multiset(n, gen).faces for _ in range(draws))
    assert len(counts) == 12
    assert all(faces == tuple(sorted(faces)) for faces in counts)
    ok, stat = chi2_within_3_sigma(list(counts.values()), draws / 12)
    assert ok, f"chi2={stat:.1f} too large for 11 dof"


def test_rejection_agrees_with_exact_marginal():
    # First-face marginal of the block sampler vs the DP-exact law at n=10.
    n, rows = 10, 40_000
    block, _ = sample_balanced_block(n, rows, RngStream(5, 0))
    observed = np.bincount(block[:, 0], minlength=n + 1)[1:]
    table = balanced_counts(n)
    target = n * (n + 1) // 2
    weights = [table[n - 1][target - v] for v in range(1, n + 1)]
    total = sum(weights)
    assert total == count_balanced(n)
    expected = [rows * w / total for w in weights]
    stat = sum((o - e) ** 2 / e for o, e in zip(observed, expected))
    df = n - 1
    assert stat <= df + 3.0 * math.sqrt(2.0 * df), stat


@given(
    n=st.integers(min_value=1, max_value=12),
    seed=st.integers(min_value=0, max_value=2**32),
    stream=st.integers(min_value=0, max_value=1000),
)
@settings(max_examples=60, deadline=None)
def test_exact_sampler_always_valid(n, seed, stream):
    die = sample_balanced_exact(n, RngStream(seed, stream))
    assert die.n == n
    assert all(1 <= v <= n for v in die.faces)
    assert sum(die.faces) == n * (n + 1) // 2


@given(
    n=st.integers(min_value=1, max_value=12),
    seed=st.integers(min_value=0, max_value=2**32),
)
@settings(max_examples=60, deadline=None)
def test_multiset_sampler_always_valid(n, seed):
    die = sample_multiset(n, RngStream(seed, 0))
    assert die.model is Model.MULTISET_CANONICAL
    assert die.faces == tuple(sorted(die.faces))
    assert sum(die.faces) == n * (n + 1) // 2


def test_exact_mode_cap_enforced():
    with pytest.raises(ValueError, match="cap"):
        sample_balanced_exact(65, RngStream(0, 0))
    with pytest.raises(ValueError, match="cap"):
        sample_multiset(65, RngStream(0, 0))


def test_uniform_below_small_and_huge_bounds():
    gen = RngStream(0, 0).generator()
    draws = [_uniform_below(gen, 7) for _ in range(2000)]
    assert set(draws) == set(range(7))
    big = 10**40
    vals = [_uniform_below(gen, big) for _ in range(50)]
    assert all(0 <= v < big for v in vals)
    # a bound this size cannot be hit by a 63-bit draw alone
    assert any(v > 2**63 for v in vals)
    with pytest.raises(ValueError):
        _uniform_below(gen, 0)


def test_stream_key_validation():
    with pytest.raises(ValueError):
        RngStream(-1, 0)
    with pytest.raises(ValueError):
        RngStream(0, 2**64)
    child = RngStream(3, 4).child(2)
    assert child.seed == 3 and child.stream_index != 4
