#!/usr/bin/env python3
"""Two notions of a random die, three ways to sample one.

A die has n faces in [1, n] with face sum n(n+1)/2.  The multiset model
draws a uniform sorted multiset; the balanced-sequence model draws a
uniform ordered tuple, which weights each multiset by its permutation
count.  Sampling is seeded through (seed, stream_index) Philox keys, so
every draw here reproduces exactly.
"""

from collections import Counter

from intransitive_dice import (
    RngStream,
    count_balanced,
    count_multiset,
    enumerate_multiset,
    sample_balanced_block,
    sample_balanced_exact,
    sample_multiset,
)

n = 4
print(f"support sizes at n={n}: "
      f"{count_multiset(n)} multisets, {count_balanced(n)} sequences")
print("the five multisets:", [d.faces for d in enumerate_multiset(n)])
print()

# Rejection sampling: draw i.i.d. faces, keep rows with the right sum.
block, stats = sample_balanced_block(n, 10_000, RngStream(seed=1, stream_index=0))
print(f"rejection sampler: {stats.accepts} dice from {stats.attempts} rows "
      f"({stats.acceptance_rate:.3f} acceptance)")

# How often each multiset shows up under sequence weighting: (1,2,3,4)
# has 24 arrangements, (1,3,3,3) only 4, and the frequencies follow suit.
freq = Counter(tuple(sorted(map(int, row))) for row in block)
for faces, count in sorted(freq.items()):
    print(f"  {faces}: {count / 10_000:.3f}")
print()

# The exact sampler draws faces one at a time, weighting each choice by a
# DP count of valid completions: no rejection, same distribution.
gen = RngStream(seed=1, stream_index=1).generator()
seqs = [sample_balanced_exact(n, gen).faces for _ in range(10_000)]
print(f"exact balanced sampler: {len(set(seqs))} distinct sequences seen "
      f"(of {count_balanced(n)}), same multiset frequencies:")
exact_freq = Counter(tuple(sorted(f)) for f in seqs)
for faces, count in sorted(exact_freq.items()):
    print(f"  {faces}: {count / 10_000:.3f}")
print()

# The multiset sampler is uniform over the 5 classes themselves.
gen = RngStream(seed=1, stream_index=2).generator()
ms_freq = Counter(sample_multiset(n, gen).faces for _ in range(10_000))
print("multiset sampler, flat by design:")
for faces, count in sorted(ms_freq.items()):
    print(f"  {faces}: {count / 10_000:.3f}")
