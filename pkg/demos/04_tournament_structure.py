#!/usr/bin/env python3
"""What a random dice tournament looks like.

Build the full beats digraph on m random dice and measure its shape: how
many triples form cycles, how balanced the win counts are, and how often
each small sub-tournament pattern occurs.  The punchline is quasirandomness:
every statistic lands where a uniformly random tournament would put it —
knowing A beats B tells you almost nothing else.
"""

from intransitive_dice import (
    Die,
    Model,
    RngStream,
    build_tournament,
    outdegree_concentration,
    path2_identity_check,
    pattern_frequencies,
    sample_balanced_block,
    triple_census,
)

m, n = 120, 60
block, _ = sample_balanced_block(n, m, RngStream(seed=8, stream_index=0))
dice = [Die(tuple(int(v) for v in row), n, Model.BALANCED_SEQUENCE) for row in block]
t = build_tournament(dice)

pairs = m * (m - 1) // 2
print(f"{m} dice with {n} sides: {len(t.edges)} decided pairs, "
      f"{len(t.tie_pairs)} ties out of {pairs}")

census = triple_census(t)
complete = census.transitive + census.intransitive
print(f"triples: {census.transitive} transitive, {census.intransitive} cyclic, "
      f"{census.incomplete} touching a tie")
print(f"cyclic fraction among complete triples: "
      f"{census.intransitive / complete:.4f}  (uniform random: 0.25)")
print()

conc = outdegree_concentration(t, epsilon=0.1)
print(f"win counts: mean {conc.mean:.1f} of {m - 1} games, "
      f"{conc.concentrated_fraction:.0%} of dice within 10% of an even split")

p2 = path2_identity_check(t)
print(f"two-edge paths: {p2.paths_direct} direct count, "
      f"{p2.sum_out_in} via out/in degrees"
      + ("" if p2.tie_free else "  (ties present, identity not asserted)"))
print()

for k in (3, 4):
    pat = pattern_frequencies(t, k, rng=RngStream(seed=8, stream_index=1))
    ref = pat.reference()
    mode = "exhaustive" if pat.exhaustive else f"sampled ({pat.examined} subsets)"
    print(f"{k}-dice patterns, {mode}:")
    for name, freq in sorted(pat.frequencies().items()):
        print(f"  {name:16s} {freq:.4f}   uniform reference {ref[name]:.4f}")
