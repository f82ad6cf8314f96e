#!/usr/bin/env python3
"""Ties become rare as dice grow.

For tiny n every pair of dice ties; by n=6 less than half do; asymptotically
the tie probability vanishes.  Small n is settled by exact enumeration
(rational arithmetic, no sampling error), larger n by a seeded sweep through
the experiment driver.  Writes a gnuplot-ready data file next to this script.
"""

import pathlib

from intransitive_dice import ExperimentConfig, Model, emit_report, exact_pairwise_stats
from intransitive_dice.experiments_cli import run_ties

print("exact tie probabilities (balanced-sequence model):")
for n in range(2, 8):
    p = exact_pairwise_stats(n, Model.BALANCED_SEQUENCE).tie_probability
    print(f"  n={n}: {p.numerator}/{p.denominator} = {float(p):.4f}")
print()

cfg = ExperimentConfig(
    kind="ties",
    ns=(10, 20, 40, 80),
    trials=20_000,
    seed=11,
)
report = run_ties(cfg)
print(f"Monte Carlo sweep ({cfg.trials} pairs per n, seed {cfg.seed}):")
for n in cfg.ns:
    e = report.estimates[f"tie_frequency_n{n}"]
    print(f"  n={n:3d}: {e['value']:.4f} +- {e['radius']:.4f}")
print(f"strictly decreasing: {report.checks['monotone_decrease']}")

out = pathlib.Path(__file__).with_suffix(".dat")
emit_report(report, "plotdata", str(out))
print(f"\nplot data written to {out.name} (column 1: n, column 2: value)")
