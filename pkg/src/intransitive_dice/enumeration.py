"""Exhaustive small-n ground truth: supports, censuses, exact probabilities.

Both models share the same *set* of dice once sequences are collapsed to
sorted tuples; they differ only in weights.  A multiset die carries weight
1 in the multiset model and weight ``n! / prod(multiplicities!)`` — the
number of orderings — in the balanced-sequences model.  Every census here
therefore enumerates canonical multiset dice once and weights them, which
keeps the triple census cheap enough to run exactly.

All probabilities are `fractions.Fraction`; floats never enter.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from . import samplers
from .dice_core import Die, Model, Verdict, beats

ENUMERATION_CAP = 12
PAIRWISE_CAP = 9
TRIPLE_CAP = 6


class UndefinedConditionalError(ValueError):
    """The conditioning event has probability zero."""


def enumerate_multiset(n: int, cap: int = ENUMERATION_CAP) -> list[Die]:
    """All canonical multiset dice with n sides, in lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise ValueError(f"n={n} above enumeration cap {cap}")
    target = n * (n + 1) // 2
    out: list[Die] = []
    prefix: list[int] = []

    def extend(parts_left: int, sum_left: int, lo: int) -> None:
        if parts_left == 0:
            if sum_left == 0:
                out.append(Die(tuple(prefix), n, Model.MULTISET_CANONICAL))
            return
        for v in range(lo, n + 1):
            rest = sum_left - v
            # bounds for the remaining parts_left - 1 values in [v, n]
            if rest < (parts_left - 1) * v or rest > (parts_left - 1) * n:
                continue
            prefix.append(v)
            extend(parts_left - 1, rest, v)
            prefix.pop()

    extend(n, target, 1)
    return out


def count_balanced(n: int) -> int:
    """Exact number of balanced sequences in ``[n]^n`` (big integer)."""
    table = samplers.balanced_counts(n)
    return table[n][n * (n + 1) // 2]


def multiplicity(die: Die) -> int:
    """Orderings of a multiset die: ``n! / prod(count(v)!)``."""
    denom = 1
    for c in Counter(die.faces).values():
        denom *= math.factorial(c)
    return math.factorial(die.n) // denom


@dataclass
class ExactCensus:
    """Exact pairwise statistics over one model's support.

    ``dice`` lists the canonical representatives; ``weights[i]`` is the
    measure weight of ``dice[i]`` (1 in the multiset model, ordering
    multiplicity in the balanced model).  ``beat_matrix[i][j]`` is the
    verdict of ``beats(dice[i], dice[j])``.  ``per_die[i]`` is the exact
    (beats, loses, ties) probability triple for ``dice[i]`` against an
    independent uniform opponent.
    """

    n: int
    model: Model
    support_count: int
    tie_probability: Fraction
    beat_matrix: list[list[Verdict]]
    dice: list[Die] = field(repr=False)
    weights: list[int] = field(repr=False)
    per_die: list[tuple[Fraction, Fraction, Fraction]] = field(repr=False)


def exact_pairwise_stats(
    n: int, model: Model = Model.BALANCED_SEQUENCE, cap: int = PAIRWISE_CAP
) -> ExactCensus:
    """Tie probability and per-die beat/lose/tie fractions, exactly."""
    if n > cap:
        raise ValueError(f"n={n} above pairwise cap {cap}")
    dice = enumerate_multiset(n, cap=max(cap, n))
    if model is Model.BALANCED_SEQUENCE:
        weights = [multiplicity(d) for d in dice]
        support = count_balanced(n)
    else:
        weights = [1] * len(dice)
        support = len(dice)
    total = sum(weights)
    matrix = [[beats(a, b).verdict for b in dice] for a in dice]
    tie_mass = 0
    per_die = []
    for i, _ in enumerate(dice):
        wins = losses = ties = 0
        for j, w in enumerate(weights):
            v = matrix[i][j]
            if v is Verdict.A_WINS:
                wins += w
            elif v is Verdict.B_WINS:
                losses += w
            else:
                ties += w
        tie_mass += weights[i] * ties
        per_die.append(
            (Fraction(wins, total), Fraction(losses, total), Fraction(ties, total))
        )
    return ExactCensus(
        n=n,
        model=model,
        support_count=support,
        tie_probability=Fraction(tie_mass, total * total),
        beat_matrix=matrix,
        dice=dice,
        weights=weights,
        per_die=per_die,
    )


def exact_triple_stats(
    n: int, model: Model = Model.BALANCED_SEQUENCE, cap: int = TRIPLE_CAP
) -> Fraction:
    """P(A beats C | A beats B and B beats C) for independent uniform dice.

    Raises :class:`UndefinedConditionalError` when no strict beats chain
    exists (for instance n <= 2, where every pair ties).
    """
    if n > cap:
        raise ValueError(f"n={n} above triple cap {cap}")
    census = exact_pairwise_stats(n, model, cap=max(cap, n))
    dice, weights, matrix = census.dice, census.weights, census.beat_matrix
    k = len(dice)
    conditional_mass = 0
    success_mass = 0
    for a in range(k):
        row_a = matrix[a]
        for b in range(k):
            if row_a[b] is not Verdict.A_WINS:
                continue
            wab = weights[a] * weights[b]
            row_b = matrix[b]
            for c in range(k):
                if row_b[c] is not Verdict.A_WINS:
                    continue
                w = wab * weights[c]
                conditional_mass += w
                if row_a[c] is Verdict.A_WINS:
                    success_mass += w
    if conditional_mass == 0:
        raise UndefinedConditionalError(
            f"no strict beats chain exists at n={n} in model {model.value}"
        )
    return Fraction(success_mass, conditional_mass)
