"""Dice representation, the beats relation, and the score-sum reduction.

An ``n``-sided die is a sequence of ``n`` face values, each in ``[1, n]``,
whose sum is exactly ``n(n+1)/2``.  Two probability models share this
support: *balanced sequences* (ordered tuples, uniform) and *canonical
multisets* (sorted tuples, uniform over multisets).

Die ``A`` beats die ``B`` when more index pairs ``(i, j)`` satisfy
``a_i > b_j`` than ``a_i < b_j``; equality of the two counts is a tie.
The relation reduces to the sign of a single sum: with

    f_A(j) = #{i : a_i < j} + 1/2 * #{i : a_i = j}
    g_A(j) = f_A(j) - j + 1/2

one has ``sum_j g_A(b_j) > 0`` iff B beats A, ``< 0`` iff A beats B and
``= 0`` iff they tie.  Everything in this module is exact integer
arithmetic: all half-integer quantities (f, g, score sums) are returned
in *doubled units*, i.e. as the integer ``2*f_A(j)`` etc., so the sign
tests never touch a float.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterable


class Model(Enum):
    """Probability model tag carried by a :class:`Die`."""

    BALANCED_SEQUENCE = "balanced_sequence"
    MULTISET_CANONICAL = "multiset_canonical"


class Verdict(Enum):
    """Outcome of comparing two dice."""

    A_WINS = "AWins"
    B_WINS = "BWins"
    TIE = "Tie"


@dataclass(frozen=True)
class Die:
    """A validated die.

    Construct through :func:`new_die`; the constructor itself performs no
    validation so that internal code can build pre-checked instances
    cheaply.

    Attributes
    ----------
    faces:
        Face values.  Sorted non-decreasing when ``model`` is
        ``MULTISET_CANONICAL``.
    n:
        Side count, equal to ``len(faces)``.
    model:
        Which uniform measure the die is meant to be drawn from.  The
        beats relation itself does not depend on the tag.
    """

    faces: tuple[int, ...]
    n: int
    model: Model = Model.BALANCED_SEQUENCE

    def __post_init__(self) -> None:
        object.__setattr__(self, "faces", tuple(self.faces))


@dataclass(frozen=True)
class BeatOutcome:
    """Exact pair counts for one comparison.

    ``greater + less + equal == n**2`` always holds.
    """

    greater: int
    less: int
    equal: int
    verdict: Verdict


def new_die(faces: Iterable[int], model: Model = Model.BALANCED_SEQUENCE) -> Die:
    """Validate ``faces`` and return a :class:`Die`.

    Raises
    ------
    ValueError
        If the sequence is empty, any face lies outside ``[1, n]``, or the
        face sum differs from ``n(n+1)/2``.  The message names the violated
        constraint.
    """
    face_list = [int(f) for f in faces]
    n = len(face_list)
    if n == 0:
        raise ValueError("a die needs at least one face")
    for f in face_list:
        if not 1 <= f <= n:
            raise ValueError(f"face {f} out of range [1, {n}]")
    total = sum(face_list)
    expected = n * (n + 1) // 2
    if total != expected:
        raise ValueError(f"face sum {total} != required {expected} for n={n}")
    if model is Model.MULTISET_CANONICAL:
        face_list.sort()
    return Die(tuple(face_list), n, model)


def standard_die(n: int, model: Model = Model.BALANCED_SEQUENCE) -> Die:
    """The die ``(1, 2, ..., n)``; it ties with every die of its size."""
    return new_die(range(1, n + 1), model)


def _require_same_n(a: Die, b: Die) -> int:
    if a.n != b.n:
        raise ValueError(f"mismatched side counts: {a.n} != {b.n}")
    return a.n


def beats(a: Die, b: Die) -> BeatOutcome:
    """Compare two dice of equal side count.

    Runs in ``O(n log n)``: both face lists are sorted once and each face
    of ``b`` is located in the sorted faces of ``a`` by binary search,
    which splits the ``n^2`` pairs into greater/less/equal exactly.  Use
    :func:`beats_reference` for the quadratic double loop.
    """
    n = _require_same_n(a, b)
    sorted_a = sorted(a.faces)
    greater = 0
    less = 0
    for bf in b.faces:
        lo = bisect_left(sorted_a, bf)
        hi = bisect_right(sorted_a, bf)
        less += lo                 # a_i < b_j
        greater += n - hi          # a_i > b_j
    equal = n * n - greater - less
    if greater > less:
        verdict = Verdict.A_WINS
    elif less > greater:
        verdict = Verdict.B_WINS
    else:
        verdict = Verdict.TIE
    return BeatOutcome(greater=greater, less=less, equal=equal, verdict=verdict)


def beats_reference(a: Die, b: Die) -> BeatOutcome:
    """O(n^2) brute-force pair counter; the testing reference for :func:`beats`."""
    _require_same_n(a, b)
    greater = sum(1 for x in a.faces for y in b.faces if x > y)
    less = sum(1 for x in a.faces for y in b.faces if x < y)
    equal = a.n * b.n - greater - less
    if greater > less:
        verdict = Verdict.A_WINS
    elif less > greater:
        verdict = Verdict.B_WINS
    else:
        verdict = Verdict.TIE
    return BeatOutcome(greater=greater, less=less, equal=equal, verdict=verdict)


def f_of(a: Die, j: int) -> int:
    """``2 * f_A(j)`` where ``f_A(j) = #{a_i < j} + 1/2 #{a_i = j}``.

    The result is exact; halve it (if you must) only for display.
    """
    if not 1 <= j <= a.n:
        raise ValueError(f"j={j} out of range [1, {a.n}]")
    sorted_a = sorted(a.faces)
    below = bisect_left(sorted_a, j)
    at = bisect_right(sorted_a, j) - below
    return 2 * below + at


def g_of(a: Die, j: int) -> int:
    """``2 * g_A(j)`` where ``g_A(j) = f_A(j) - j + 1/2``."""
    return f_of(a, j) - 2 * j + 1


def g_values(a: Die) -> tuple[int, ...]:
    """All of ``(2*g_A(1), ..., 2*g_A(n))`` in one O(n log n) pass.

    Equivalent to ``tuple(g_of(a, j) for j in range(1, n+1))`` but builds
    the cumulative face counts once.  These doubled values always sum to
    zero.
    """
    n = a.n
    counts = [0] * (n + 2)
    for f in a.faces:
        counts[f] += 1
    out = []
    below = 0
    for j in range(1, n + 1):
        f2 = 2 * below + counts[j]
        out.append(f2 - 2 * j + 1)
        below += counts[j]
    return tuple(out)


def score_sum(a: Die, b: Die) -> int:
    """``2 * sum_j g_A(b_j)``, the doubled score sum.

    Sign contract: positive iff B beats A, negative iff A beats B, zero
    iff they tie.  Equivalently ``sum_j 2*f_A(b_j) - n^2`` because B's
    faces sum to ``n(n+1)/2``.
    """
    n = _require_same_n(a, b)
    g2 = g_values(a)
    return sum(g2[bf - 1] for bf in b.faces)


def complement(a: Die) -> Die:
    """The complementary die ``(n+1-a_1, ..., n+1-a_n)``.

    An involution on valid dice that reverses the beats relation:
    A beats B iff complement(B) beats complement(A).
    """
    flipped = [a.n + 1 - f for f in a.faces]
    if a.model is Model.MULTISET_CANONICAL:
        flipped.sort()
    return Die(tuple(flipped), a.n, a.model)


def verdict_from_score(score2: int) -> Verdict:
    """Map a doubled score sum to the verdict of ``beats(A, B)``."""
    if score2 < 0:
        return Verdict.A_WINS
    if score2 > 0:
        return Verdict.B_WINS
    return Verdict.TIE
