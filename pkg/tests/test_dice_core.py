"""Unit tests for dice construction, comparison, and score identities."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intransitive_dice import (
    Die,
    Model,
    Verdict,
    beats,
    complement,
    f_of,
    g_of,
    g_values,
    new_die,
    score_sum,
    standard_die,
)
from intransitive_dice.dice_core import beats_reference, verdict_from_score


def all_balanced_sequences(n):
    target = n * (n + 1) // 2
    return [
        faces
        for faces in itertools.product(range(1, n + 1), repeat=n)
        if sum(faces) == target
    ]


# A small pool of real dice for property tests, all n in one list.
DICE_POOL = [
    new_die(faces)
    for n in (2, 3, 4, 5)
    for faces in all_balanced_sequences(n)
]


def test_worked_example_eight_to_six():
    a = new_die((1, 1, 4, 4))
    b = new_die((1, 3, 3, 3))
    out = beats(a, b)
    assert (out.greater, out.less, out.equal) == (8, 6, 2)
    assert out.verdict is Verdict.A_WINS
    # and the reverse comparison mirrors it
    back = beats(b, a)
    assert (back.greater, back.less) == (6, 8)
    assert back.verdict is Verdict.B_WINS


def test_standard_die_ties_itself():
    for n in (1, 2, 5, 9):
        d = standard_die(n)
        assert beats(d, d).verdict is Verdict.TIE


def test_new_die_rejects_bad_input():
    with pytest.raises(ValueError):
        new_die(())
    with pytest.raises(ValueError, match="face"):
        new_die((0, 3, 3))  # below range
    with pytest.raises(ValueError):
        new_die((1, 2, 5))  # above range for n=3
    with pytest.raises(ValueError, match="sum"):
        new_die((1, 1, 1))
    # n=1 only admits (1,)
    assert new_die((1,)).n == 1


def test_multiset_model_sorts_faces():
    d = new_die((4, 1, 4, 1), Model.MULTISET_CANONICAL)
    assert d.faces == (1, 1, 4, 4)
    # sequence model keeps the order given
    s = new_die((4, 1, 4, 1), Model.BALANCED_SEQUENCE)
    assert s.faces == (4, 1, 4, 1)


def test_f_and_g_worked_values():
    a = new_die((1, 1, 4, 4))
    # doubled units: f(1)=2*1=2 (two faces equal 1, none below)
    assert f_of(a, 1) == 2
    assert f_of(a, 2) == 4
    assert f_of(a, 4) == 6
    assert g_values(a) == (1, 1, -1, -1)
    assert g_of(a, 1) == 1
    with pytest.raises(ValueError):
        f_of(a, 0)
    with pytest.raises(ValueError):
        g_of(a, 5)


def test_g_values_sum_to_zero_exhaustive_small_n():
    for die in DICE_POOL:
        assert sum(g_values(die)) == 0


def test_score_sum_decides_worked_example():
    a = new_die((1, 1, 4, 4))
    b = new_die((1, 3, 3, 3))
    assert score_sum(a, b) == -2
    assert score_sum(b, a) == 2
    assert verdict_from_score(score_sum(a, b)) is Verdict.A_WINS
    assert verdict_from_score(0) is Verdict.TIE


@given(st.data())
@settings(max_examples=200)
def test_beats_matches_quadratic_reference(data):
    a = data.draw(st.sampled_from(DICE_POOL))
    b = data.draw(st.sampled_from([d for d in DICE_POOL if d.n == a.n]))
    assert beats(a, b) == beats_reference(a, b)


@given(st.data())
@settings(max_examples=200)
def test_score_antisymmetry_and_verdict_consistency(data):
    a = data.draw(st.sampled_from(DICE_POOL))
    b = data.draw(st.sampled_from([d for d in DICE_POOL if d.n == a.n]))
    s = score_sum(a, b)
    assert s + score_sum(b, a) == 0
    assert verdict_from_score(s) is beats(a, b).verdict


@given(st.data())
@settings(max_examples=100)
def test_face_order_is_irrelevant(data):
    a = data.draw(st.sampled_from(DICE_POOL))
    b = data.draw(st.sampled_from([d for d in DICE_POOL if d.n == a.n]))
    perm = data.draw(st.permutations(range(a.n)))
    shuffled = Die(tuple(a.faces[i] for i in perm), a.n, a.model)
    assert beats(shuffled, b) == beats(a, b)


def test_complement_is_an_involution():
    for die in DICE_POOL:
        assert complement(complement(die)).faces == die.faces


@given(st.data())
@settings(max_examples=150)
def test_complement_reverses_the_relation(data):
    a = data.draw(st.sampled_from(DICE_POOL))
    b = data.draw(st.sampled_from([d for d in DICE_POOL if d.n == a.n]))
    assert score_sum(complement(a), complement(b)) == -score_sum(a, b)
    fwd = beats(a, b).verdict
    rev = beats(complement(a), complement(b)).verdict
    mirrored = {
        Verdict.A_WINS: Verdict.B_WINS,
        Verdict.B_WINS: Verdict.A_WINS,
        Verdict.TIE: Verdict.TIE,
    }
    assert rev is mirrored[fwd]


def test_beats_requires_matching_side_counts():
    with pytest.raises(ValueError):
        beats(new_die((1, 2, 3)), new_die((1, 1, 4, 4)))
