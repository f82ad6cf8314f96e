#!/usr/bin/env python3
"""The beats relation, hands on.

Walks through the classic 4-sided example, shows how the O(n log n)
score-sum reduction replaces the O(n^2) pair count, and demonstrates the
complement trick that reverses every match-up.
"""

from intransitive_dice import (
    Verdict,
    beats,
    complement,
    g_values,
    new_die,
    score_sum,
)

a = new_die((1, 1, 4, 4))
b = new_die((1, 3, 3, 3))

out = beats(a, b)
print(f"A = {a.faces}, B = {b.faces}")
print(f"pairs with a_i > b_j: {out.greater}")
print(f"pairs with a_i < b_j: {out.less}")
print(f"ties:                 {out.equal}")
print(f"verdict: {out.verdict.value}   (8 > 6, so A beats B)")
print()

# The same decision via the cumulative statistic g_A. Everything is stored
# in doubled units so half-integers stay exact.
print(f"2*g_A over j=1..4: {g_values(a)}")
s = score_sum(a, b)
print(f"doubled score sum over B's faces: {s}  (negative <=> A beats B)")
assert (s < 0) == (out.verdict is Verdict.A_WINS)
print()

# Complementing both dice (v -> n+1-v) exactly reverses the relation.
ca, cb = complement(a), complement(b)
print(f"complements: {ca.faces} vs {cb.faces}")
print(f"score flips: {score_sum(ca, cb)} = -({s})")
print(f"now {cb.faces} beats {ca.faces}: {beats(cb, ca).verdict.value}")
