# coding: utf-8
"""
Numeral systems with a probability vector
==========================================

Digit words, the s-adic and nega-s-adic values, and their P-analogues.
Everything is an exact fraction.
"""

# %%
# Words and values
# ----------------
#
# A word is a prefix plus a period: "113(12)" is 1,1,3 then 1,2 forever.

from fractions import Fraction

from negamoran import (ProbVector, SystemParams, complement_even, eval_nega_s_adic, eval_negP, eval_P,
                       eval_s_adic, parse_word)

d = parse_word("113(12)")
print(d, "=", eval_s_adic(5, d), "in base 5")
print(d, "=", eval_nega_s_adic(5, d), "in base -5")

# %%
# The nega-s value is a reflection of the s-adic value of the word with
# every even-position digit mirrored (a -> s-1-a).

s = 5
print(eval_nega_s_adic(s, d), Fraction(1, s + 1) - eval_s_adic(s, complement_even(s, d)))

# %%
# Swap the uniform weights 1/s for any positive probability vector.

params = SystemParams(4, 0)
P = ProbVector((Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)))
w = parse_word("20(1)")
print("P-value   ", eval_P(params, P, w))
print("nega-P    ", eval_negP(params, P, w))
print("check     ", eval_P(params, P, complement_even(params, w)))
