from fractions import Fraction as F

from hypothesis import given, strategies as st

from negamoran.digits import DigitSeq, complement_odd, parse_word
from negamoran.numeral import (eval_nega_s_adic, eval_s_adic, nega_s_adic_partial_sum, nega_to_s_identity_check,
                               nega_to_s_shift_check, s_adic_partial_sum)

from strategies import words


def test_s_adic_examples():
    assert eval_s_adic(4, parse_word("(3)")) == 1
    assert eval_s_adic(4, parse_word("2(0)")) == F(1, 2)
    expected = F(1, 5) + F(1, 25) + F(3, 125) + F(1 * 5 + 2, 5**5 - 5**3)
    d = parse_word("113(12)")
    assert eval_s_adic(5, d) == expected
    assert abs(eval_s_adic(5, d) - s_adic_partial_sum(5, d, 200)) < F(1, 5**150)


def test_nega_s_examples():
    assert eval_nega_s_adic(6, parse_word("(0)")) == 0
    assert eval_nega_s_adic(4, parse_word("1(0)")) == F(-1, 4)
    d = parse_word("(30)")
    assert eval_nega_s_adic(4, d) == F(-4, 5)
    assert abs(eval_nega_s_adic(4, d) - nega_s_adic_partial_sum(4, d, 200)) < F(1, 4**190)


def test_identity_examples():
    a, b = nega_to_s_identity_check(4, parse_word("12(3)"))
    assert a == b
    a, b = nega_to_s_identity_check(5, parse_word("(0)"))
    assert a == b == 0


@given(st.data())
def test_identity_random(data):
    s = data.draw(st.integers(4, 12))
    d = data.draw(words(s))
    a, b = nega_to_s_identity_check(s, d)
    assert a == b
    assert F(-s, s + 1) <= a <= F(1, s + 1)


@given(st.data())
def test_shift_identity_complements_odd_positions(data):
    s = data.draw(st.integers(4, 12))
    d = data.draw(words(s))
    a, b = nega_to_s_shift_check(s, d)
    assert a == b == eval_s_adic(s, complement_odd(s, d.explicit())) - F(s, s + 1)


def test_random_40_digit_word():
    import random
    rng = random.Random(40)
    d = DigitSeq(tuple(rng.randrange(6) for _ in range(40)))
    a, b = nega_to_s_identity_check(6, d)
    assert a == b


@given(st.data())
def test_s_adic_monotone_on_terminating(data):
    s = data.draw(st.integers(4, 8))
    ws = sorted(data.draw(st.lists(st.lists(st.integers(0, s - 1), min_size=1, max_size=6), min_size=2, max_size=20)))
    vals = [eval_s_adic(s, DigitSeq(tuple(w))) for w in ws]
    assert vals == sorted(vals)


def test_odd_period_is_handled():
    # period of odd length starts at alternating parities
    d = parse_word("1(2)")
    assert eval_nega_s_adic(4, d) == nega_to_s_identity_check(4, d)[1]
