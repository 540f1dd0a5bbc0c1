"""Exact s-adic and nega-s-adic evaluation of eventually periodic words."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .digits import DigitSeq, SystemParams, complement_even, complement_odd

# (digit, 1-indexed position) -> (a, b) with value = a + b * (value of the rest)
AffineStep = Callable[[int, int], tuple[Fraction, Fraction]]


def eval_positional(d: DigitSeq, step: AffineStep) -> Fraction:
    """Evaluate x = a_1 + b_1 (a_2 + b_2 (a_3 + ...)) exactly.

    ``step`` may depend on the parity of the position, so the period is
    aligned to even length.  The periodic tail is the fixed point
    t = A + B t of the composed period map (|B| < 1 is required).
    """
    d = d.explicit().aligned()
    k = len(d.prefix)
    A, B = Fraction(0), Fraction(1)
    for i, digit in enumerate(d.period, start=k + 1):
        a, b = step(digit, i)
        A += B * a
        B *= b
    value = A / (1 - B)
    for i in range(k, 0, -1):
        a, b = step(d.prefix[i - 1], i)
        value = a + b * value
    return value


def partial_sum(d: DigitSeq, step: AffineStep, n_terms: int) -> Fraction:
    """The same expansion truncated after ``n_terms`` positions (tail set to 0)."""
    value = Fraction(0)
    weight = Fraction(1)
    digits = iter(d.explicit())
    for i in range(1, n_terms + 1):
        a, b = step(next(digits), i)
        value += weight * a
        weight *= b
    return value


def _s_adic_step(s: int) -> AffineStep:
    inv = Fraction(1, s)
    return lambda digit, _pos: (digit * inv, inv)


def _nega_step(s: int) -> AffineStep:
    inv = Fraction(-1, s)
    return lambda digit, _pos: (digit * inv, inv)


def eval_s_adic(params: SystemParams | int, d: DigitSeq) -> Fraction:
    s = _base(params)
    d.validate(s)
    return eval_positional(d, _s_adic_step(s))


def eval_nega_s_adic(params: SystemParams | int, d: DigitSeq) -> Fraction:
    s = _base(params)
    d.validate(s)
    return eval_positional(d, _nega_step(s))


def s_adic_partial_sum(params, d: DigitSeq, n_terms: int) -> Fraction:
    return partial_sum(d, _s_adic_step(_base(params)), n_terms)


def nega_s_adic_partial_sum(params, d: DigitSeq, n_terms: int) -> Fraction:
    return partial_sum(d, _nega_step(_base(params)), n_terms)


def nega_to_s_identity_check(params: SystemParams | int, d: DigitSeq) -> tuple[Fraction, Fraction]:
    """Return (nega value, 1/(s+1) - s-adic value of the even-complemented word).

    Both components are computed independently and must coincide.
    """
    s = _base(params)
    d = d.explicit()
    return eval_nega_s_adic(s, d), Fraction(1, s + 1) - eval_s_adic(s, complement_even(s, d))


def nega_to_s_shift_check(params: SystemParams | int, d: DigitSeq) -> tuple[Fraction, Fraction]:
    """Return (nega value, s-adic value of the odd-complemented word - s/(s+1)).

    Complementing the odd positions maps y to 1 - y, which turns the
    1/(s+1) identity into this one.
    """
    s = _base(params)
    d = d.explicit()
    return eval_nega_s_adic(s, d), eval_s_adic(s, complement_odd(s, d)) - Fraction(s, s + 1)


def _base(params) -> int:
    return params.s if isinstance(params, SystemParams) else int(params)
