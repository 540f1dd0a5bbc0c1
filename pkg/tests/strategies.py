"""Hypothesis strategies shared by the unit tests."""
from fractions import Fraction

from hypothesis import strategies as st

from negamoran.digits import BlockSeq, DigitSeq, SystemParams
from negamoran.salem import ProbVector


@st.composite
def params(draw, s_max=8):
    s = draw(st.integers(4, s_max))
    return SystemParams(s, draw(st.integers(0, s - 1)))


@st.composite
def words(draw, s, max_prefix=8, max_period=5, periodic=None):
    digit = st.integers(0, s - 1)
    prefix = tuple(draw(st.lists(digit, max_size=max_prefix)))
    lo = 1 if periodic else 0
    hi = 0 if periodic is False else max_period
    period = tuple(draw(st.lists(digit, min_size=lo, max_size=hi)))
    return DigitSeq(prefix, period)


@st.composite
def block_seqs(draw, p, periodic=True):
    a = st.sampled_from(p.Abar)
    prefix = tuple(draw(st.lists(a, max_size=5)))
    period = tuple(draw(st.lists(a, min_size=1, max_size=4))) if periodic else ()
    return BlockSeq(prefix, period)


@st.composite
def prob_vectors(draw, s, den=48):
    weights = draw(st.lists(st.integers(1, den), min_size=s, max_size=s))
    total = sum(weights)
    return ProbVector(tuple(Fraction(w, total) for w in weights))
