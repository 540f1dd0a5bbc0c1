import itertools
from fractions import Fraction as F

import pytest

from negamoran.digits import BlockSeq, DigitSeq, SystemParams, expand_blocks
from negamoran.salem import ProbVector, eval_P
from negamoran.tailsets import block_digits, block_map, extremal_word, tabulated_word, tail_extrema

P5 = ProbVector((F(1, 2), F(1, 5), F(1, 10), F(1, 10), F(1, 10)))


def _brute_extrema(params, P, state, depth=7):
    """min/max of the P-value over all block sequences of given depth, padded by bounds."""
    lo, hi = None, None
    T = tail_extrema(params, P)
    for blocks in itertools.product(params.Abar, repeat=depth):
        a, b, t = F(0), F(1), state
        for c in blocks:
            ca, cb = block_map(params, P, c, t)
            a, b, t = a + b * ca, b * cb, (t + c) % 2
        v_lo, v_hi = a + b * T.lo[t], a + b * T.hi[t]
        lo = v_lo if lo is None else min(lo, v_lo)
        hi = v_hi if hi is None else max(hi, v_hi)
    return lo, hi


@pytest.mark.parametrize("s,u", [(4, 0), (5, 2), (6, 5), (6, 1)])
def test_solver_is_a_fixed_point(s, u):
    params = SystemParams(s, u)
    P = P5 if s == 5 else ProbVector.uniform(s)
    T = tail_extrema(params, P)
    for t in (0, 1):
        lo = min(block_map(params, P, c, t)[0] + block_map(params, P, c, t)[1] * T.lo[(t + c) % 2] for c in params.Abar)
        hi = max(block_map(params, P, c, t)[0] + block_map(params, P, c, t)[1] * T.hi[(t + c) % 2] for c in params.Abar)
        assert (lo, hi) == (T.lo[t], T.hi[t])
        assert _brute_extrema(params, P, t, depth=4) == (T.lo[t], T.hi[t])


@pytest.mark.parametrize("s,u", [(4, 0), (5, 2), (7, 3)])
def test_extremal_words_attain(s, u):
    params = SystemParams(s, u)
    P = P5 if s == 5 else ProbVector.uniform(s)
    T = tail_extrema(params, P)
    for t in (0, 1):
        assert eval_P(params, P, extremal_word(params, T.lo_policy, t)) == T.lo[t]
        assert eval_P(params, P, extremal_word(params, T.hi_policy, t)) == T.hi[t]


def test_block_digits_twist():
    params = SystemParams(6, 2)
    assert block_digits(params, 3, 0, twisted=False) == (2, 2, 3)
    # state 0: the block starts at an odd position, so its 2nd digit is mirrored
    assert block_digits(params, 3, 0) == (2, 3, 3)
    assert block_digits(params, 3, 1) == (3, 2, 2)


def test_positive_set_extrema_by_words():
    params = SystemParams(5, 2)
    T = tail_extrema(params, P5, twisted=False)
    # sup of S(P,u) is reached by the constant block giving the largest P-value
    words = [expand_blocks(params, BlockSeq((), (c,))) for c in params.Abar]
    vals = [eval_P(params, P5, w) for w in words]
    assert T.lo[0] <= min(vals) and max(vals) <= T.hi[0]


@pytest.mark.parametrize("s", [4, 5, 6, 7, 8])
@pytest.mark.parametrize("which", ["under", "over"])
def test_tabulated_words_agree_except_u2(s, which):
    for u in range(s):
        params = SystemParams(s, u)
        U = ProbVector.uniform(s)
        T = tail_extrema(params, U)
        state = 1 if which == "under" else 0
        lo = eval_P(params, U, tabulated_word(params, which, "inf"))
        hi = eval_P(params, U, tabulated_word(params, which, "sup"))
        agrees = (lo, hi) == (T.lo[state], T.hi[state])
        if u == 2:
            # the tabulated words use block value 2, which u = 2 forbids
            assert not agrees
        else:
            assert agrees, (s, u, which)
