import itertools
import math
import random
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from negamoran.digits import SystemParams
from negamoran.dimension import (SolverError, TransferMatrix, alpha_k_product, alpha_k_transfer, alpha_limit,
                                 boxcount_intervals, count_boxes, dim_theorem5, dim_theorem7, dimension_trace,
                                 hypothesis_flags, omega, parity_counts, solve_moran_eq2)
from negamoran.moran import build_cover
from negamoran.salem import ProbVector
from negamoran.verify import random_prob_vector

from strategies import prob_vectors

P4 = ProbVector((F(1, 2), F(1, 4), F(1, 8), F(1, 8)))


def bisect(f, lo, hi, tol=1e-15):
    flo = f(lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def test_eq2_examples():
    assert solve_moran_eq2([F(1, 2), F(1, 2)]) == pytest.approx(1, abs=1e-12)
    assert solve_moran_eq2([F(1, 3), F(1, 3)]) == pytest.approx(math.log(2) / math.log(3), abs=1e-12)
    oracle = bisect(lambda a: 4**-a + 16**-a + 64**-a - 1, 0, 1)
    assert solve_moran_eq2([F(1, 4), F(1, 16), F(1, 64)]) == pytest.approx(oracle, abs=1e-12)
    assert solve_moran_eq2([F(1, 2)]) == 0.0


@pytest.mark.parametrize("bad", [[], [F(0)], [F(1)], [F(3, 2), F(1, 2)]])
def test_eq2_rejects(bad):
    with pytest.raises(SolverError):
        solve_moran_eq2(bad)


@given(st.lists(st.floats(0.01, 0.99), min_size=2, max_size=8))
def test_eq2_residual(ratios):
    a = solve_moran_eq2(ratios)
    assert abs(sum(r**a for r in ratios) - 1) <= 1e-10


def test_uniform_dimension_values():
    x = bisect(lambda x: x + x * x + x**3 - 1, 0.0, 1.0)
    assert dim_theorem5(SystemParams(4, 0)) == pytest.approx(-math.log(x, 4), abs=1e-10)
    y = bisect(lambda y: y * y + y**3 - 1, 0.0, 1.0)
    assert dim_theorem5(SystemParams(4, 1)) == pytest.approx(-math.log(y, 4), abs=1e-10)
    assert dim_theorem5(SystemParams(4, 1)) == pytest.approx(0.2028, abs=1e-4)
    # removing a digit from Abar lowers the dimension
    assert dim_theorem5(SystemParams(6, 0)) > dim_theorem5(SystemParams(6, 3))


def test_positive_set_dimension():
    params = SystemParams(4, 0)
    oracle = bisect(lambda a: 4**-a + 16**-a + 32**-a - 1, 0, 1)
    assert dim_theorem7(params, P4) == pytest.approx(oracle, abs=1e-10)
    for s, u in [(4, 0), (5, 2), (7, 6)]:
        p = SystemParams(s, u)
        assert dim_theorem7(p, ProbVector.uniform(s)) == pytest.approx(dim_theorem5(p), abs=1e-10)


@given(st.data())
def test_positive_set_dimension_in_unit_interval(data):
    s = data.draw(st.integers(4, 7))
    p = SystemParams(s, data.draw(st.integers(0, s - 1)))
    assert 0 < dim_theorem7(p, data.draw(prob_vectors(s))) < 1


def test_parity_counts_example():
    pc = parity_counts(SystemParams(6, 1), 3)
    assert [pc.total(j) for j in (1, 2, 3, 4)] == [16, 16, 16, 16]
    assert pc.E + pc.O == 4**3
    with pytest.raises(ValueError):
        parity_counts(SystemParams(6, 1), 0)


@pytest.mark.parametrize("s,u", [(4, 0), (4, 2), (5, 2), (6, 5), (7, 0)])
def test_parity_counts_enumeration(s, u):
    params = SystemParams(s, u)
    for n in range(1, 5):
        even = sum(1 for b in itertools.product(params.Abar, repeat=n) if sum(b) % 2 == 0)
        pc = parity_counts(params, n)
        assert (pc.E, pc.O) == (even, params.branching**n - even)


def test_omega_class_check():
    params = SystemParams(5, 2)
    assert omega(params, ProbVector.uniform(5), 2, 1) > 0
    with pytest.raises(ValueError):
        omega(params, ProbVector.uniform(5), 2, 4)


@pytest.mark.parametrize("s,u", [(5, 2), (6, 0), (4, 2), (4, 1)])
def test_transfer_matches_enumeration(s, u):
    params = SystemParams(s, u)
    P = random_prob_vector(random.Random(s + u), s)
    M = TransferMatrix(params, P)
    hull = build_cover(params, P, 0).intervals[0][1].diameter
    for k in range(1, 4):
        diam = [iv.diameter / hull for _, iv in build_cover(params, P, k).intervals]
        for a in (0.1, 0.37, 0.8, 1.0):
            brute = math.fsum(float(d) ** a for d in diam)
            assert math.exp(M.log_sum(a, k)) == pytest.approx(brute, rel=1e-12)
        # exact at alpha = 1: the sum of normalised diameters
        assert math.exp(M.log_sum(1.0, k)) == pytest.approx(float(sum(diam)), rel=1e-12)


def test_transfer_degenerate_when_m_is_zero():
    # s = 4, u = 2: Abar = {1, 3}, every block flips the parity
    params = SystemParams(4, 2)
    M = TransferMatrix(params, ProbVector.uniform(4))(0.5)
    assert M[0, 0] == 0 and M[1, 1] == 0 and M[0, 1] > 0
    assert 0 < alpha_k_transfer(params, ProbVector.uniform(4), 5) < 1


def test_uniform_trace_is_flat():
    for s, u in [(4, 0), (5, 2), (6, 1)]:
        p = SystemParams(s, u)
        tr = dimension_trace(p, ProbVector.uniform(s), k_max=40)
        d5 = dim_theorem5(p)
        assert max(abs(a - d5) for a in tr.alphas) <= 1e-10
        assert tr.liminf_est == pytest.approx(d5, abs=1e-10)
        assert alpha_limit(p, ProbVector.uniform(s)) == pytest.approx(d5, abs=1e-10)


def test_uniform_sum_is_multiplicative():
    params = SystemParams(5, 2)
    M = TransferMatrix(params, ProbVector.uniform(5))
    for a in (0.2, 0.5):
        assert M.log_sum(a, 5) == pytest.approx(5 * M.log_sum(a, 1), rel=1e-12)


def test_nonuniform_trace_settles():
    params = SystemParams(4, 0)
    tr = dimension_trace(params, P4, k_max=40)
    diffs = [abs(b - a) for a, b in zip(tr.alphas, tr.alphas[1:])]
    assert all(d <= 1e-3 for d in diffs[9:])
    assert all(b <= a for a, b in zip(diffs[9:], diffs[10:]))
    assert all(0 < a <= 1 for a in tr.alphas)
    assert max(tr.solver_residuals) <= 1e-10
    assert tr.liminf_est <= tr.limsup_est
    assert abs(tr.alphas[-1] - tr.limit) < 1e-3
    # sum is decreasing in alpha
    M = TransferMatrix(params, P4)
    vals = [M.log_sum(a, 10) for a in (0.1, 0.3, 0.5, 0.7)]
    assert vals == sorted(vals, reverse=True)


def test_product_form():
    params = SystemParams(4, 0)
    r1 = alpha_k_product(params, P4, 1)
    assert r1.alpha == pytest.approx(alpha_k_transfer(params, P4, 1), abs=1e-12)
    assert r1.residual <= 1e-10
    # the count-weighted product keeps growing with the absolute counts
    rs = [alpha_k_product(params, P4, k) for k in range(1, 7)]
    assert all(b.alpha > a.alpha for a, b in zip(rs, rs[1:]))
    assert not rs[-1].in_unit_interval


def test_hypothesis_flags():
    flags = hypothesis_flags(SystemParams(5, 2), ProbVector.uniform(5))
    assert flags["c_star_positive"] and flags["max_ratio_below_one"]
    assert flags["branching"] == 3


def _cantor(n):
    ivs = [(F(0), F(1))]
    for _ in range(n):
        ivs = [iv for a, b in ivs for iv in ((a, a + (b - a) / 3), (b - (b - a) / 3, b))]
    return ivs


def test_boxcount_cantor_surrogate():
    ivs = _cantor(9)
    bc = boxcount_intervals(ivs, range(2, 14))
    assert bc.slope == pytest.approx(math.log(2) / math.log(3), abs=0.05)
    # affine rescaling
    moved = [(F(1, 7) + a / 5, F(1, 7) + b / 5) for a, b in ivs]
    bc2 = boxcount_intervals(moved, range(4, 16))
    assert abs(bc2.slope - bc.slope) <= 0.02


def test_boxcount_warns_on_short_window():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        boxcount_intervals(_cantor(4), range(2, 6))
    assert any("decades" in str(w.message) for w in caught)


def test_count_boxes_merges_overlaps():
    ivs = [(F(0), F(1, 4)), (F(1, 8), F(3, 8)), (F(7, 8), F(1))]
    # grid 1/8: cells 0..3 and 7..8
    assert count_boxes(ivs, 3) == 4 + 2
