import json
from fractions import Fraction as F

import pytest

from negamoran import cylinders as cyl
from negamoran.digits import SystemParams, parse_word
from negamoran.moran import (EXTREMA_SETS, CapExceeded, build_cover, digit_membership, measure_by_parity,
                             measure_sequence, set_extrema, step_sums)
from negamoran.numeral import eval_nega_s_adic
from negamoran.salem import ProbVector

P6 = ProbVector((F(1, 3), F(1, 6), F(1, 6), F(1, 9), F(1, 9), F(1, 9)))


@pytest.mark.parametrize("s,u,P", [(5, 2, ProbVector.uniform(5)), (6, 0, P6), (6, 5, P6)])
def test_covers_match_cylinders_and_nest(s, u, P):
    params = SystemParams(s, u)
    prev = build_cover(params, P, 0)
    assert len(prev.intervals) == 1
    for n in range(1, 4):
        cover = build_cover(params, P, n)
        assert len(cover.intervals) == params.branching ** n
        assert cover.is_disjoint()
        for base, iv in cover.intervals:
            assert iv == cyl.cyl_interval_S(params, P, base)
            assert any(p.contains(iv) for _, p in prev.intervals)
        assert cover.total_length == measure_by_parity(params, P, n)
        prev = cover


def test_cap():
    with pytest.raises(CapExceeded) as exc:
        build_cover(SystemParams(6, 0), P6, 5, cap=1000)
    assert exc.value.required == 5**5 and exc.value.cap == 1000
    assert "3125" in str(exc.value)


def test_cover_export():
    cover = build_cover(SystemParams(5, 2), ProbVector.uniform(5), 1)
    text = cover.to_csv(precision=10)
    header, first = text.splitlines()[:2]
    assert header == "rank,base,lo_num,lo_den,hi_num,hi_den,decimal_lo,decimal_hi"
    assert first.startswith("1,1,31,104,")
    data = json.loads(cover.to_json())
    assert data["rank"] == 1 and len(data["intervals"]) == 3


def test_measure_uniform_ratio():
    params = SystemParams(5, 2)
    rows = measure_sequence(params, ProbVector.uniform(5), 5)
    ratio = sum(F(1, 5**c) for c in params.Abar)
    assert all(b.measure / a.measure == ratio for a, b in zip(rows, rows[1:]))
    assert max(step_sums(params, ProbVector.uniform(5))) < 1


@pytest.mark.parametrize("s,u,P", [(5, 2, ProbVector.uniform(5)), (6, 0, P6)])
def test_measure_bound(s, u, P):
    rows = measure_sequence(SystemParams(s, u), P, 6)
    assert all(a.measure > b.measure for a, b in zip(rows, rows[1:]))
    assert all(r.measure <= r.bound for r in rows)


@pytest.mark.parametrize("s,u", [(4, 0), (5, 2), (6, 5)])
def test_uniform_cover_maps_onto_nega_s_cylinders(s, u):
    params = SystemParams(s, u)
    U = ProbVector.uniform(s)
    for base, iv in build_cover(params, U, 2).intervals:
        vals = sorted(eval_nega_s_adic(s, w) for w in cyl.extremal_words_S(params, U, base))
        assert vals == [F(1, s + 1) - iv.hi, F(1, s + 1) - iv.lo]


@pytest.mark.parametrize("which", EXTREMA_SETS)
def test_set_extrema(which):
    params = SystemParams(6, 3)
    e = set_extrema(params, P6, which)
    assert e.lo < e.hi
    if which in ("SPu_over", "SPu_under", "Sneg_s_u"):
        assert e.table_agrees
    if which == "SnegPu":
        hull = build_cover(params, P6, 0).intervals[0][1]
        assert (e.lo, e.hi) == (hull.lo, hull.hi)


def test_set_extrema_flags_u2_tables():
    e = set_extrema(SystemParams(5, 2), ProbVector.uniform(5), "SPu_over")
    assert e.table_agrees is False
    with pytest.raises(ValueError):
        set_extrema(SystemParams(5, 2), ProbVector.uniform(5), "nope")


def test_membership():
    params = SystemParams(5, 2)
    assert digit_membership(params, parse_word("1223(4222)")) == (False, 5)
    assert digit_membership(params, parse_word("1(223)")) == (True, None)
    assert digit_membership(params, parse_word("221")) == (False, 3)
