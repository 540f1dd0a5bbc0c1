"""The sets S(-P,u) as nested rank-n covers: enumeration, extrema, measure."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from .cylinders import Interval, step_weight
from .digits import DigitSeq, LanguageError, SystemParams, contract_blocks, expand_blocks, BlockSeq
from .formatting import DEFAULT_PRECISION, decimal_str
from .numeral import eval_nega_s_adic
from .salem import ProbVector, eval_P
from .tailsets import block_map, extremal_blocks, extremal_word, tabulated_word, tail_extrema

DEFAULT_CAP = 10**6


class CapExceeded(RuntimeError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"enumeration needs {required} cylinders, cap is {cap}; raise --cap to at least {required}")
        self.required = required
        self.cap = cap


@dataclass(frozen=True)
class Cover:
    rank: int
    intervals: tuple[tuple[tuple[int, ...], Interval], ...]

    @property
    def total_length(self) -> Fraction:
        return sum((iv.diameter for _, iv in self.intervals), Fraction(0))

    def gaps(self) -> list[Fraction]:
        ivs = [iv for _, iv in self.intervals]
        return [b.lo - a.hi for a, b in zip(ivs, ivs[1:])]

    def is_disjoint(self) -> bool:
        return all(g > 0 for g in self.gaps())

    def to_rows(self, precision: int = DEFAULT_PRECISION) -> list[dict]:
        rows = []
        for base, iv in self.intervals:
            rows.append({
                "rank": self.rank,
                "base": ",".join(map(str, base)),
                "lo_num": iv.lo.numerator, "lo_den": iv.lo.denominator,
                "hi_num": iv.hi.numerator, "hi_den": iv.hi.denominator,
                "decimal_lo": decimal_str(iv.lo, precision),
                "decimal_hi": decimal_str(iv.hi, precision),
            })
        return rows

    def to_csv(self, precision: int = DEFAULT_PRECISION) -> str:
        buf = io.StringIO()
        fields = ["rank", "base", "lo_num", "lo_den", "hi_num", "hi_den", "decimal_lo", "decimal_hi"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.to_rows(precision))
        return buf.getvalue()

    def to_json(self, precision: int = DEFAULT_PRECISION) -> str:
        return json.dumps({"rank": self.rank, "intervals": self.to_rows(precision)}, indent=2)


def _frontier(params: SystemParams, P: ProbVector, n: int):
    """(base, offset, weight, tail state) for every rank-n base, built block by block."""
    maps = {(t, c): block_map(params, P, c, t) for t in (0, 1) for c in params.Abar}
    layer = [((), Fraction(0), Fraction(1), 0)]
    for _ in range(n):
        nxt = []
        for base, off, w, t in layer:
            for c in params.Abar:
                a, b = maps[t, c]
                nxt.append((base + (c,), off + w * a, w * b, (t + c) % 2))
        layer = nxt
    return layer


def build_cover(params: SystemParams, P: ProbVector, n: int, cap: int = DEFAULT_CAP) -> Cover:
    """All rank-n cylinder intervals of S(-P,u), sorted by left endpoint."""
    if n < 0:
        raise ValueError("rank must be >= 0")
    required = params.branching ** n
    if required > cap:
        raise CapExceeded(required, cap)
    T = tail_extrema(params, P)
    intervals = [(base, Interval(off + w * T.lo[t], off + w * T.hi[t]))
                 for base, off, w, t in _frontier(params, P, n)]
    intervals.sort(key=lambda item: item[1].lo)
    cover = Cover(n, tuple(intervals))
    if not cover.is_disjoint():
        raise AssertionError(f"rank-{n} cover intervals overlap")
    return cover


def step_sums(params: SystemParams, P: ProbVector) -> tuple[Fraction, Fraction]:
    """v_t = sum over c of the weight of one block appended in parity state t."""
    return tuple(sum((step_weight(params, P, t, c) for c in params.Abar), Fraction(0)) for t in (0, 1))


def measure_by_parity(params: SystemParams, P: ProbVector, n: int) -> Fraction:
    """Parity-class form: sum_{odd sums} W * len(I_under) + sum_{even sums} W * len(I_over)."""
    T = tail_extrema(params, P)
    weights = [Fraction(1), Fraction(0)]
    for _ in range(n):
        new = [Fraction(0), Fraction(0)]
        for t in (0, 1):
            for c in params.Abar:
                new[(t + c) % 2] += weights[t] * step_weight(params, P, t, c)
        weights = new
    return weights[0] * T.diameter(0) + weights[1] * T.diameter(1)


@dataclass(frozen=True)
class MeasureRow:
    n: int
    measure: Fraction
    bound: Fraction


def measure_sequence(params: SystemParams, P: ProbVector, n_max: int, cap: int = DEFAULT_CAP) -> list[MeasureRow]:
    T = tail_extrema(params, P)
    V = max(step_sums(params, P))
    top = max(T.diameter(0), T.diameter(1))
    return [MeasureRow(n, build_cover(params, P, n, cap).total_length, top * V**n)
            for n in range(1, n_max + 1)]


@dataclass(frozen=True)
class SetExtrema:
    lo: Fraction
    hi: Fraction
    source: str
    lo_word: DigitSeq
    hi_word: DigitSeq
    table_lo_word: DigitSeq | None = None
    table_hi_word: DigitSeq | None = None
    table_agrees: bool | None = None


EXTREMA_SETS = ("SPu_over", "SPu_under", "SnegPu", "Sneg_s_u", "SPu")


def _case(u: int) -> str:
    return {0: "u=0", 1: "u=1", 2: "u=2"}.get(u, "u>=3")


def set_extrema(params: SystemParams, P: ProbVector, which: str) -> SetExtrema:
    """Exact inf/sup of one of the restricted sets, with the tabulated words checked.

    The extremal words come from the exact solver; the tabulated periodic
    words are evaluated alongside and ``table_agrees`` records whether
    they give the same endpoints.
    """
    if which not in EXTREMA_SETS:
        raise ValueError(f"unknown set {which!r}; expected one of {EXTREMA_SETS}")
    if which == "SPu":
        T = tail_extrema(params, P, twisted=False)
        return SetExtrema(T.lo[0], T.hi[0], "exact solver, positive set",
                          extremal_word(params, T.lo_policy, 0, False),
                          extremal_word(params, T.hi_policy, 0, False))
    if which == "Sneg_s_u":
        U = ProbVector.uniform(params.s)
        T = tail_extrema(params, U)
        # y -> 1/(s+1) - y reverses order: inf comes from the sup policy
        words = []
        for policy in (T.hi_policy, T.lo_policy):
            head, cycle = extremal_blocks(params, policy, 0)
            words.append(expand_blocks(params, BlockSeq(head, cycle)))
        lo, hi = (eval_nega_s_adic(params, w) for w in words)
        p_lo, p_hi = tabulated_word(params, "nega_s", "inf"), tabulated_word(params, "nega_s", "sup")
        agrees = eval_nega_s_adic(params, p_lo) == lo and eval_nega_s_adic(params, p_hi) == hi
        return SetExtrema(lo, hi, f"exact solver; table case {_case(params.u)}", words[0], words[1],
                          p_lo, p_hi, agrees)
    state = 1 if which == "SPu_under" else 0
    label = "under" if state else "over"
    T = tail_extrema(params, P)
    lo_w = extremal_word(params, T.lo_policy, state)
    hi_w = extremal_word(params, T.hi_policy, state)
    p_lo, p_hi = tabulated_word(params, label, "inf"), tabulated_word(params, label, "sup")
    agrees = eval_P(params, P, p_lo) == T.lo[state] and eval_P(params, P, p_hi) == T.hi[state]
    return SetExtrema(T.lo[state], T.hi[state], f"exact solver; table case {_case(params.u)}",
                      lo_w, hi_w, p_lo, p_hi, agrees)


def digit_membership(params: SystemParams, d: DigitSeq) -> tuple[bool, int | None]:
    """Is d a u-run block word?  Returns (accepted, first violating position)."""
    try:
        contract_blocks(params, d)
    except LanguageError as exc:
        return False, exc.position
    return True, None
