"""Interval geometry of P-, nega-P- and restricted cylinders.

Systems:
    "P"       unrestricted P-cylinders, base over A
    "negP"    unrestricted nega-P-cylinders, base over A
    "SnegPu"  cylinders of S(-P,u), base over Abar (block values)
    "SPu"     cylinders of the positive set S(P,u), base over Abar
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .digits import BlockSeq, DigitError, DigitSeq, SystemParams, complement_even, expand_blocks
from .salem import ProbVector, eval_negP, eval_P
from .tailsets import extremal_blocks, tail_extrema

SYSTEMS = ("P", "negP", "SPu", "SnegPu")


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


@dataclass(frozen=True)
class Cylinder:
    system: str
    base: tuple[int, ...]
    params: SystemParams
    P: ProbVector

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ValueError(f"unknown system {self.system!r}; expected one of {SYSTEMS}")
        object.__setattr__(self, "base", tuple(self.base))
        alphabet = self.params.Abar if self.system in ("SPu", "SnegPu") else self.params.A
        for c in self.base:
            if c not in alphabet:
                raise DigitError(f"digit {c} not allowed in a {self.system} cylinder base")

    def interval(self) -> Interval:
        return {
            "P": cyl_interval_P,
            "negP": cyl_interval_negP,
            "SPu": cyl_interval_SPu,
            "SnegPu": cyl_interval_S,
        }[self.system](self.params, self.P, self.base)


def parse_cylinder(text: str, params: SystemParams, P: ProbVector) -> Cylinder:
    """Parse "SnegPu:1,3,4" (an empty base is written "P:")."""
    system, _, rest = text.partition(":")
    rest = rest.strip()
    base = tuple(int(x) for x in rest.split(",")) if rest else ()
    return Cylinder(system.strip(), base, params, P)


# -- unrestricted cylinders ------------------------------------------------

def cyl_interval_P(params: SystemParams, P: ProbVector, base: Sequence[int]) -> Interval:
    base = tuple(base)
    s = params.s
    return Interval(eval_P(params, P, DigitSeq(base, (0,))), eval_P(params, P, DigitSeq(base, (s - 1,))))


def negP_extremal_tails(s: int, rank: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """(inf tail, sup tail) periods for a nega-P-cylinder of the given rank."""
    if rank % 2 == 1:
        return (s - 1, 0), (0, s - 1)
    return (0, s - 1), (s - 1, 0)


def cyl_interval_negP(params: SystemParams, P: ProbVector, base: Sequence[int]) -> Interval:
    base = tuple(base)
    lo_tail, hi_tail = negP_extremal_tails(params.s, len(base))
    return Interval(eval_negP(params, P, DigitSeq(base, lo_tail)), eval_negP(params, P, DigitSeq(base, hi_tail)))


def negP_diameter_product(P: ProbVector, base: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for n, c in enumerate(base, start=1):
        out *= P.p_tilde(c, n)
    return out


def adjacency_check(params: SystemParams, P: ProbVector, base: Sequence[int], c: int,
                    system: str = "P") -> bool:
    """Do the sibling cylinders with last digits c and c+1 abut exactly?

    P-cylinders: sup[c] = inf[c+1].  Nega-P-cylinders flip the orientation
    at even child rank: sup[c+1] = inf[c].
    """
    if not 0 <= c <= params.s - 2:
        raise DigitError(f"c must lie in [0, {params.s - 2}]")
    base = tuple(base)
    if system == "P":
        return cyl_interval_P(params, P, base + (c,)).hi == cyl_interval_P(params, P, base + (c + 1,)).lo
    left = cyl_interval_negP(params, P, base + (c,))
    right = cyl_interval_negP(params, P, base + (c + 1,))
    if (len(base) + 1) % 2 == 1:
        return left.hi == right.lo
    return right.hi == left.lo


# -- restricted cylinders --------------------------------------------------

def _check_blocks(params: SystemParams, base: Sequence[int]) -> tuple[int, ...]:
    base = tuple(base)
    BlockSeq(base).validate(params)
    return base


def cylinder_weight(params: SystemParams, P: ProbVector, base: Sequence[int]) -> Fraction:
    """prod_j p~(c_j, c_1+..+c_j) * prod over u-positions i < c_1+..+c_n, i not a partial sum."""
    base = _check_blocks(params, base)
    sums, acc = [], 0
    for c in base:
        acc += c
        sums.append(acc)
    w = Fraction(1)
    for c, sigma in zip(base, sums):
        w *= P.p_tilde(c, sigma)
    partial = set(sums[:-1])
    for i in range(1, acc):
        if i not in partial:
            w *= P.p_tilde(params.u, i)
    return w


def tau(params: SystemParams, P: ProbVector, base: Sequence[int]) -> Fraction:
    """P-value of the complemented expanded prefix followed by zeros."""
    prefix = expand_blocks(params, BlockSeq(_check_blocks(params, base))).prefix
    return eval_P(params, P, DigitSeq(complement_even(params, DigitSeq(prefix)).prefix, (0,)))


def tail_state(base: Sequence[int]) -> int:
    """0 when c_1+..+c_n is even (over-set tail), 1 when odd (under-set tail)."""
    return sum(base) % 2


def cyl_interval_S(params: SystemParams, P: ProbVector, base: Sequence[int]) -> Interval:
    base = _check_blocks(params, base)
    T = tail_extrema(params, P)
    t = tail_state(base)
    w = cylinder_weight(params, P, base)
    start = tau(params, P, base)
    return Interval(start + w * T.lo[t], start + w * T.hi[t])


def diameter_S(params: SystemParams, P: ProbVector, base: Sequence[int]) -> Fraction:
    base = _check_blocks(params, base)
    return cylinder_weight(params, P, base) * tail_extrema(params, P).diameter(tail_state(base))


def cyl_interval_SPu(params: SystemParams, P: ProbVector, base: Sequence[int]) -> Interval:
    base = _check_blocks(params, base)
    T = tail_extrema(params, P, twisted=False)
    prefix = expand_blocks(params, BlockSeq(base)).prefix
    w = Fraction(1)
    for d in prefix:
        w *= P.p[d]
    start = eval_P(params, P, DigitSeq(prefix, (0,)))
    return Interval(start + w * T.lo[0], start + w * T.hi[0])


def extremal_words_S(params: SystemParams, P: ProbVector, base: Sequence[int]) -> tuple[DigitSeq, DigitSeq]:
    """Raw nega-P digit words attaining inf and sup of a restricted cylinder.

    Built from the base followed by the solver's extremal block sequence and
    then expanded, so evaluating them with eval_negP is independent of the
    tau/weight formula.
    """
    base = _check_blocks(params, base)
    T = tail_extrema(params, P)
    t = tail_state(base)
    words = []
    for policy in (T.lo_policy, T.hi_policy):
        head, cycle = extremal_blocks(params, policy, t)
        words.append(expand_blocks(params, BlockSeq(base + head, cycle)))
    return words[0], words[1]


def cyl_interval_S_by_words(params: SystemParams, P: ProbVector, base: Sequence[int]) -> Interval:
    lo_word, hi_word = extremal_words_S(params, P, base)
    return Interval(eval_negP(params, P, lo_word), eval_negP(params, P, hi_word))


def step_weight(params: SystemParams, P: ProbVector, state: int, c: int) -> Fraction:
    """Weight of appending block c to a prefix whose digit sum has parity ``state``.

    The block occupies positions sigma+1 .. sigma+c; only their parities matter.
    """
    w = Fraction(1)
    for i in range(1, c):
        w *= P.p_tilde(params.u, state + i)
    return w * P.p_tilde(c, state + c)


def child_ratio(params: SystemParams, P: ProbVector, base: Sequence[int], c: int) -> Fraction:
    """d(child) / d(parent), as a quotient of the two diameter formulas."""
    base = _check_blocks(params, base)
    return diameter_S(params, P, base + (c,)) / diameter_S(params, P, base)


def child_ratio_closed_form(params: SystemParams, P: ProbVector, parent_parity: int, c: int) -> Fraction:
    """The four-case table: leading p-factor, alternating u-run, tail-set factor for odd c."""
    s = params.s
    T = tail_extrema(params, P)
    child_parity = (parent_parity + c) % 2
    lead = P.p[s - 1 - c] if child_parity == 0 else P.p[c]
    run = Fraction(1)
    for i in range(1, c):
        run *= P.p[params.u] if (parent_parity + i) % 2 == 1 else P.p[s - 1 - params.u]
    factor = Fraction(1)
    if c % 2 == 1:
        factor = T.diameter(child_parity) / T.diameter(parent_parity)
    return lead * run * factor


@dataclass(frozen=True)
class SeparationReport:
    parent: tuple[int, ...]
    c: int
    regime: str  # "a" (u in {0,1}), "b" (2 <= u <= s-3), "c" (u in {s-2, s-1})
    predicted_left: int
    actual_left: int
    gap: Fraction

    @property
    def ok(self) -> bool:
        return self.predicted_left == self.actual_left and self.gap > 0


def predicted_left_sibling(params: SystemParams, parent: Sequence[int], c: int) -> tuple[str, int]:
    """Which of the siblings c, c+1 lies to the left, by the three-regime case table."""
    s, u = params.s, params.u
    even = (sum(parent) + c) % 2 == 0
    if u in (0, 1):
        return "a", (c if even else c + 1)
    if u in (s - 2, s - 1):
        return "c", (c + 1 if even else c)
    if even:
        return "b", (c if u < c else c + 1)
    return "b", (c if c + 1 <= u else c + 1)


def separation_check(params: SystemParams, P: ProbVector, parent: Sequence[int], c: int) -> SeparationReport:
    parent = _check_blocks(params, parent)
    if c not in params.Abar or c + 1 not in params.Abar:
        raise DigitError(f"{c} and {c + 1} must both be admissible block values")
    regime, predicted = predicted_left_sibling(params, parent, c)
    a = cyl_interval_S(params, P, parent + (c,))
    b = cyl_interval_S(params, P, parent + (c + 1,))
    if a.lo < b.lo:
        actual, gap = c, b.lo - a.hi
    else:
        actual, gap = c + 1, a.lo - b.hi
    return SeparationReport(parent, c, regime, predicted, actual, gap)
