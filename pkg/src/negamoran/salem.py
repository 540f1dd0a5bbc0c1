"""Probability vectors, P- and nega-P-representations, Salem-type functions.

Every evaluator here is exact over ``fractions.Fraction``.  A word is read as
the digit sequence that the formula indexes, so for the parity-twisted
functions (``eval_F_tilde``, ``eval_F_ddot``) the twist is applied to the
input word itself; the point they are increasing in is the s-adic value of
the correspondingly complemented word (see ``F_tilde_argument``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .digits import DigitError, DigitSeq, SystemParams
from .numeral import eval_positional, eval_s_adic, partial_sum
from .digits import complement_even, complement_odd


class ProbVectorError(ValueError):
    pass


@dataclass(frozen=True)
class ProbVector:
    p: tuple[Fraction, ...]

    def __post_init__(self):
        p = tuple(Fraction(x) for x in self.p)
        object.__setattr__(self, "p", p)
        if len(p) < 2:
            raise ProbVectorError("need at least two probabilities")
        if any(x <= 0 for x in p):
            raise ProbVectorError(f"every p_i must be > 0, got {[str(x) for x in p]}")
        if sum(p) != 1:
            raise ProbVectorError(f"probabilities sum to {sum(p)}, not 1")
        beta, acc = [], Fraction(0)
        for x in p:
            beta.append(acc)
            acc += x
        object.__setattr__(self, "_beta", tuple(beta))

    @classmethod
    def uniform(cls, s: int) -> "ProbVector":
        return cls(tuple(Fraction(1, s) for _ in range(s)))

    @property
    def s(self) -> int:
        return len(self.p)

    @property
    def beta(self) -> tuple[Fraction, ...]:
        return self._beta

    @property
    def is_uniform(self) -> bool:
        return len(set(self.p)) == 1

    # parity-twisted accessors; n is the 1-indexed position
    def p_tilde(self, d: int, n: int) -> Fraction:
        return self.p[d] if n % 2 else self.p[self.s - 1 - d]

    def beta_tilde(self, d: int, n: int) -> Fraction:
        return self.beta[d] if n % 2 else self.beta[self.s - 1 - d]

    def p_ddot(self, d: int, n: int) -> Fraction:
        return self.p[self.s - 1 - d] if n % 2 else self.p[d]

    def beta_ddot(self, d: int, n: int) -> Fraction:
        return self.beta[self.s - 1 - d] if n % 2 else self.beta[d]

    def delta_tilde(self, d: int, n: int) -> Fraction:
        """The three-case coefficient of the alternating nega-P series."""
        if n % 2 == 0:
            return sum(self.p[self.s - 1 - d:], Fraction(0))
        return self.beta[d]

    def check(self, params: SystemParams) -> "ProbVector":
        if self.s != params.s:
            raise ProbVectorError(f"P has {self.s} entries but s = {params.s}")
        return self

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.p)


def parse_prob_vector(text: str, s: int) -> ProbVector:
    """Parse "uniform" or comma-separated rationals such as "1/2,1/4,1/8,1/8"."""
    text = text.strip()
    if text.lower() == "uniform":
        return ProbVector.uniform(s)
    parts = [x.strip() for x in text.split(",") if x.strip()]
    if "..." in parts:
        # "1/6,...,1/6": a constant vector written with an ellipsis
        given = {x for x in parts if x != "..."}
        if len(given) != 1:
            raise ProbVectorError(f"an ellipsis needs a single repeated value: {text!r}")
        parts = [given.pop()] * s
    try:
        values = [Fraction(x) for x in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise ProbVectorError(f"cannot parse P vector {text!r}") from exc
    pv = ProbVector(tuple(values))
    if pv.s != s:
        raise ProbVectorError(f"P has {pv.s} entries but s = {s}")
    return pv


def _validate(P: ProbVector, d: DigitSeq) -> None:
    d.validate(P.s)


def eval_P(params, P: ProbVector, d: DigitSeq) -> Fraction:
    """y = beta_{a1} + sum_n beta_{an} prod_{j<n} p_{aj}."""
    _validate(P, d)
    return eval_positional(d, lambda a, _n: (P.beta[a], P.p[a]))


def eval_f_zeta(params, P: ProbVector, d: DigitSeq) -> Fraction:
    # the distribution function of zeta, read on the s-adic word of its argument
    return eval_P(params, P, d)


def _negP_step(P: ProbVector):
    def step(a, n):
        delta = P.delta_tilde(a, n)
        # odd n: +delta; even n: -delta plus the prod_{j<=2k-1} p~ term
        return (delta if n % 2 else 1 - delta), P.p_tilde(a, n)
    return step


def eval_negP(params, P: ProbVector, d: DigitSeq) -> Fraction:
    """Exact value of the alternating nega-P series, built from its own coefficients."""
    _validate(P, d)
    return eval_positional(d, _negP_step(P))


def negP_series(P: ProbVector, d: DigitSeq, n_terms: int) -> Fraction:
    """Direct partial sum of the nega-P series over positions 1..n_terms.

    Written term by term from the three-sum form (no fixed-point algebra),
    so it checks the closed form above.  The truncation error lies in
    [0, prod_{j<=n_terms} p~_{aj}].
    """
    digits = d.explicit().head(n_terms)
    total = P.beta[digits[0]]
    weight = P.p_tilde(digits[0], 1)  # prod_{j<n} p~
    for n in range(2, n_terms + 1):
        a = digits[n - 1]
        total += (-1) ** (n - 1) * P.delta_tilde(a, n) * weight
        weight *= P.p_tilde(a, n)
    # sum_k prod_{j=1}^{2k-1} p~, for 2k <= n_terms
    weight = Fraction(1)
    for n in range(1, n_terms + 1):
        weight *= P.p_tilde(digits[n - 1], n)
        if n % 2 == 1 and n + 1 <= n_terms:
            total += weight
    return total


def negP_tail_bound(P: ProbVector, d: DigitSeq, n_terms: int) -> Fraction:
    w = Fraction(1)
    for n, a in enumerate(d.explicit().head(n_terms), start=1):
        w *= P.p_tilde(a, n)
    return w


def eval_F_tilde(params, P: ProbVector, d: DigitSeq) -> Fraction:
    """beta~_{a1} + sum_k beta~_{ak} prod_{j<k} p~_{aj}."""
    _validate(P, d)
    return eval_positional(d, lambda a, n: (P.beta_tilde(a, n), P.p_tilde(a, n)))


def eval_F_ddot(params, P: ProbVector, d: DigitSeq) -> Fraction:
    """beta_{s-1-a1} + sum_k beta''_{ak} prod_{j<k} p''_{aj}."""
    _validate(P, d)
    return eval_positional(d, lambda a, n: (P.beta_ddot(a, n), P.p_ddot(a, n)))


def F_tilde_argument(params, d: DigitSeq) -> Fraction:
    """The point of [0, 1] at which eval_F_tilde(d) is the distribution value."""
    s = params.s if isinstance(params, SystemParams) else int(params)
    return eval_s_adic(s, complement_even(s, d.explicit()))


def F_ddot_argument(params, d: DigitSeq) -> Fraction:
    s = params.s if isinstance(params, SystemParams) else int(params)
    return eval_s_adic(s, complement_odd(s, d.explicit()))


def P_partial_sum(P: ProbVector, d: DigitSeq, n_terms: int) -> Fraction:
    return partial_sum(d, lambda a, _n: (P.beta[a], P.p[a]), n_terms)


def extract_P_digits(params, P: ProbVector, x: Fraction, n: int) -> DigitSeq:
    """First n P-digits of x by the greedy inverse.

    At a cylinder boundary the left branch is taken: the digit a with
    beta_a < r <= beta_a + p_a, which yields the non-terminating
    representation (e.g. 1/2 -> 1333... for uniform P, s = 4).
    """
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DigitError(f"x = {x} is outside [0, 1]")
    digits = []
    r = x
    for _ in range(n):
        if r == 0:
            digits.append(0)
            continue
        for a in range(P.s):
            if P.beta[a] < r <= P.beta[a] + P.p[a]:
                break
        digits.append(a)
        r = (r - P.beta[a]) / P.p[a]
    return DigitSeq(tuple(digits))


def p_dual_pair(s: int, head: Sequence[int]) -> tuple[DigitSeq, DigitSeq]:
    """Two P-words of one P-rational number: head 000... and head' (s-1)(s-1)..."""
    head = tuple(head)
    if not head or head[-1] == 0:
        raise DigitError("the last digit of a dual-pair head must be nonzero")
    return DigitSeq(head, (0,)), DigitSeq(head[:-1] + (head[-1] - 1,), (s - 1,))


def nega_p_dual_pair(s: int, head: Sequence[int]) -> tuple[DigitSeq, DigitSeq]:
    """Two nega-P-words of one nega-P-rational number."""
    head = tuple(head)
    if not head or head[-1] == 0:
        raise DigitError("the last digit of a dual-pair head must be nonzero")
    return (DigitSeq(head, (s - 1, 0)),
            DigitSeq(head[:-1] + (head[-1] - 1,), (0, s - 1)))
