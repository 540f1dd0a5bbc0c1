"""Hausdorff-dimension solvers for the self-similar and parity-Moran sets.

Root finding is done on floats; every ratio is first computed exactly and
converted once.  The pre-dimension alpha_k of S(-P,u) is the root of

    sum over rank-k cylinders of (d(cylinder) / d(J))**alpha = 1,

with J the convex hull of the set.  Because a cylinder's ratio to its parent
depends only on the parent's digit-sum parity and the appended block, that
sum is e0 . M(alpha)**k . 1 for a 2x2 parity transfer matrix M.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .cylinders import child_ratio_closed_form
from .digits import SystemParams
from .salem import ProbVector

ROOT_XTOL = 1e-14
ROOT_RTOL = 4 * np.finfo(float).eps


class SolverError(RuntimeError):
    pass


def _bracket_root(f, lo: float = 0.0, hi: float = 1.0, max_hi: float = 2.0**10) -> float:
    """Root of a strictly decreasing f with f(lo) >= 0; grows hi by doubling."""
    flo = f(lo)
    if flo == 0:
        return lo
    if flo < 0:
        raise SolverError(f"no sign change: f({lo}) = {flo} < 0")
    while f(hi) > 0:
        hi *= 2
        if hi > max_hi:
            raise SolverError(f"no root below {max_hi}")
    return brentq(f, lo, hi, xtol=ROOT_XTOL, rtol=ROOT_RTOL, maxiter=500)


def solve_moran_eq2(ratios: Sequence[float | Fraction]) -> float:
    """Unique alpha with sum_i ratio_i**alpha = 1, for ratios in (0, 1)."""
    r = [float(x) for x in ratios]
    if not r:
        raise SolverError("need at least one ratio")
    if any(not 0 < x < 1 for x in r):
        raise SolverError(f"ratios must lie in (0, 1): {r}")
    if len(r) == 1:
        return 0.0
    logs = np.log(r)
    return _bracket_root(lambda a: float(np.exp(a * logs).sum()) - 1.0)


def uniform_ratios(params: SystemParams) -> list[Fraction]:
    return [Fraction(1, params.s**c) for c in params.Abar]


def dim_theorem5(params: SystemParams) -> float:
    """Dimension of S(s,u) and S(-s,u): root of sum_{c in Abar} s**(-c*alpha) = 1."""
    if params.s == 3 and params.u in (1, 2):
        raise SolverError("the sets with s = 3, u in {1, 2} are excluded")
    return solve_moran_eq2(uniform_ratios(params))


def self_similar_ratios(params: SystemParams, P: ProbVector) -> list[Fraction]:
    P.check(params)
    return [P.p[c] * P.p[params.u] ** (c - 1) for c in params.Abar]


def dim_theorem7(params: SystemParams, P: ProbVector) -> float:
    """Dimension of the self-similar set S(P,u): ratios p_c * p_u**(c-1)."""
    return solve_moran_eq2(self_similar_ratios(params, P))


# -- parity counts --------------------------------------------------------

@dataclass(frozen=True)
class ParityCounts:
    n: int
    E: int  # rank-n bases with even digit sum
    O: int  # rank-n bases with odd digit sum
    N: dict  # j -> {c: number of rank-n cylinders whose last ratio is omega_{j,c}}

    def total(self, j: int) -> int:
        return sum(self.N[j].values())


def parity_counts(params: SystemParams, n: int) -> ParityCounts:
    """Counts for step n via E_{k+1} = m E_k + l O_k, O_{k+1} = l E_k + m O_k.

    Ratio classes: 1 odd parent & odd c, 2 even parent & odd c,
    3 odd parent & even c, 4 even parent & even c.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    l, m = params.l, params.m
    E, O = 1, 0
    for _ in range(n - 1):
        E, O = m * E + l * O, l * E + m * O
    odd = [c for c in params.Abar if c % 2]
    even = [c for c in params.Abar if c % 2 == 0]
    N = {1: {c: O for c in odd}, 2: {c: E for c in odd},
         3: {c: O for c in even}, 4: {c: E for c in even}}
    return ParityCounts(n, m * E + l * O, l * E + m * O, N)


# -- ratios and transfer matrix -------------------------------------------

_CLASS = {1: (1, 1), 2: (0, 1), 3: (1, 0), 4: (0, 0)}  # j -> (parent parity, c parity)


def omega(params: SystemParams, P: ProbVector, j: int, c: int) -> Fraction:
    parent, c_par = _CLASS[j]
    if c % 2 != c_par:
        raise ValueError(f"class {j} needs {'odd' if c_par else 'even'} c, got {c}")
    return child_ratio_closed_form(params, P, parent, c)


def ratio_table(params: SystemParams, P: ProbVector) -> dict[tuple[int, int], Fraction]:
    """(parent parity, c) -> exact child/parent diameter ratio."""
    return {(t, c): child_ratio_closed_form(params, P, t, c) for t in (0, 1) for c in params.Abar}


class TransferMatrix:
    """M(alpha)[t, t'] = sum over c moving parity t to t' of ratio(t, c)**alpha."""

    def __init__(self, params: SystemParams, P: ProbVector):
        self.params = params
        table = ratio_table(params, P)
        self._entries = [[[] for _ in range(2)] for _ in range(2)]
        for (t, c), r in table.items():
            self._entries[t][(t + c) % 2].append(math.log(float(r)))
        self._logs = [[np.array(e) for e in row] for row in self._entries]

    def __call__(self, alpha: float) -> np.ndarray:
        M = np.zeros((2, 2))
        for t in range(2):
            for t2 in range(2):
                if self._logs[t][t2].size:
                    M[t, t2] = np.exp(alpha * self._logs[t][t2]).sum()
        return M

    def log_sum(self, alpha: float, k: int) -> float:
        """log of e0 . M**k . 1, with per-step renormalisation."""
        M = self(alpha)
        v = np.array([1.0, 0.0])
        acc = 0.0
        for _ in range(k):
            v = v @ M
            scale = v.sum()
            acc += math.log(scale)
            v = v / scale
        return acc

    def spectral_radius(self, alpha: float) -> float:
        return float(max(abs(np.linalg.eigvals(self(alpha)))))


def alpha_k_transfer(params: SystemParams, P: ProbVector, k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    M = TransferMatrix(params, P)
    return _bracket_root(lambda a: M.log_sum(a, k))


def alpha_limit(params: SystemParams, P: ProbVector) -> float:
    """Root of spectral radius(M(alpha)) = 1, the k -> infinity limit of alpha_k."""
    M = TransferMatrix(params, P)
    return _bracket_root(lambda a: math.log(M.spectral_radius(a)))


@dataclass(frozen=True)
class ProductResult:
    k: int
    alpha: float
    residual: float
    in_unit_interval: bool


def product_log_lhs(params: SystemParams, P: ProbVector, k: int, alpha: float) -> float:
    """log of the count-weighted product, as tabulated, all exponents equal to alpha."""
    w = {j: {c: float(omega(params, P, j, c)) for c in params.Abar if c % 2 == _CLASS[j][1]} for j in _CLASS}
    first = sum(w[2][c] ** alpha for c in w[2]) + sum(w[4][c] ** alpha for c in w[4])
    total = math.log(first)
    for i in range(2, k + 1):
        counts = parity_counts(params, i).N
        factor = sum(counts[j][c] * w[j][c] ** alpha for j in (1, 2, 3, 4) for c in w[j])
        total += math.log(factor)
    return total


def alpha_k_product(params: SystemParams, P: ProbVector, k: int) -> ProductResult:
    """Root of the tabulated count-weighted product equation.

    Kept to test the tabulated form side by side with :func:`alpha_k_transfer`;
    for k >= 2 its factors grow with the absolute counts, so the root drifts
    and typically leaves (0, 1].
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    f = lambda a: product_log_lhs(params, P, k, a)
    alpha = _bracket_root(f, max_hi=2.0**16)
    return ProductResult(k, alpha, abs(math.expm1(f(alpha))), 0 < alpha <= 1)


# -- trace ----------------------------------------------------------------

@dataclass
class DimensionTrace:
    alphas: list[float]
    solver_residuals: list[float]
    liminf_est: float
    limsup_est: float
    window: int
    limit: float
    hypothesis_flags: dict = field(default_factory=dict)


def hypothesis_flags(params: SystemParams, P: ProbVector) -> dict:
    table = ratio_table(params, P)
    c_star = min(table.values())
    c_upper = max(table.values())
    return {
        "c_star": float(c_star),
        "c_star_positive": c_star > 0,
        "max_ratio": float(c_upper),
        "max_ratio_below_one": c_upper < 1,
        "branching": params.branching,
        "branching_bounded": True,
    }


def dimension_trace(params: SystemParams, P: ProbVector, k_max: int = 40, window: int = 10) -> DimensionTrace:
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    M = TransferMatrix(params, P)
    alphas, residuals = [], []
    for k in range(1, k_max + 1):
        a = _bracket_root(lambda x: M.log_sum(x, k))
        alphas.append(a)
        residuals.append(abs(math.expm1(M.log_sum(a, k))))
    tail = alphas[-min(window, k_max):]
    return DimensionTrace(alphas, residuals, min(tail), max(tail), min(window, k_max),
                          _bracket_root(lambda a: math.log(M.spectral_radius(a))),
                          hypothesis_flags(params, P))


# -- box counting ---------------------------------------------------------

@dataclass(frozen=True)
class BoxCount:
    slope: float
    stderr: float
    eps: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def decades(self) -> float:
        return math.log10(max(self.eps) / min(self.eps))


def count_boxes(intervals: Iterable[tuple[Fraction, Fraction]], j: int, base: int = 2) -> int:
    """Number of grid cells [k/base**j, (k+1)/base**j) met by a union of closed intervals."""
    scale = base**j
    spans = sorted((math.floor(Fraction(lo) * scale), math.floor(Fraction(hi) * scale)) for lo, hi in intervals)
    count, last = 0, None
    for a, b in spans:
        if last is not None and a <= last:
            a = last + 1
        if b >= a:
            count += b - a + 1
        last = b if last is None else max(last, b)
    return count


def boxcount_intervals(intervals: Sequence[tuple[Fraction, Fraction]], exponents: Sequence[int],
                       base: int = 2) -> BoxCount:
    """Least-squares slope of log N(eps) against log(1/eps), eps = base**-j."""
    intervals = list(intervals)
    counts = [count_boxes(intervals, j, base) for j in exponents]
    x = np.array([j * math.log(base) for j in exponents])
    y = np.log(np.array(counts, dtype=float))
    coef, cov = np.polyfit(x, y, 1, cov=True)
    eps = tuple(float(base) ** -j for j in exponents)
    out = BoxCount(float(coef[0]), float(math.sqrt(cov[0, 0])), eps, tuple(counts))
    if out.decades < 2:
        warnings.warn(f"box-counting window spans only {out.decades:.2f} decades", stacklevel=2)
    return out


def default_exponents(intervals: Sequence[tuple[Fraction, Fraction]], base: int = 2) -> list[int]:
    """Grid exponents from a tenth of the hull down to the largest cover interval."""
    lo = min(a for a, _ in intervals)
    hi = max(b for _, b in intervals)
    widest = max(b - a for a, b in intervals)
    j0 = math.ceil(math.log(10 / float(hi - lo), base))
    j1 = math.floor(math.log(1 / float(widest), base))
    return list(range(j0, j1 + 1))


def boxcount_estimate(params: SystemParams, P: ProbVector, n_rank: int,
                      exponents: Sequence[int] | None = None, cap: int = 10**6) -> BoxCount:
    from .moran import build_cover

    cover = build_cover(params, P, n_rank, cap)
    intervals = [(iv.lo, iv.hi) for _, iv in cover.intervals]
    if exponents is None:
        exponents = default_exponents(intervals)
    return boxcount_intervals(intervals, exponents)
