"""Deterministic invariant suite behind ``negamoran verify``.

Every check takes a :class:`Context` and returns ``(ok, detail)``.  Random
samples come from one ``random.Random(seed)`` per check, so a report depends
only on the configuration and the seed.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import cylinders as cyl
from .digits import (BlockSeq, DigitSeq, SystemParams, complement_even, complement_odd,
                     contract_blocks, expand_blocks)
from .dimension import (TransferMatrix, alpha_k_product, dim_theorem5, dim_theorem7,
                        dimension_trace, hypothesis_flags, parity_counts)
from .moran import build_cover, measure_by_parity, measure_sequence, set_extrema, step_sums
from .numeral import eval_nega_s_adic, eval_s_adic, nega_to_s_identity_check, nega_to_s_shift_check
from .salem import (F_ddot_argument, F_tilde_argument, ProbVector, eval_F_ddot, eval_F_tilde,
                    eval_f_zeta, eval_negP, eval_P, negP_series, negP_tail_bound, nega_p_dual_pair,
                    p_dual_pair)
from .tailsets import extremal_word, tail_extrema

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class Context:
    params: SystemParams
    P: ProbVector
    seed: int
    samples: int = 200

    def rng(self, name: str) -> random.Random:
        return random.Random(f"{self.seed}:{name}")


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


# -- samplers (also used by the tests) ------------------------------------

def random_word(rng: random.Random, s: int, max_prefix: int = 6, max_period: int = 4,
                finite: bool = False) -> DigitSeq:
    prefix = tuple(rng.randrange(s) for _ in range(rng.randint(0, max_prefix)))
    if finite:
        return DigitSeq(prefix)
    period = tuple(rng.randrange(s) for _ in range(rng.randint(0, max_period)))
    return DigitSeq(prefix, period)


def random_blocks(rng: random.Random, params: SystemParams, max_prefix: int = 4,
                  max_period: int = 3, finite: bool = False) -> BlockSeq:
    A = params.Abar
    prefix = tuple(rng.choice(A) for _ in range(rng.randint(0, max_prefix)))
    if finite:
        return BlockSeq(prefix)
    return BlockSeq(prefix, tuple(rng.choice(A) for _ in range(rng.randint(1, max_period))))


def random_prob_vector(rng: random.Random, s: int, den: int = 60) -> ProbVector:
    cuts = sorted(rng.sample(range(1, den), s - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return ProbVector(tuple(Fraction(x, den) for x in parts))


def _bases(params: SystemParams, max_rank: int):
    for n in range(max_rank + 1):
        yield from itertools.product(params.Abar, repeat=n)


def _rank_limit(params: SystemParams, budget: int = 400) -> int:
    n = 0
    while params.branching ** (n + 1) <= budget and n < 3:
        n += 1
    return n


# -- core digits ----------------------------------------------------------

def check_block_roundtrip(ctx):
    rng = ctx.rng("roundtrip")
    for _ in range(ctx.samples):
        b = random_blocks(rng, ctx.params, finite=rng.random() < 0.3)
        back = contract_blocks(ctx.params, expand_blocks(ctx.params, b))
        if back.canonical() != b.canonical():
            return False, f"{b} -> {back}"
    return True, f"{ctx.samples} block words"


def check_expansion_shape(ctx):
    rng = ctx.rng("shape")
    s, u = ctx.params.s, ctx.params.u
    for _ in range(ctx.samples):
        b = random_blocks(rng, ctx.params)
        d = expand_blocks(ctx.params, b)
        blocks = b.prefix + b.period
        pos, word = 0, d.prefix + d.period
        for a in blocks:
            pos += a
            last = word[pos - 1]
            if last in (0, u) or a - 1 >= s - 1:
                return False, f"bad block {a} in {b}"
    return True, "terminal digits avoid 0 and u; runs shorter than s-1"


def check_complement_involution(ctx):
    rng = ctx.rng("involution")
    s = ctx.params.s
    for _ in range(ctx.samples):
        d = random_word(rng, s).aligned()
        for f in (complement_even, complement_odd):
            if f(s, f(s, d)).canonical() != d.canonical():
                return False, f"{f.__name__} on {d}"
    return True, "complement_even and complement_odd are involutions"


# -- numeral --------------------------------------------------------------

def check_nega_identities(ctx):
    rng = ctx.rng("nega")
    s = ctx.params.s
    lo, hi = Fraction(-s, s + 1), Fraction(1, s + 1)
    for _ in range(ctx.samples):
        d = random_word(rng, s)
        a, b = nega_to_s_identity_check(s, d)
        c, e = nega_to_s_shift_check(s, d)
        if a != b or c != e or not lo <= a <= hi:
            return False, f"word {d}"
    if eval_s_adic(s, DigitSeq((), (s - 1,))) != 1:
        return False, "(s-1) periodic is not 1"
    return True, f"{ctx.samples} words, both forms exact, range ok"


def check_s_adic_monotone(ctx):
    rng = ctx.rng("monotone")
    s = ctx.params.s
    words = sorted({random_word(rng, s, max_prefix=7, finite=True).prefix for _ in range(ctx.samples)})
    vals = [eval_s_adic(s, DigitSeq(w)) for w in words]
    ok = all(a <= b for a, b in zip(vals, vals[1:]))
    return ok, f"{len(words)} terminating words in lexicographic order"


# -- salem ----------------------------------------------------------------

def check_negP_complement(ctx):
    rng = ctx.rng("negP")
    for _ in range(ctx.samples):
        # complement_even is a string map, so spell out the zero tail first
        d = random_word(rng, ctx.params.s).explicit()
        if eval_negP(ctx.params, ctx.P, d) != eval_P(ctx.params, ctx.P, complement_even(ctx.params, d)):
            return False, f"word {d}"
    return True, f"{ctx.samples} words exact"


def check_negP_series(ctx, n_terms: int = 60):
    rng = ctx.rng("series")
    worst = Fraction(0)
    for _ in range(ctx.samples // 4):
        d = random_word(rng, ctx.params.s)
        err = abs(eval_negP(ctx.params, ctx.P, d) - negP_series(ctx.P, d, n_terms))
        bound = negP_tail_bound(ctx.P, d, n_terms)
        if err > bound:
            return False, f"word {d}: error {float(err):.3e} > bound {float(bound):.3e}"
        if bound:
            worst = max(worst, err / bound)
    return True, f"{n_terms}-term sums within tail bound (worst ratio {float(worst):.3f})"


def check_beta_table(ctx):
    P = ctx.P
    ok = P.beta[0] == 0 and all(P.beta[k] + P.p[k] == P.beta[k + 1] for k in range(P.s - 1))
    ok = ok and P.beta[-1] + P.p[-1] == 1
    return ok, "beta_0 = 0, beta_k + p_k = beta_{k+1}, beta_{s-1} + p_{s-1} = 1"


def check_uniform_degeneration(ctx):
    rng = ctx.rng("uniform")
    s = ctx.params.s
    U = ProbVector.uniform(s)
    for _ in range(ctx.samples):
        d = random_word(rng, s)
        x = eval_s_adic(s, d)
        if eval_P(ctx.params, U, d) != x or eval_f_zeta(ctx.params, U, d) != x:
            return False, f"word {d}"
    return True, "uniform P gives the s-adic value"


def check_salem_monotone(ctx, n_words: int = 2000):
    rng = ctx.rng("salem")
    s = ctx.params.s
    seen = set()
    while len(seen) < n_words:
        seen.add(tuple(rng.randrange(s) for _ in range(rng.randint(1, 8))))
    words = [DigitSeq(w) for w in sorted(seen)]
    for name, f, arg in (("F~", eval_F_tilde, F_tilde_argument), ("F..", eval_F_ddot, F_ddot_argument)):
        pts = sorted((arg(ctx.params, w), f(ctx.params, ctx.P, w)) for w in words)
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if (x1 > x0 and not y1 > y0) or (x1 == x0 and y1 != y0):
                return False, f"{name} not increasing at x = {x1}"
    return True, f"{n_words} terminating words, F~ and F.. strictly increasing in their argument"


def check_dual_pairs(ctx):
    rng = ctx.rng("dual")
    s = ctx.params.s
    for _ in range(ctx.samples):
        head = [rng.randrange(s) for _ in range(rng.randint(0, 5))] + [rng.randrange(1, s)]
        w1, w2 = p_dual_pair(s, head)
        n1, n2 = nega_p_dual_pair(s, head)
        if eval_P(ctx.params, ctx.P, w1) != eval_P(ctx.params, ctx.P, w2):
            return False, f"P pair at {head}"
        if eval_F_tilde(ctx.params, ctx.P, complement_even(s, w1)) != eval_F_tilde(ctx.params, ctx.P, complement_even(s, w2)):
            return False, f"F~ on P pair at {head}"
        if eval_F_ddot(ctx.params, ctx.P, complement_odd(s, w1)) != eval_F_ddot(ctx.params, ctx.P, complement_odd(s, w2)):
            return False, f"F.. on P pair at {head}"
        if eval_F_tilde(ctx.params, ctx.P, n1) != eval_F_tilde(ctx.params, ctx.P, n2):
            return False, f"F~ on nega-P pair at {head}"
    return True, f"{ctx.samples} heads, all pairs equal"


# -- cylinders ------------------------------------------------------------

def check_unrestricted_cylinders(ctx, max_rank: int = 3):
    params, P = ctx.params, ctx.P
    max_p = max(P.p)
    for n in range(max_rank):
        for base in itertools.product(params.A, repeat=n):
            for system, interval in (("P", cyl.cyl_interval_P), ("negP", cyl.cyl_interval_negP)):
                parent = interval(params, P, base)
                kids = sorted((interval(params, P, base + (c,)) for c in params.A), key=lambda iv: iv.lo)
                if kids[0].lo != parent.lo or kids[-1].hi != parent.hi:
                    return False, f"{system} children of {base} do not span the parent"
                if any(a.hi != b.lo for a, b in zip(kids, kids[1:])):
                    return False, f"{system} children of {base} do not tile"
            for c in range(params.s - 1):
                for system in ("P", "negP"):
                    if not cyl.adjacency_check(params, P, base, c, system):
                        return False, f"{system} adjacency at {base}+{c}"
            d = cyl.cyl_interval_negP(params, P, base).diameter
            if d != cyl.negP_diameter_product(P, base) or d > max_p ** n:
                return False, f"negP diameter law at {base}"
    return True, f"ranks < {max_rank}: tiling, adjacency, diameter product"


def check_restricted_formulas(ctx):
    params, P = ctx.params, ctx.P
    n_max = _rank_limit(params)
    count = 0
    for base in _bases(params, n_max):
        iv = cyl.cyl_interval_S(params, P, base)
        if iv != cyl.cyl_interval_S_by_words(params, P, base):
            return False, f"formula vs words at {base}"
        if len(base) < n_max:
            for c in params.Abar:
                child = cyl.cyl_interval_S(params, P, base + (c,))
                if not iv.contains(child):
                    return False, f"nesting at {base}+{c}"
                ratio = cyl.child_ratio(params, P, base, c)
                if ratio * iv.diameter != child.diameter:
                    return False, f"child ratio at {base}+{c}"
                if ratio != cyl.child_ratio_closed_form(params, P, sum(base) % 2, c):
                    return False, f"closed-form ratio at {base}+{c}"
        count += 1
    return True, f"{count} cylinders up to rank {n_max}: endpoints, nesting, ratios"


def check_positive_set_nesting(ctx):
    params, P = ctx.params, ctx.P
    n_max = min(_rank_limit(params), 2)
    for base in _bases(params, n_max - 1):
        iv = cyl.cyl_interval_SPu(params, P, base)
        for c in params.Abar:
            if not iv.contains(cyl.cyl_interval_SPu(params, P, base + (c,))):
                return False, f"nesting at {base}+{c}"
    return True, f"S(P,u) cylinders nested up to rank {n_max}"


def check_separation(ctx):
    params, P = ctx.params, ctx.P
    n_max = min(_rank_limit(params), 2)
    pairs = [c for c in params.Abar if c + 1 in params.Abar]
    n = 0
    for base in _bases(params, n_max - 1):
        for c in pairs:
            rep = cyl.separation_check(params, P, base, c)
            if not rep.ok:
                return False, f"{base}+{c}: predicted {rep.predicted_left}, got {rep.actual_left}, gap {rep.gap}"
            n += 1
        kids = sorted((cyl.cyl_interval_S(params, P, base + (c,)) for c in params.Abar), key=lambda iv: iv.lo)
        if any(b.lo - a.hi <= 0 for a, b in zip(kids, kids[1:])):
            return False, f"siblings of {base} not separated"
    return True, f"{n} sibling pairs on the predicted side, all gaps > 0"


# -- moran ----------------------------------------------------------------

def check_covers(ctx):
    params, P = ctx.params, ctx.P
    n_max = max(_rank_limit(params, 2000), 1)
    prev = build_cover(params, P, 0)
    for n in range(1, n_max + 1):
        cur = build_cover(params, P, n)
        if not cur.is_disjoint():
            return False, f"rank {n} overlaps"
        parents = [iv for _, iv in prev.intervals]
        for base, iv in cur.intervals:
            if not any(p.contains(iv) for p in parents):
                return False, f"rank {n} interval {base} escapes rank {n - 1}"
        if cur.total_length != measure_by_parity(params, P, n):
            return False, f"parity-class measure differs at rank {n}"
        prev = cur
    return True, f"covers disjoint and nested up to rank {n_max}"


def check_measure(ctx):
    params, P = ctx.params, ctx.P
    n_max = 6 if params.branching ** 6 <= 20000 else 4
    V = max(step_sums(params, P))
    rows = measure_sequence(params, P, n_max)
    ok = V < 1 and all(a.measure > b.measure for a, b in zip(rows, rows[1:]))
    ok = ok and all(r.measure <= r.bound for r in rows)
    return ok, f"V = {float(V):.6g}; lambda(S_n) decreasing and bounded for n <= {n_max}"


def check_nega_s_image(ctx):
    params = ctx.params
    s = params.s
    U = ProbVector.uniform(s)
    shift = Fraction(1, s + 1)
    n_max = min(_rank_limit(params), 2)
    for n in range(n_max + 1):
        for base, iv in build_cover(params, U, n).intervals:
            words = cyl.extremal_words_S(params, U, base)
            vals = sorted(eval_nega_s_adic(s, w) for w in words)
            if (vals[0], vals[1]) != (shift - iv.hi, shift - iv.lo):
                return False, f"rank {n} base {base}"
    return True, f"uniform covers map onto S(-s,u) cylinders up to rank {n_max}"


def check_extrema(ctx):
    params, P = ctx.params, ctx.P
    T = tail_extrema(params, P)
    for t in (0, 1):
        lo_w = extremal_word(params, T.lo_policy, t)
        hi_w = extremal_word(params, T.hi_policy, t)
        if eval_P(params, P, lo_w) != T.lo[t] or eval_P(params, P, hi_w) != T.hi[t]:
            return False, f"extremal words miss the solver values in state {t}"
    hull = build_cover(params, P, 0).intervals[0][1]
    e = set_extrema(params, P, "SnegPu")
    if (e.lo, e.hi) != (hull.lo, hull.hi):
        return False, "set extrema differ from the rank-0 hull"
    # every point of a rank-2 cover must stay inside the tail-set hull
    for _, iv in build_cover(params, P, min(2, _rank_limit(params))).intervals:
        if not hull.contains(iv):
            return False, "cover escapes the hull"
    return True, "solver words attain inf/sup; hull matches rank-0 cover"


def table_agreement(ctx) -> str:
    parts = []
    for which in ("SPu_over", "SPu_under", "Sneg_s_u"):
        e = set_extrema(ctx.params, ctx.P if which != "Sneg_s_u" else ProbVector.uniform(ctx.params.s), which)
        parts.append(f"{which}={'agree' if e.table_agrees else 'differ'}")
    return " ".join(parts)


# -- dimension ------------------------------------------------------------

def _brute_parity_counts(params: SystemParams, n: int) -> dict:
    counts = {j: {c: 0 for c in params.Abar} for j in (1, 2, 3, 4)}
    for base in itertools.product(params.Abar, repeat=n - 1):
        parent = sum(base) % 2
        for c in params.Abar:
            j = {(1, 1): 1, (0, 1): 2, (1, 0): 3, (0, 0): 4}[parent, c % 2]
            counts[j][c] += 1
    return {j: {c: v for c, v in d.items() if v or (c % 2 == (1 if j in (1, 2) else 0))}
            for j, d in counts.items()}


def check_parity_counts(ctx):
    params = ctx.params
    l, m = params.l, params.m
    for n in range(1, 5):
        pc = parity_counts(params, n)
        brute = _brute_parity_counts(params, n)
        if pc.N != brute:
            return False, f"step {n} differs from enumeration"
        if pc.total(1) + pc.total(2) != l * (l + m) ** (n - 1) or pc.total(3) + pc.total(4) != m * (l + m) ** (n - 1):
            return False, f"step {n} totals"
    return True, f"l = {l}, m = {m}: counts match enumeration for n <= 4"


def check_transfer_vs_cover(ctx):
    params, P = ctx.params, ctx.P
    M = TransferMatrix(params, P)
    rng = ctx.rng("transfer")
    k_max = min(3, _rank_limit(params, 2000))
    hull = build_cover(params, P, 0).intervals[0][1].diameter
    worst = 0.0
    for k in range(1, k_max + 1):
        diam = [float(iv.diameter / hull) for _, iv in build_cover(params, P, k).intervals]
        for _ in range(5):
            a = rng.uniform(0.05, 1.0)
            brute = sum(d ** a for d in diam)
            fast = math.exp(M.log_sum(a, k))
            worst = max(worst, abs(brute - fast) / brute)
    return worst <= 1e-12, f"k <= {k_max}, relative error {worst:.2e}"


def check_dimension_solvers(ctx):
    params, P = ctx.params, ctx.P
    tr = dimension_trace(params, P, k_max=20, window=5)
    if max(tr.solver_residuals) > RESIDUAL_TOL or not all(0 < a <= 1 for a in tr.alphas):
        return False, "alpha_k residual or range"
    M = TransferMatrix(params, P)
    a = tr.alphas[-1]
    if not M.log_sum(a - 0.01, 20) > 0 > M.log_sum(a + 0.01, 20):
        return False, "S_k not decreasing around its root"
    k1 = alpha_k_product(params, P, 1)
    if abs(k1.alpha - tr.alphas[0]) > RESIDUAL_TOL or k1.residual > RESIDUAL_TOL:
        return False, "product form at k = 1"
    d5 = dim_theorem5(params)
    d7u = dim_theorem7(params, ProbVector.uniform(params.s))
    tu = dimension_trace(params, ProbVector.uniform(params.s), k_max=10, window=5)
    if abs(d5 - d7u) > RESIDUAL_TOL or max(abs(x - d5) for x in tu.alphas) > RESIDUAL_TOL:
        return False, "uniform degeneration"
    return True, f"alpha_20 = {tr.alphas[-1]:.12f}; uniform trace flat at {d5:.12f}"


def check_hypotheses(ctx):
    flags = hypothesis_flags(ctx.params, ctx.P)
    ok = flags["c_star_positive"] and flags["max_ratio_below_one"] and flags["branching"] == len(ctx.params.Abar)
    return ok, f"c_* = {flags['c_star']:.6g}, branching = {flags['branching']}"


CHECKS: list[tuple[str, Callable]] = [
    ("digits.block_roundtrip", check_block_roundtrip),
    ("digits.expansion_shape", check_expansion_shape),
    ("digits.complement_involution", check_complement_involution),
    ("numeral.nega_identities", check_nega_identities),
    ("numeral.s_adic_monotone", check_s_adic_monotone),
    ("salem.beta_table", check_beta_table),
    ("salem.negP_complement", check_negP_complement),
    ("salem.negP_series", check_negP_series),
    ("salem.uniform_degeneration", check_uniform_degeneration),
    ("salem.monotone", check_salem_monotone),
    ("salem.dual_pairs", check_dual_pairs),
    ("cylinders.unrestricted", check_unrestricted_cylinders),
    ("cylinders.restricted", check_restricted_formulas),
    ("cylinders.positive_nesting", check_positive_set_nesting),
    ("cylinders.separation", check_separation),
    ("moran.covers", check_covers),
    ("moran.measure", check_measure),
    ("moran.nega_s_image", check_nega_s_image),
    ("moran.extrema", check_extrema),
    ("dimension.parity_counts", check_parity_counts),
    ("dimension.transfer_vs_cover", check_transfer_vs_cover),
    ("dimension.solvers", check_dimension_solvers),
    ("dimension.hypotheses", check_hypotheses),
]


def run_checks(ctx: Context) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn(ctx)
        except Exception as exc:  # a crash is a failed invariant, not a crashed report
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail))
    return out


DEFAULT_CONFIGS = [
    (SystemParams(4, 0), "uniform"),
    (SystemParams(5, 2), "1/2,1/5,1/10,1/10,1/10"),
    (SystemParams(6, 5), "1/3,1/6,1/6,1/9,1/9,1/9"),
    (SystemParams(6, 2), "uniform"),
]


def report(contexts: list[Context]) -> tuple[str, bool]:
    lines, all_ok = [], True
    for ctx in contexts:
        lines.append(f"config s={ctx.params.s} u={ctx.params.u} P={ctx.P} seed={ctx.seed}")
        for r in run_checks(ctx):
            all_ok &= r.ok
            lines.append(f"  {'PASS' if r.ok else 'FAIL'}  {r.name:<32} {r.detail}")
        lines.append(f"  INFO  {'tables.tabulated_words':<32} {table_agreement(ctx)}")
    lines.append(f"overall: {'PASS' if all_ok else 'FAIL'}")
    return "\n".join(lines) + "\n", all_ok
