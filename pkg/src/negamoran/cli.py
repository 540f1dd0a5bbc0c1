"""Command-line interface.

    negamoran eval --system negP --digits "20(1)" --P 1/2,1/4,1/8,1/8
    negamoran cover --s 5 --u 2 --n 3 --format csv
    negamoran dimension --s 4 --u 0 --k-max 40
    negamoran verify --seed 7

Exit codes: 0 ok, 1 invariant failure, 2 usage or validation error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import cylinders as cyl
from .digits import (BlockSeq, DigitError, DigitSeq, SystemParams, complement_even, complement_odd,
                     contract_blocks, expand_blocks, format_word, parse_word)
from .dimension import (SolverError, alpha_k_product, boxcount_estimate, dim_theorem5, dim_theorem7,
                        dimension_trace)
from .formatting import DEFAULT_PRECISION, decimal_str, fraction_str
from .moran import DEFAULT_CAP, CapExceeded, build_cover, measure_sequence, step_sums
from .numeral import eval_nega_s_adic, eval_s_adic
from .salem import (ProbVector, ProbVectorError, eval_F_ddot, eval_F_tilde, eval_f_zeta, eval_negP,
                    eval_P, extract_P_digits, parse_prob_vector)
from .verify import DEFAULT_CONFIGS, Context, report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

EVALUATORS = {
    "s": lambda params, P, d: eval_s_adic(params, d),
    "negs": lambda params, P, d: eval_nega_s_adic(params, d),
    "P": eval_P,
    "negP": eval_negP,
    "Ftilde": eval_F_tilde,
    "Fddot": eval_F_ddot,
    "fzeta": eval_f_zeta,
}


class UsageError(Exception):
    pass


# -- output ---------------------------------------------------------------

def _emit(data, fmt: str, out, rows_key: str | None = None) -> None:
    if fmt == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    elif fmt == "csv":
        rows = data[rows_key] if rows_key else [data]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
        out.write(buf.getvalue())
    else:
        for key, value in data.items():
            if key == rows_key:
                for row in value:
                    out.write("  " + "  ".join(f"{k}={v}" for k, v in row.items()) + "\n")
            else:
                out.write(f"{key}: {value}\n")


def _num(x: Fraction, precision: int) -> dict:
    return {"exact": fraction_str(x), "decimal": decimal_str(x, precision)}


def _config(args, need_P: bool = True) -> tuple[SystemParams, ProbVector | None]:
    params = SystemParams(args.s, args.u)
    P = parse_prob_vector(args.P, params.s).check(params) if need_P else None
    return params, P


def _header(params: SystemParams, P: ProbVector | None) -> dict:
    out = {"s": params.s, "u": params.u}
    if P is not None:
        out["P"] = [fraction_str(x) for x in P.p]
    return out


# -- subcommands ----------------------------------------------------------

def cmd_eval(args, out) -> int:
    params, P = _config(args)
    d = parse_word(args.digits).validate(params.s)
    value = EVALUATORS[args.system](params, P, d)
    data = {**_header(params, P), "system": args.system, "digits": format_word(d, params.s),
            **_num(value, args.precision)}
    _emit(data, args.format, out)
    return EXIT_OK


def cmd_convert(args, out) -> int:
    params, P = _config(args)
    data = {**_header(params, P), "to": args.to}
    if args.to in ("P-digits", "s-digits"):
        if args.x is None:
            raise UsageError(f"--to {args.to} needs --x")
        Q = P if args.to == "P-digits" else ProbVector.uniform(params.s)
        data.update(x=fraction_str(Fraction(args.x)),
                    digits=format_word(extract_P_digits(params, Q, Fraction(args.x), args.n), params.s))
    else:
        if args.digits is None:
            raise UsageError(f"--to {args.to} needs --digits")
        d = parse_word(args.digits).validate(params.s)
        if args.to == "complement-even":
            result = format_word(complement_even(params, d), params.s)
        elif args.to == "complement-odd":
            result = format_word(complement_odd(params, d), params.s)
        elif args.to == "blocks":
            b = contract_blocks(params, d)
            result = format_word(DigitSeq(b.prefix, b.period))
        else:  # expand: the word is read as block values
            result = format_word(expand_blocks(params, BlockSeq(d.prefix, d.period)), params.s)
        data.update(digits=format_word(d, params.s), result=result)
    _emit(data, args.format, out)
    return EXIT_OK


def cmd_cylinder(args, out) -> int:
    params, P = _config(args)
    base = tuple(int(x) for x in args.base.split(",")) if args.base.strip() else ()
    c = cyl.Cylinder(args.system, base, params, P)
    iv = c.interval()
    data = {**_header(params, P), "system": args.system, "base": list(base),
            "lo": _num(iv.lo, args.precision), "hi": _num(iv.hi, args.precision),
            "diameter": _num(iv.diameter, args.precision)}
    if args.system == "SnegPu":
        data["tail_state"] = cyl.tail_state(base)
        data["weight"] = fraction_str(cyl.cylinder_weight(params, P, base))
        data["tau"] = fraction_str(cyl.tau(params, P, base))
        data["children"] = [
            {"c": k, "ratio": fraction_str(cyl.child_ratio(params, P, base, k))} for k in params.Abar
        ]
    if args.format == "csv":
        data = {k: v["exact"] if isinstance(v, dict) else v for k, v in data.items()}
    _emit(data, args.format, out)
    return EXIT_OK


def cmd_cover(args, out) -> int:
    params, P = _config(args)
    cover = build_cover(params, P, args.n, args.cap)
    if args.format == "csv":
        out.write(cover.to_csv(args.precision))
    else:
        data = {**_header(params, P), "rank": cover.rank, "count": len(cover.intervals),
                "total_length": fraction_str(cover.total_length),
                "intervals": cover.to_rows(args.precision)}
        _emit(data, args.format, out, rows_key="intervals")
    return EXIT_OK


def cmd_measure(args, out) -> int:
    params, P = _config(args)
    rows = measure_sequence(params, P, args.n, args.cap)
    V = max(step_sums(params, P))
    table = [{"n": r.n,
              "measure": fraction_str(r.measure), "measure_decimal": decimal_str(r.measure, args.precision),
              "bound": fraction_str(r.bound), "bound_decimal": decimal_str(r.bound, args.precision)}
             for r in rows]
    decreasing = all(a.measure > b.measure for a, b in zip(rows, rows[1:]))
    dominated = all(r.measure <= r.bound for r in rows)
    data = {**_header(params, P), "V": fraction_str(V), "V_decimal": decimal_str(V, args.precision),
            "decreasing": decreasing, "dominated": dominated, "rows": table}
    _emit(data, args.format, out, rows_key="rows")
    return EXIT_OK if decreasing and dominated and V < 1 else EXIT_FAIL


def cmd_dimension(args, out) -> int:
    params, P = _config(args)
    tr = dimension_trace(params, P, args.k_max, args.window)
    data = {
        "params": {"s": params.s, "u": params.u},
        "P": [fraction_str(x) for x in P.p],
        "method": "transfer",
        "alpha_k": tr.alphas,
        "liminf": tr.liminf_est,
        "limsup": tr.limsup_est,
        "residuals": tr.solver_residuals,
        "hypothesis_flags": tr.hypothesis_flags,
        "window": tr.window,
        "spectral_limit": tr.limit,
        "dim_uniform": dim_theorem5(params),
        "dim_positive_set": dim_theorem7(params, P),
    }
    product = []
    for k in range(1, min(args.k_max, args.product_k) + 1):
        try:
            r = alpha_k_product(params, P, k)
            product.append({"k": k, "alpha": r.alpha, "in_unit_interval": r.in_unit_interval})
        except SolverError as exc:
            product.append({"k": k, "alpha": None, "error": str(exc)})
    data["alpha_k_product"] = product
    if args.boxcount_rank:
        bc = boxcount_estimate(params, P, args.boxcount_rank, cap=args.cap)
        data["boxcount"] = {"rank": args.boxcount_rank, "slope": bc.slope, "stderr": bc.stderr,
                            "decades": bc.decades}
    if args.format == "csv":
        rows = [{"k": k, "alpha_k": a, "residual": r}
                for k, (a, r) in enumerate(zip(tr.alphas, tr.solver_residuals), start=1)]
        _emit({"rows": rows}, "csv", out, rows_key="rows")
    else:
        _emit(data, args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.s is None:
        contexts = [Context(p, parse_prob_vector(text, p.s), args.seed, args.samples) for p, text in DEFAULT_CONFIGS]
    else:
        params, P = _config(args)
        contexts = [Context(params, P, args.seed, args.samples)]
    text, ok = report(contexts)
    out.write(text)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s", type=int, default=None, help="base s >= 4 (default 4; verify: shipped configs)")
    common.add_argument("--u", type=int, default=0, help="run digit u in [0, s-1]")
    common.add_argument("--P", default="uniform", help='"uniform" or rationals like "1/2,1/4,1/8,1/8"')
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="significant decimal digits")
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum number of enumerated cylinders")

    parser = argparse.ArgumentParser(prog="negamoran", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a digit word")
    p.add_argument("--system", choices=sorted(EVALUATORS), required=True)
    p.add_argument("--digits", required=True, help='word such as "113(12)"')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("convert", parents=[common], help="complement, block or digit conversions")
    p.add_argument("--to", required=True,
                   choices=("complement-even", "complement-odd", "blocks", "expand", "P-digits", "s-digits"))
    p.add_argument("--digits")
    p.add_argument("--x", help="rational in [0, 1] for P-digits / s-digits")
    p.add_argument("--n", type=int, default=20, help="number of digits to extract")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("cylinder", parents=[common], help="cylinder interval")
    p.add_argument("--system", choices=cyl.SYSTEMS, default="SnegPu")
    p.add_argument("--base", default="", help='comma-separated base, e.g. "1,3"')
    p.set_defaults(func=cmd_cylinder)

    p = sub.add_parser("cover", parents=[common], help="rank-n cover of S(-P,u)")
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("measure", parents=[common], help="Lebesgue measure of the rank-n covers")
    p.add_argument("--n", type=int, default=6)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("dimension", parents=[common], help="dimension formulas and alpha_k trace")
    p.add_argument("--k-max", type=int, default=40)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--product-k", type=int, default=5, help="k range for the count-weighted product form")
    p.add_argument("--boxcount-rank", type=int, default=0, help="also box-count a cover of this rank")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.s is None and args.command != "verify":
        args.s = 4
    try:
        return args.func(args, out)
    except (DigitError, ProbVectorError, CapExceeded, UsageError, SolverError, ValueError) as exc:
        sys.stderr.write(f"negamoran {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
