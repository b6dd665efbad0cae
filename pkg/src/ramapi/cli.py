"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 numeric failure.  Every number in
JSON output is a decimal string so no digits are lost to binary floats.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .corpus import ERRATUM, FAIL, PASS, summarize, verify_all
from .moduli import modulus_record
from .mpcore import ConvergenceError, DomainError, PrecisionContext
from .piseries import compute_pi_detailed, j_invariant, series_params

DEFAULT_DIGITS = 60
MIN_DIGITS, MAX_DIGITS = 15, 10**6
ENV_PRECISION = "RAMAPI_PRECISION"

# r values of the alpha table
TABLE_R = tuple(range(1, 38)) + (40, 44, 49, 59)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _digits(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"digits must be an integer, got {text!r}") from None
    if not MIN_DIGITS <= d <= MAX_DIGITS:
        raise argparse.ArgumentTypeError(f"digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}]")
    return d


def _rational(text: str) -> Fraction:
    try:
        r = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if r <= 0:
        raise argparse.ArgumentTypeError("r must be positive")
    return r


def _rational_list(text: str) -> list:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _default_digits() -> int:
    raw = os.environ.get(ENV_PRECISION)
    if raw is None:
        return DEFAULT_DIGITS
    try:
        return _digits(raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{ENV_PRECISION}: {exc}") from None


def _fmt_r(r: Fraction) -> str:
    return str(r)


def build_parser(default_digits: int = DEFAULT_DIGITS) -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument(
        "--digits", type=_digits, default=default_digits,
        help=f"decimal digits (default {default_digits}; env {ENV_PRECISION})",
    )
    common.add_argument("--output", choices=("text", "json"), default="text")

    parser = _Parser(prog="ramapi", description="Ramanujan-type 1/pi series and singular moduli.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("pi", parents=[common], help="compute pi from the series at r")
    p.add_argument("--r", type=_rational, default=Fraction(1728), help="series parameter (default 1728)")

    p = sub.add_parser("modulus", parents=[common], help="m, k, alpha, beta and a(r) for one r")
    p.add_argument("--r", type=_rational, required=True)

    p = sub.add_parser("params", parents=[common], help="series parameters J, T for one r")
    p.add_argument("--r", type=_rational, required=True)

    p = sub.add_parser("verify", parents=[common], help="check corpus closed forms")
    p.add_argument("--filter", default=None, help="glob over entry ids, e.g. 'alpha_*'")

    p = sub.add_parser("table", parents=[common], help="moduli for a list of r")
    p.add_argument("--r", type=_rational_list, default=None, help="comma-separated list (default: alpha table)")
    return parser


def _num(x, digits: int, ctx: PrecisionContext) -> str:
    return ctx.mp.nstr(x, digits, min_fixed=-5, max_fixed=5)


def _small(x, ctx: PrecisionContext) -> str:
    return ctx.mp.nstr(x, 6)


def _emit(obj: dict, output: str, out) -> None:
    if output == "json":
        out.write(json.dumps(obj) + "\n")
    else:
        for k, v in obj.items():
            out.write(f"{k}: {v}\n")


def cmd_pi(args, out, err) -> int:
    res = compute_pi_detailed(args.r, args.digits)
    ref_ctx = PrecisionContext(args.digits + 10)
    error = abs(res.value - ref_ctx.pi)
    ok = error < ref_ctx.mp.mpf(10) ** (-args.digits)
    digits_str = ref_ctx.mp.nstr(res.value, args.digits + 1, strip_zeros=False)
    err.write(f"terms: {res.n_terms}\n")
    if args.output == "json":
        _emit(
            {
                "command": "pi",
                "r": _fmt_r(args.r),
                "precision": args.digits,
                "terms": res.n_terms,
                "working_digits": res.working_digits,
                "value": digits_str,
                "abs_error": _small(error, ref_ctx),
                "check": "pass" if ok else "fail",
            },
            "json",
            out,
        )
    else:
        out.write(digits_str + "\n")
    if not ok:
        err.write(f"self-check against AGM pi failed: |error| = {_small(error, ref_ctx)}\n")
        return EXIT_NUMERIC
    return EXIT_OK


def _record_dict(r: Fraction, digits: int) -> dict:
    ctx = PrecisionContext(digits)
    rec = modulus_record(r, ctx)
    out = {"r": _fmt_r(r), "precision": digits}
    for name in ("m", "k", "alpha", "beta", "a_elliptic"):
        out[name] = _num(getattr(rec, name), digits, ctx)
    out["residuals"] = {k: _small(v, ctx) for k, v in rec.residuals(ctx).items()}
    out["provenance"] = dict(rec.provenance)
    return out


def cmd_modulus(args, out, err) -> int:
    _emit(_record_dict(args.r, args.digits), args.output, out)
    return EXIT_OK


def cmd_params(args, out, err) -> int:
    ctx = PrecisionContext(args.digits)
    p = series_params(args.r, ctx)
    beta = (1 - ctx.mp.sqrt(1 - p.J)) / 2
    _emit(
        {
            "r": _fmt_r(args.r),
            "precision": args.digits,
            "J": _num(p.J, args.digits, ctx),
            "T": _num(p.T, args.digits, ctx),
            "lhs": _num(p.lhs, args.digits, ctx),
            "digits_per_term": _num(p.digits_per_term, 12, ctx),
            "j": _num(j_invariant(beta, ctx), args.digits, ctx),
        },
        args.output,
        out,
    )
    return EXIT_OK


def cmd_verify(args, out, err) -> int:
    ctx = PrecisionContext(args.digits)
    reports = verify_all(ctx, args.filter)
    if not reports:
        raise UsageError(f"no corpus entries match {args.filter!r}")
    for rep in reports:
        if args.output == "json":
            out.write(json.dumps(rep.to_json(ctx)) + "\n")
        else:
            res = "-" if rep.rel_residual is None else _small(rep.rel_residual, ctx)
            out.write(f"{rep.id:24s} {rep.status:24s} rel={res}\n")
    counts = summarize(reports)
    if args.output == "json":
        out.write(json.dumps({"summary": counts, "precision": args.digits}) + "\n")
    else:
        out.write(
            f"{counts['total']} entries: {counts[PASS]} pass, {counts[ERRATUM]} known errata, "
            f"{counts[FAIL]} unexpected failures\n"
        )
    return EXIT_NUMERIC if counts[FAIL] else EXIT_OK


def cmd_table(args, out, err) -> int:
    rs = args.r or [Fraction(r) for r in TABLE_R]
    rows = [_record_dict(r, args.digits) for r in rs]
    if args.output == "json":
        for row in rows:
            out.write(json.dumps(row) + "\n")
        return EXIT_OK
    width = min(args.digits, 30) + 8
    out.write(f"{'r':>6}  {'alpha':<{width}} {'m':<{width}}\n")
    for row in rows:
        ctx = PrecisionContext(args.digits)
        alpha = _num(ctx.mp.mpf(row["alpha"]), min(args.digits, 30), ctx)
        m = _num(ctx.mp.mpf(row["m"]), min(args.digits, 30), ctx)
        out.write(f"{row['r']:>6}  {alpha:<{width}} {m:<{width}}\n")
    return EXIT_OK


COMMANDS = {
    "pi": cmd_pi,
    "modulus": cmd_modulus,
    "params": cmd_params,
    "verify": cmd_verify,
    "table": cmd_table,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser(_default_digits()).parse_args(argv)
        return COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (DomainError, ConvergenceError, ArithmeticError) as exc:
        err.write(f"numeric failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
