"""``bddlat`` command line.

Exit codes: 0 ok/pass, 1 verified NO or failed check, 2 usage or I/O error,
3 parameter-constraint violation.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction

from . import numerics
from .exact import INF, Magnitude, p_to_str, parse_p, parse_rational
from .instances import GapCvpInstance, InstanceFormatError, dumps, load
from .lattice import CLOSED, OPEN, BallQuery, Basis, count_points
from .reductions import ParameterError, full_pipeline, make_params
from .sparsify import RANDOM, SMALLEST

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_PARAM = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _p_arg(text):
    try:
        return parse_p(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _C_arg(text):
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    try:
        c = parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if c < 1:
        raise argparse.ArgumentTypeError("C must be >= 1")
    return c


def _rational_arg(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt(x):
    return f"{x:.10g}"


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_alpha(args):
    p = args.p
    if p == INF:
        raise UsageError("alpha*_{p,C} is defined for finite p")
    try:
        res = numerics.alpha_star(float(p), float(args.C), tol=args.tol)
    except numerics.DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    out = {"p": p_to_str(p), "C": "inf" if args.C == INF else str(args.C)}
    out.update(res.as_dict())
    print(json.dumps(out, indent=2))
    return EXIT_OK


def curve_rows(p_min, p_max, step, Cs, tol=numerics.DEFAULT_TOL):
    """Grid rows (p, C, alpha*, closed-form bound, alternative bound or None)."""
    rows = []
    k = 0
    while True:
        p = p_min + k * step
        if p > p_max + 1e-9:
            break
        p = round(p, 10)
        for C in Cs:
            a = numerics.alpha_star(p, float(C), tol=tol).value
            ub = numerics.alpha_upper_bound(p, float(C))
            try:
                alt = numerics.alt_upper_bound(p, float(C))
            except numerics.DomainError:
                alt = None
            rows.append((p, C, a, ub, alt))
        k += 1
    return rows


def cmd_curve(args):
    if args.p_min < 1 or args.p_max < args.p_min or args.step <= 0:
        raise UsageError("need 1 <= p-min <= p-max and step > 0")
    Cs = args.C or [Fraction(2), INF]
    rows = curve_rows(args.p_min, args.p_max, args.step, Cs, args.tol)
    if args.out not in (None, "-"):
        try:
            fh = open(args.out, "w", newline="")
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from None
    else:
        fh = sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "C", "alpha_star", "upper_bound", "alt_upper_bound"])
        for p, C, a, ub, alt in rows:
            w.writerow([_fmt(p), "inf" if C == INF else str(C), _fmt(a), _fmt(ub),
                        "n/a" if alt is None else _fmt(alt)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_reduce(args):
    try:
        inst = load(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    except InstanceFormatError as exc:
        raise UsageError(str(exc)) from None
    if not isinstance(inst, GapCvpInstance):
        raise UsageError("reduce expects an instance of kind 'gapcvp'")
    C = args.C
    if C is None:
        C = Fraction(1) if inst.p == INF else None
    params = make_params(inst.p, inst.basis.n, C=C, alpha=args.alpha,
                         policy=args.policy, seed=args.seed)
    bdd, trace = full_pipeline(inst, params)
    _write_text(args.out, dumps(bdd))
    if args.trace:
        _write_text(args.trace, json.dumps(trace, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args):
    from . import suites

    report = suites.run(args.suite, trials=args.trials, seed=args.seed)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    _write_text(args.out, text)
    return EXIT_OK if report["passed"] else EXIT_NO


def cmd_count(args):
    p = args.p
    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    if args.r_pth is not None:
        if p == INF:
            raise UsageError("--r-pth needs finite p")
        radius = Magnitude.from_pth_power(args.r_pth, p)
    elif args.r is not None:
        radius = Magnitude.rational(args.r, p)
    else:
        raise UsageError("give --r or --r-pth")
    if args.r is not None and args.r < 0:
        raise UsageError("radius must be non-negative")
    half = Fraction(1, 2)
    center = (half,) * n if args.center == "half" else (Fraction(0),) * n
    query = BallQuery(p, radius, center, OPEN if args.open else CLOSED)
    exact = count_points(Basis.identity(n), query, exclude_zero=args.open and args.center == "origin")
    out = {
        "lattice": f"Z^{n}",
        "p": p_to_str(p),
        "radius": float(radius),
        "radius_exact": radius.to_json() if p != INF else str(radius.as_rational()),
        "center": args.center,
        "open": args.open,
        "count": exact,
    }
    if args.center == "origin":
        if p == INF:
            rq = radius.as_rational()
            side = 2 * math.floor(rq) + 1
            out["bound"] = side**n
        else:
            out["bound"] = numerics.mo_bound(float(p), float(radius), n)
    print(json.dumps(out, indent=2))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser():
    ap = _Parser(prog="bddlat", description="BDD hardness constants, reductions and checks.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("alpha", help="compute alpha*_{p,C}")
    a.add_argument("--p", type=_p_arg, required=True)
    a.add_argument("--C", type=_C_arg, default=INF)
    a.add_argument("--tol", type=float, default=numerics.DEFAULT_TOL)
    a.set_defaults(func=cmd_alpha)

    c = sub.add_parser("curve", help="CSV of alpha*_{p,C} and its upper bounds")
    c.add_argument("--p-min", type=float, default=1.1)
    c.add_argument("--p-max", type=float, default=10.0)
    c.add_argument("--step", type=float, default=0.05)
    c.add_argument("--C", type=_C_arg, nargs="+")
    c.add_argument("--tol", type=float, default=numerics.DEFAULT_TOL)
    c.add_argument("--out")
    c.set_defaults(func=cmd_curve)

    r = sub.add_parser("reduce", help="GapCVP' instance file -> BDD instance file")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--C", type=_rational_arg)
    r.add_argument("--alpha", default="auto")
    r.add_argument("--policy", choices=[SMALLEST, RANDOM], default=SMALLEST)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.add_argument("--trace")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=["mo", "sparsify", "pipeline", "all"], default="all")
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("count", help="exact lattice-point count in Z^n")
    k.add_argument("--lattice", choices=["zn"], default="zn")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--p", type=_p_arg, required=True)
    k.add_argument("--r", type=_rational_arg)
    k.add_argument("--r-pth", type=_rational_arg, help="radius given by its p-th power")
    k.add_argument("--center", choices=["origin", "half"], default="origin")
    k.add_argument("--open", action="store_true",
                   help="strict inequality; at the origin also excludes 0")
    k.set_defaults(func=cmd_count)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"parameter violation: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
