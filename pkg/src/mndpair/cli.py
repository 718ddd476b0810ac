"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 computation error, 4 a check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from fractions import Fraction
from typing import Callable, Sequence

from . import __version__
from .core.rational import parse_rational
from .oracles.closed_forms import svol_value, thaddeus_value
from .oracles.lattice import SZENES_FUNCTIONS, LatticeSumConfig, szenes_check, witten_sum
from .pairing import PairingError, PairingSpec, pair, pairing_a
from .report import check, dumps, note, text_table
from .residue import ResidueError
from .verlinde import VerlindeError, VerlindeSpec, verlinde_check

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_COMPUTE = 3
EXIT_CHECK = 4


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# flag parsing


def _exponent(text: str) -> tuple[int, int]:
    try:
        r, m = text.split("=")
        return int(r), int(m)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected r=m, got {text!r}") from None


def _b_class(text: str) -> tuple[int, int]:
    try:
        r, j = text.split(":")
        return int(r), int(j)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected r:j, got {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(parse_rational(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


# ---------------------------------------------------------------------------
# subcommands; each returns (report, exit code)


def _degree_checks(spec: PairingSpec) -> list[dict]:
    deg, dim = spec.degree(), spec.dimension()
    if deg > dim:
        return [note("degree", f"class degree {deg} exceeds dimension {dim}; the pairing vanishes")]
    if (dim - deg) % 2:
        return [note("degree", f"dimension minus degree is odd ({dim - deg}); no power of f_2 completes it")]
    if deg < dim:
        return [note("degree", f"exp(f_2) supplies f_2^{(dim - deg) // 2} / {(dim - deg) // 2}!")]
    return []


def cmd_pair(args) -> tuple[dict, int]:
    try:
        spec = PairingSpec(args.n, args.d, args.g, a=args.a, f=args.f, b=args.b, epsilon=args.epsilon)
    except PairingError as exc:
        raise InputError(str(exc)) from None
    if args.epsilon is not None and args.route not in (None, "mainab"):
        raise InputError("--epsilon applies to the mainab route only")
    result = pair(spec, args.route)
    report = {
        "request": {"command": "pair", **spec.as_dict(), "route": args.route},
        "result": {"value": result.value, "route": result.route, "pi_exponent": 0, "metadata": result.metadata},
        "checks": _degree_checks(spec),
    }
    return report, EXIT_OK


def cmd_verlinde(args) -> tuple[dict, int]:
    try:
        spec = VerlindeSpec(args.n, args.d, args.g, args.k)
    except VerlindeError as exc:
        raise InputError(str(exc)) from None
    rep = verlinde_check(spec, precision=args.precision)
    body = rep.as_dict()
    report = {
        "request": {"command": "verlinde", "n": args.n, "d": args.d, "g": args.g, "k": args.k, "precision": args.precision},
        "result": {"value": body["D"], "route": "verlinde-residue", "pi_exponent": 0, "metadata": body},
        "checks": [check("residue equals sine sum", rep.passed, "; ".join(rep.messages))],
    }
    return report, EXIT_OK if rep.passed else EXIT_CHECK


def _lattice_config(args) -> LatticeSumConfig:
    try:
        return LatticeSumConfig(cutoff=args.cutoff, digits=args.digits, window_tol=args.window, doublings=args.doublings)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_witten(args) -> tuple[dict, int]:
    try:
        spec = PairingSpec(args.n, args.d, args.g, a=args.a)
    except PairingError as exc:
        raise InputError(str(exc)) from None
    config = _lattice_config(args)
    rep = witten_sum(args.n, args.d, args.g, spec.a_exponents, config)
    exact = pairing_a(spec).value
    checks = [check("convergence window", rep.converged, f"{rep.window:.3e}")]
    if exact:
        rel = abs(rep.value - float(exact)) / abs(float(exact))
        checks.append(check("matches residue", rel < args.tol, f"relative difference {rel:.3e}"))
    else:
        checks.append(check("matches residue", abs(rep.value) < args.tol, f"absolute value {abs(rep.value):.3e}"))
    report = {
        "request": {"command": "oracle witten", **spec.as_dict(), "cutoff": config.cutoff, "digits": config.digits, "doublings": config.doublings},
        "result": {"value": f"{rep.value:.15e}", "route": "lattice-sum", "pi_exponent": 0, "metadata": {**rep.as_dict(), "residue_value": exact}},
        "checks": checks,
    }
    return report, EXIT_OK if all(c["status"] == "pass" for c in checks) else EXIT_CHECK


def cmd_szenes(args) -> tuple[dict, int]:
    if args.function not in SZENES_FUNCTIONS:
        raise InputError(f"unknown test function {args.function!r}; choose from {', '.join(sorted(SZENES_FUNCTIONS))}")
    config = _lattice_config(args)
    rep = szenes_check(args.function, config)
    fn = SZENES_FUNCTIONS[args.function]
    checks = [check("lhs matches rhs", rep.difference < args.tol, f"{rep.difference:.3e}")]
    if fn.exact is not None:
        checks.append(check("rhs closed form", rep.rhs == fn.exact, str(fn.exact)))
    report = {
        "request": {"command": "oracle szenes", "function": args.function, "cutoff": config.cutoff, "doublings": config.doublings},
        "result": {"value": rep.rhs, "route": "szenes", "pi_exponent": 0, "metadata": rep.as_dict()},
        "checks": checks,
    }
    return report, EXIT_OK if all(c["status"] == "pass" for c in checks) else EXIT_CHECK


def cmd_thaddeus(args) -> tuple[dict, int]:
    try:
        cf = thaddeus_value(args.g, args.j, regularize=args.regularize)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    residue = pairing_a(PairingSpec(2, 1, args.g, a={2: args.j})).value
    report = {
        "request": {"command": "oracle thaddeus", "g": args.g, "j": args.j, "regularize": args.regularize},
        "result": {"value": cf.value, "route": "closed-form", "pi_exponent": cf.pi_exponent, "metadata": {"regularized": cf.regularized, "residue_value": residue}},
        "checks": [check("matches residue", cf.value == residue, str(residue))],
    }
    return report, EXIT_OK if cf.value == residue else EXIT_CHECK


def cmd_svol(args) -> tuple[dict, int]:
    try:
        value = svol_value(args.g)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    residue = pairing_a(PairingSpec(2, 1, args.g)).value
    report = {
        "request": {"command": "oracle svol", "g": args.g},
        "result": {"value": value, "route": "closed-form", "pi_exponent": 0, "metadata": {"residue_value": residue}},
        "checks": [check("matches residue", value == residue, str(residue))],
    }
    return report, EXIT_OK if value == residue else EXIT_CHECK


def cmd_selftest(args) -> tuple[dict, int]:
    from .selftest import SUITES, run_selftest

    unknown = [s for s in args.suite or [] if s not in SUITES]
    if unknown:
        raise InputError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}")
    rep = run_selftest(args.suite)
    report = {"request": {"command": "selftest", "suites": args.suite or list(SUITES)}, **rep}
    return report, EXIT_OK if rep["summary"]["passed"] else EXIT_CHECK


GRID_FIELDS = ("n", "d", "g", "a", "f", "b", "route", "value", "degree", "dimension", "status")


def cmd_grid(args) -> str:
    """One CSV row per (n, d, g); invalid combinations are reported, not fatal."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(GRID_FIELDS)
    for n in args.n:
        for d in args.d:
            for g in args.g:
                a = " ".join(f"{r}={m}" for r, m in args.a)
                f = " ".join(f"{r}={m}" for r, m in args.f)
                b = " ".join(f"{r}:{j}" for r, j in args.b)
                try:
                    spec = PairingSpec(n, d, g, a=args.a, f=args.f, b=args.b)
                    res = pair(spec, args.route)
                    row = (n, d, g, a, f, b, res.route, str(res.value), spec.degree(), spec.dimension(), "ok")
                except PairingError as exc:
                    row = (n, d, g, a, f, b, args.route or "", "", "", "", f"skipped: {exc}")
                w.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="emit JSON instead of a text table")
    p.add_argument("--timing", action="store_true", help="add wall-clock time in ms to the report")


def _add_lattice(p: argparse.ArgumentParser, cutoff: int, tol: float) -> None:
    p.add_argument("--cutoff", type=_positive, default=cutoff, help="largest lattice coordinate")
    p.add_argument("--digits", type=_positive, default=15, help="working precision; above 15 uses mpmath")
    p.add_argument("--doublings", type=_positive, default=1, help="how many times the cutoff is doubled")
    p.add_argument("--window", type=float, default=1e-4, help="tolerated relative change between the last two cutoffs")
    p.add_argument("--tol", type=float, default=tol, help="agreement tolerance against the exact value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mndpair", description="Intersection pairings on moduli of vector bundles via iterated residues.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair", help="intersection pairing of a, f and b classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--a", type=_exponent, action="append", default=[], metavar="R=M", help="a_R^M (repeatable)")
    p.add_argument("--f", type=_exponent, action="append", default=[], metavar="R=M", help="f_R^M for R >= 3 (repeatable)")
    p.add_argument("--b", type=_b_class, action="append", default=[], metavar="R:J", help="b_R^J, in product order (repeatable)")
    p.add_argument("--epsilon", type=_rational, help="use the epsilon-scaled residue formula")
    p.add_argument("--route", choices=("mainab", "t96b", "eq936"))
    _add_output(p)
    p.set_defaults(handler=cmd_pair)

    p = sub.add_parser("verlinde", help="Verlinde dimension: residue against sine sum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--k", type=int, required=True, help="level, a multiple of n")
    p.add_argument("--precision", type=_positive, default=50, help="decimal digits for the sine sum")
    _add_output(p)
    p.set_defaults(handler=cmd_verlinde)

    p = sub.add_parser("oracle", help="independent reference computations")
    osub = p.add_subparsers(dest="oracle", required=True)
    o = osub.add_parser("witten", help="truncated lattice sum against the residue value")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--d", type=int, required=True)
    o.add_argument("--g", type=int, required=True)
    o.add_argument("--a", type=_exponent, action="append", default=[], metavar="R=M")
    _add_lattice(o, 1000, 1e-5)
    _add_output(o)
    o.set_defaults(handler=cmd_witten)
    o = osub.add_parser("szenes", help="lattice sum against the residue side of the Szenes identity")
    o.add_argument("--function", default="n2-y2-half", help=f"one of {', '.join(sorted(SZENES_FUNCTIONS))}")
    _add_lattice(o, 192, 1e-5)
    _add_output(o)
    o.set_defaults(handler=cmd_szenes)
    o = osub.add_parser("thaddeus", help="rank-2 closed form for a_2^j exp(f_2)")
    o.add_argument("--g", type=int, required=True)
    o.add_argument("--j", type=int, default=0)
    o.add_argument("--regularize", action="store_true", help="allow j = g-1 with eta(0) = 1/2")
    _add_output(o)
    o.set_defaults(handler=cmd_thaddeus)
    o = osub.add_parser("svol", help="rank-2 symplectic volume closed form")
    o.add_argument("--g", type=int, required=True)
    _add_output(o)
    o.set_defaults(handler=cmd_svol)

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--suite", action="append", help="restrict to one suite (repeatable)")
    _add_output(p)
    p.set_defaults(handler=cmd_selftest)

    p = sub.add_parser("grid", help="CSV table of pairings over a grid of (n, d, g)")
    p.add_argument("--n", type=_int_list, required=True, metavar="N1,N2,...")
    p.add_argument("--d", type=_int_list, required=True, metavar="D1,D2,...")
    p.add_argument("--g", type=_int_list, required=True, metavar="G1,G2,...")
    p.add_argument("--a", type=_exponent, action="append", default=[], metavar="R=M")
    p.add_argument("--f", type=_exponent, action="append", default=[], metavar="R=M")
    p.add_argument("--b", type=_b_class, action="append", default=[], metavar="R:J")
    p.add_argument("--route", choices=("mainab", "t96b", "eq936"))
    p.set_defaults(handler=None)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    handler: Callable | None = args.handler
    try:
        if handler is None:
            out.write(cmd_grid(args))
            return EXIT_OK
        start = time.perf_counter()
        report, code = handler(args)
        if args.timing:
            report["timing_ms"] = f"{(time.perf_counter() - start) * 1000:.1f}"
    except (InputError, PairingError, VerlindeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (ResidueError, ArithmeticError, RecursionError, MemoryError) as exc:
        err.write(f"computation failed: {exc}\n")
        return EXIT_COMPUTE
    out.write(dumps(report) if args.json else text_table(report))
    out.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
