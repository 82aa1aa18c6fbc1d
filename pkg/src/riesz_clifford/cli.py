"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage, parse, file or
precondition error.  JSON reports go to ``--out`` when given (a one-line
summary is printed instead), otherwise to stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .calculus import (
    ConvergenceWarning,
    OperatorKernelConfig,
    SpectralBoundError,
    calculus_integral,
    calculus_taylor,
    relative_difference,
    resolvent_probe,
    spectral_radius_bound,
)
from .quant import PolynomialSyntaxError, parse_polynomial, quantize
from .serialize import (
    MATRIX_SCHEMA,
    OperatorFileError,
    dumps,
    hyperpoly_from_dict,
    matrix_to_json,
    read_operator_file,
)
from .validation import HermiticityError, hermitian_residual
from .verify import SUITES, Tolerances, all_passed, run_suite

REPORT_SCHEMA = "riesz-clifford/run-report/1"
PROBE_HEADER = ("radius", "degree", "term_norm", "partial_norm", "verdict")
DEFAULT_SEED = 0


class UsageError(Exception):
    """Bad input detected after argument parsing; maps to exit code 2."""


def _default_seed() -> int:
    env = os.environ.get("RC_SEED")
    if env is None or env == "":
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"RC_SEED must be an integer, got {env!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of numbers, got {text!r}") from None


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} needs a numeric value") from None


def _report(command: str, argv, config: dict, result, diagnostics: dict, wall_time: float | None) -> dict:
    rep = {
        "schema": REPORT_SCHEMA,
        "command": {"name": command, "argv": list(argv)},
        "config": config,
        "result": result,
        "diagnostics": diagnostics,
        "version": __version__,
    }
    if wall_time is not None:
        rep["wall_time"] = wall_time
    return rep


def _emit(text: str, out: str | None, summary: str) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        print(summary)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        print(summary, file=sys.stderr)


# -- subcommands --------------------------------------------------------------

def cmd_verify(args, argv) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        tol = Tolerances().override(dict(args.tol or []))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    start = time.perf_counter()
    results = run_suite(args.suite, seed, tol, max_degree=args.max_degree)
    elapsed = time.perf_counter() - start
    ok = all_passed(results)
    n_checks = sum(len(v) for v in results.values())
    n_fail = sum(not c["passed"] for v in results.values() for c in v)
    config = {"suite": args.suite, "seed": seed, "max_degree": args.max_degree, "tolerances": tol.as_dict()}
    diag = {"checks": n_checks, "failed": n_fail, "passed": ok}
    rep = _report("verify", argv, config, results, diag, elapsed if args.include_timing else None)
    _emit(dumps(rep), args.out, f"verify {args.suite}: {n_checks - n_fail}/{n_checks} checks passed")
    return 0 if ok else 1


def cmd_quantize(args, argv) -> int:
    T, labels = read_operator_file(args.operators)
    p = parse_polynomial(args.poly, m=T.m)
    Q = quantize(p, T)
    herm = hermitian_residual(Q)
    if args.out:
        payload = {"schema": MATRIX_SCHEMA, "d": T.d, "matrix": matrix_to_json(Q)}
        Path(args.out).write_text(dumps(payload) + "\n", encoding="utf-8")
    else:
        rep = _report(
            "quantize", argv,
            {"poly": args.poly, "operators": labels},
            {"schema": MATRIX_SCHEMA, "d": T.d, "matrix": matrix_to_json(Q)},
            {"hermiticity_residual": herm, "degree": p.degree()},
            None,
        )
        sys.stdout.write(dumps(rep) + "\n")
    print(f"hermiticity residual: {herm:.3e}", file=sys.stderr if not args.out else sys.stdout)
    return 0


def _load_function(args, m: int):
    if args.coeffs:
        try:
            data = json.loads(Path(args.coeffs).read_text(encoding="utf-8"))
            f = hyperpoly_from_dict(data)
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise UsageError(f"{args.coeffs}: not a hyperholomorphic polynomial file ({exc})") from None
        if f.n < m:
            raise UsageError(f"polynomial has n={f.n} variables but {m} operators were given")
        return f
    # x^alpha in the text stands for the basis polynomial V_alpha
    return parse_polynomial(args.poly, m=m).to_hyper(m)


def cmd_calculus(args, argv) -> int:
    T, labels = read_operator_file(args.operators)
    f = _load_function(args, T.m)
    cfg = OperatorKernelConfig(truncation=args.truncation, radius=args.radius, quad_order=args.order)
    bound = spectral_radius_bound(T)
    result, diag = {}, {"spectral_bound": bound}
    values = {}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConvergenceWarning)
        if args.route in ("taylor", "both"):
            r = calculus_taylor(f, T)
            values["taylor"] = r.value
            result["taylor"] = r.to_dict()
        if args.route in ("integral", "both"):
            r = calculus_integral(f, T, cfg)
            values["integral"] = r.value
            result["integral"] = r.to_dict()
    diag["warnings"] = [str(w.message) for w in caught]
    summary = f"calculus route={args.route}"
    if args.route == "both":
        dis = relative_difference(values["integral"], values["taylor"], T.d)
        diag["route_disagreement"] = dis
        summary = f"route disagreement: {dis:.3e}"
    config = {
        "route": args.route,
        "operators": labels,
        "radius": cfg.resolve_radius(bound),
        "order": args.order,
        "truncation": args.truncation,
        "source": {"coeffs": args.coeffs} if args.coeffs else {"poly": args.poly},
    }
    _emit(dumps(_report("calculus", argv, config, result, diag, None)), args.out, summary)
    return 0


def cmd_probe(args, argv) -> int:
    T, _ = read_operator_file(args.operators)
    direction = np.asarray(args.direction if args.direction is not None else [1.0] + [0.0] * T.m, dtype=float)
    if direction.size < T.m + 1:
        raise UsageError(f"direction needs at least {T.m + 1} components, got {direction.size}")
    norm = np.linalg.norm(direction)
    if norm == 0:
        raise UsageError("direction must be nonzero")
    bound = spectral_radius_bound(T)
    radii = [r * bound for r in args.radii] if args.relative else list(args.radii)
    if any(not r > 0 for r in radii):
        raise UsageError("radii must be positive (a relative scan needs a nonzero spectral bound)")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PROBE_HEADER)
    for r in radii:
        rep = resolvent_probe(direction / norm * r, T, J=args.degree)
        for radius, j, term, partial, verdict in rep.rows():
            writer.writerow([repr(radius), j, repr(term), repr(partial), verdict])
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riesz-clifford", description="Hyperholomorphic functional calculus toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--seed", type=int, default=None, help="default: $RC_SEED or 0")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--tol", type=_tol_pair, action="append", metavar="NAME=VALUE")
    p.add_argument("--out")
    p.add_argument("--include-timing", action="store_true", help="add wall_time (breaks byte identity)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("quantize", help="symmetrize a classical polynomial on an operator tuple")
    p.add_argument("poly")
    p.add_argument("operators")
    p.add_argument("--out")
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("calculus", help="evaluate f(T) by the Taylor and/or integral route")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help="text such as '1 + 2 x1 x2'; x^alpha denotes V_alpha")
    src.add_argument("--coeffs", help="hyperholomorphic polynomial JSON file")
    p.add_argument("operators")
    p.add_argument("--route", choices=("taylor", "integral", "both"), default="both")
    p.add_argument("--radius", type=float, default=None, help="default: 2 x spectral bound")
    p.add_argument("--order", type=int, default=32)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calculus)

    p = sub.add_parser("probe", help="scan kernel series convergence along a ray")
    p.add_argument("operators")
    p.add_argument("--direction", type=_float_list, default=None)
    p.add_argument("--radii", type=_float_list, required=True)
    p.add_argument("--degree", type=int, default=12)
    p.add_argument("--relative", action="store_true", help="radii are multiples of the spectral bound")
    p.add_argument("--out")
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, argv)
    except PolynomialSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"  {exc.text}\n  {' ' * exc.position}^", file=sys.stderr)
        return 2
    except (UsageError, OperatorFileError, HermiticityError, SpectralBoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
