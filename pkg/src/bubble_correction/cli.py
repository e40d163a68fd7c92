"""Batch command-line front end.

Subcommands wrap the library one to one and speak JSON/CSV on disk.  Exit
codes form a contract: 0 on success, 1 on malformed input or I/O problems,
2 on a mathematical obstruction (nonvanishing residue, blocked recurrence
cell).  An obstruction is a result, not a crash, so it still writes a
machine-readable report before exiting.

Runs are deterministic: fixed ``--seed`` plus identical inputs give byte
identical outputs; files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import balance as balance_mod
from . import moments as moments_mod
from . import profiles as profiles_mod
from . import reduction
from .errors import (
    CharacteristicGuardError,
    DivergentMomentError,
    ResidueObstructionError,
    UnsupportedCaseError,
)
from .polynomials import Polynomial

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_OBSTRUCTION = 2


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _dump_json(path, payload):
    _write_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _load_json(path):
    with open(path) as handle:
        return json.load(handle)


def _load_polynomial(path):
    return Polynomial.from_json(_load_json(path))


# ---------------------------------------------------------------- commands


def cmd_solve(args):
    poly = _load_polynomial(args.input)
    try:
        solution = reduction.solve_general(poly) if args.allow_radial else (
            reduction.solve_gamma(poly)
        )
    except ResidueObstructionError as exc:
        _dump_json(
            args.output,
            {
                "error": "residue_obstruction",
                "message": str(exc),
                "residue": exc.residue.to_json(),
                "top_laplacian": exc.top_laplacian.to_json(),
            },
        )
        return EXIT_OBSTRUCTION
    _dump_json(args.output, solution.to_json())
    return EXIT_OK


def cmd_table(args):
    table = reduction.coefficient_table(args.n, args.ell)
    _dump_json(args.output, table.to_json())
    return EXIT_OK


def cmd_integrate(args):
    poly = _load_polynomial(args.input)
    result = moments_mod.moment_integral(poly)
    payload = result.to_json()
    degree = poly.degree() or 0
    payload["J"] = (
        moments_mod.j_value(poly.dimension, degree) if degree % 2 == 0 else 0.0
    )
    _dump_json(args.output, payload)
    return EXIT_OK


def cmd_balance(args):
    config = balance_mod.BlowupConfiguration.from_json(_load_json(args.input))
    tol = args.tol_float if args.tol_float is not None else balance_mod.TOL_FLOAT
    report = balance_mod.multi_point_balance(
        config, tol=tol, tol_exact=args.tol_exact
    )
    # equal exponents are handled by the grouped sums, so only interference
    # across distinct exponents counts against the verdict; the full
    # all-pairs report is still included for inspection
    interference = balance_mod.interference_check(
        config.n, config.flex_exponents, distinct_only=True
    )
    full_interference = balance_mod.interference_check(
        config.n, config.flex_exponents
    )
    _dump_json(
        args.output,
        {
            "reports": [
                report.to_json(),
                interference.to_json(),
                full_interference.to_json(),
            ],
            "pass": report.passed and interference.passed,
        },
    )
    return EXIT_OK


def cmd_residual_scan(args):
    solution = reduction.CorrectionSolution.from_json(_load_json(args.input))
    source = _load_polynomial(args.source)
    report = profiles_mod.linearized_residual(
        solution.total(), source, samples=args.samples, seed=args.seed
    )
    _dump_json(args.output, report.to_json())
    return EXIT_OK


def cmd_green_check(args):
    ball = profiles_mod.greens_ball(args.n, args.radius)
    rng = np.random.default_rng(args.seed)
    xi = rng.uniform(-0.3, 0.3, args.n) * args.radius
    boundary = []
    for _ in range(32):
        direction = rng.standard_normal(args.n)
        direction /= np.linalg.norm(direction)
        boundary.append(abs(ball.green(args.radius * direction, xi)))
    normalization = ball.poisson_normalization(xi)
    payload = {
        "n": args.n,
        "radius": args.radius,
        "boundary_max_abs": max(boundary),
        "poisson_normalization": normalization,
        "poisson_normalization_ok": bool(abs(normalization - 1.0) <= args.tol_quad),
        "bounds": [
            ball.check_bounds(delta, seed=args.seed) for delta in args.delta
        ],
    }
    _dump_json(args.output, payload)
    return EXIT_OK


def cmd_profile(args):
    spec = profiles_mod.RefinedProfileSpec.from_json(_load_json(args.input))
    profile = profiles_mod.refined_profile(spec)
    rng = np.random.default_rng(args.seed)
    points = np.asarray(spec.xi, float)[None, :] + args.scale * rng.standard_normal(
        (args.samples, spec.n)
    )
    columns = profile.components(points)
    header = [f"y{i + 1}" for i in range(spec.n)] + [
        "bubble",
        "correction",
        "harmonic_group",
        "total",
    ]
    rows = np.column_stack([points, columns])
    text_rows = [",".join(header)]
    for row in rows:
        text_rows.append(",".join(repr(float(x)) for x in row))
    _write_atomic(args.output, "\n".join(text_rows) + "\n")
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bubble-correction",
        description=(
            "Exact polynomial corrections to bubble profiles, bubble-weighted "
            "moments, and concentration balance checks"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve the weighted polynomial equation")
    solve.add_argument("--input", required=True, help="source polynomial JSON")
    solve.add_argument("--output", required=True, help="solution JSON")
    solve.add_argument(
        "--allow-radial",
        action="store_true",
        help="absorb a nonvanishing residue into a radial completion when possible",
    )
    solve.set_defaults(func=cmd_solve)

    table = sub.add_parser("table", help="dump the recurrence coefficient table")
    table.add_argument("--n", type=int, required=True)
    table.add_argument("--ell", type=int, required=True)
    table.add_argument("--output", required=True)
    table.set_defaults(func=cmd_table)

    integrate = sub.add_parser(
        "integrate", help="bubble-weighted moment of a homogeneous polynomial"
    )
    integrate.add_argument("--input", required=True)
    integrate.add_argument("--output", required=True)
    integrate.set_defaults(func=cmd_integrate)

    bal = sub.add_parser("balance", help="multi-point balance report")
    bal.add_argument("--input", required=True, help="configuration JSON")
    bal.add_argument("--output", required=True)
    bal.add_argument(
        "--tol-float", type=float, default=None,
        help="relative tolerance for mixed float group sums (default 1e-10)",
    )
    bal.add_argument(
        "--tol-exact", type=float, default=0.0,
        help="tolerance for exact-rational group sums (default 0: identical zero)",
    )
    bal.set_defaults(func=cmd_balance)

    scan = sub.add_parser(
        "residual-scan", help="sampled float residual of a verified solution"
    )
    scan.add_argument("--input", required=True, help="solution JSON")
    scan.add_argument("--source", required=True, help="source polynomial JSON")
    scan.add_argument("--samples", type=int, default=1000)
    scan.add_argument("--seed", type=int, default=0)
    scan.add_argument("--output", required=True)
    scan.set_defaults(func=cmd_residual_scan)

    green = sub.add_parser("green-check", help="Green/Poisson bound report")
    green.add_argument("--n", type=int, required=True)
    green.add_argument("--radius", type=float, default=1.0)
    green.add_argument(
        "--delta", type=float, action="append", default=None,
        help="boundary gaps to test (repeatable; default 0.1 and 0.3)",
    )
    green.add_argument(
        "--tol-quad", type=float, default=1e-4,
        help="tolerance for quadrature-backed identities",
    )
    green.add_argument("--seed", type=int, default=0)
    green.add_argument("--output", required=True)
    green.set_defaults(func=cmd_green_check)

    prof = sub.add_parser("profile", help="sample a refined profile to CSV")
    prof.add_argument("--input", required=True, help="profile spec JSON")
    prof.add_argument("--samples", type=int, default=200)
    prof.add_argument("--seed", type=int, default=0)
    prof.add_argument("--scale", type=float, default=0.5)
    prof.add_argument("--output", required=True)
    prof.set_defaults(func=cmd_profile)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "delta", "missing") is None:
        args.delta = [0.1, 0.3]
    try:
        return args.func(args)
    except (FileNotFoundError, json.JSONDecodeError, KeyError, ValueError) as exc:
        if isinstance(exc, (DivergentMomentError, UnsupportedCaseError)):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_OBSTRUCTION
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CharacteristicGuardError as exc:
        print(f"obstruction: {exc}", file=sys.stderr)
        return EXIT_OBSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
