"""Command-line surface.

Subcommands: ``taylor`` (exact series solution), ``hpm`` (perturbation
corrections, partial sums, noise report), ``integrate`` (numeric trajectory
to CSV), ``fig1`` (three-curve CSV + SVG for ex4), and ``run-all`` (the
whole claim-by-claim audit).

Exit codes: 0 all pass, 1 check/solver failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .audit import fig1_csv, fig1_svg, run_all, trajectory_csv
from .errors import (
    HpmAuditError,
    InconsistentSlope,
    MissingKey,
    ParseError,
    UnknownProblem,
)
from .hpm import Embedding, hpm_expand, hpm_partial_sum, noise_report
from .integrate import SolverConfig, rk_integrate
from .problems import load_problem
from .series import format_series
from .taylor import taylor_solve

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hpm-audit",
        description=(
            "Audit homotopy-perturbation solutions of singular second-order "
            "IVPs y'' + (k/x) y' + f(x,y) = 0 against an exact series oracle "
            "and an adaptive numeric integrator."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_taylor = sub.add_parser(
        "taylor", help="exact Taylor-series solution (nonzero coefficients)"
    )
    p_taylor.add_argument("--problem", required=True,
                          help="builtin name (ex1..ex4) or problem file path")
    p_taylor.add_argument("--trunc", type=int, default=30,
                          help="truncation degree (default 30)")

    p_hpm = sub.add_parser(
        "hpm", help="perturbation corrections, partial sums, noise report"
    )
    p_hpm.add_argument("--problem", required=True)
    p_hpm.add_argument("--orders", type=int, required=True,
                       help="number of corrections beyond order 0")
    p_hpm.add_argument("--trunc", type=int, default=40)
    p_hpm.add_argument(
        "--embedding",
        choices=[e.value for e in Embedding],
        default=Embedding.THETA_TIMES_F.value,
        help="theta-f multiplies all of f by theta (default); "
        "theta-f-keep-g keeps the y-free source in the order-0 problem",
    )

    p_int = sub.add_parser("integrate", help="numeric trajectory to CSV")
    p_int.add_argument("--problem", required=True)
    p_int.add_argument("--x-start", type=float, default=0.5)
    p_int.add_argument("--x-max", type=float, required=True)
    p_int.add_argument("--rel-tol", type=float, default=1e-10)
    p_int.add_argument("--abs-tol", type=float, default=1e-12)
    p_int.add_argument("--startup-trunc", type=int, default=30)
    p_int.add_argument("--samples", type=int, default=101,
                       help="rows in the uniform output grid")
    p_int.add_argument("--csv", required=True, help="output CSV path")

    p_fig = sub.add_parser(
        "fig1", help="ex4 three-curve figure: numeric, series, asymptote"
    )
    p_fig.add_argument("--csv", default="fig1.csv")
    p_fig.add_argument("--svg", default="fig1.svg")
    p_fig.add_argument("--x-start", type=float, default=0.5)
    p_fig.add_argument("--x-max", type=float, default=100.0)
    p_fig.add_argument("--samples", type=int, default=2000)

    p_all = sub.add_parser("run-all", help="run the full claim-by-claim audit")
    p_all.add_argument("--out", required=True, help="output directory")
    return parser


def _cmd_taylor(args) -> int:
    problem = load_problem(args.problem)
    solution = taylor_solve(problem, args.trunc)
    print(f"problem {problem.name}: k={problem.k}, A={problem.A}, B={problem.B}")
    any_nonzero = False
    for m, c in enumerate(solution.series.coeffs):
        if c != 0:
            print(f"{m}: {c}")
            any_nonzero = True
    if not any_nonzero:
        print("all coefficients zero")
    if solution.terminated:
        print(f"polynomial closure at degree {solution.closure_degree}")
    else:
        print("no polynomial closure detected")
    return EXIT_OK


def _cmd_hpm(args) -> int:
    problem = load_problem(args.problem)
    embedding = Embedding(args.embedding)
    h = hpm_expand(problem, args.orders, args.trunc, embedding)
    for j, yj in enumerate(h.corrections):
        print(f"y{j} = {format_series(yj, max_terms=8)}")
    for j in range(h.orders + 1):
        print(f"partial sum {j} = {format_series(hpm_partial_sum(h, j), max_terms=8)}")
    oracle = taylor_solve(problem, args.trunc)
    exact = oracle.series if oracle.terminated else None
    report = noise_report(h, exact)
    print("noise report" + ("" if exact is None else " (vs exact polynomial)"))
    for entry in report.orders:
        resid = (
            "residual zero"
            if entry.residual_lowest_degree is None
            else f"residual lowest degree {entry.residual_lowest_degree}"
        )
        if exact is None:
            print(f"  order {entry.order}: {resid}")
        else:
            diff = (
                "matches exact"
                if entry.first_diff_degree is None
                else f"first differs from exact at degree {entry.first_diff_degree}"
            )
            print(f"  order {entry.order}: {resid}; {diff}")
    if report.coefficient_trails:
        print("coefficient trails across orders:")
        for degree, trail in report.coefficient_trails.items():
            print(f"  x^{degree}: " + " -> ".join(str(c) for c in trail))
    return EXIT_OK


def _cmd_integrate(args) -> int:
    problem = load_problem(args.problem)
    cfg = SolverConfig(
        x_max=args.x_max,
        x_start=args.x_start,
        rel_tol=args.rel_tol,
        abs_tol=args.abs_tol,
        startup_trunc=args.startup_trunc,
    )
    trajectory = rk_integrate(problem, cfg)
    text = trajectory_csv(trajectory, args.samples)
    with open(args.csv, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    print(
        f"{problem.name}: {len(trajectory.xs)} accepted steps, "
        f"{args.samples} samples -> {args.csv}"
    )
    return EXIT_OK


def _cmd_fig1(args) -> int:
    problem = load_problem("ex4")
    cfg = SolverConfig(x_max=args.x_max, x_start=args.x_start)
    trajectory = rk_integrate(problem, cfg)
    startup = taylor_solve(problem, cfg.startup_trunc).series
    csv_text, crossings = fig1_csv(trajectory, startup, args.samples)
    with open(args.csv, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text)
    with open(args.svg, "w", encoding="utf-8", newline="") as fh:
        fh.write(fig1_svg(trajectory, startup, args.samples))
    print(f"asymptote crossings (x >= 2): {crossings}")
    print(f"wrote {args.csv} and {args.svg}")
    return EXIT_OK


def _cmd_run_all(args) -> int:
    report = run_all(args.out)
    for r in report.results:
        print(f"{r.check_id}: {r.status.upper()}")
    print(f"overall: {'PASS' if report.all_ok else 'FAIL'}")
    print(f"report written to {args.out}")
    return EXIT_OK if report.all_ok else EXIT_FAILURE


_COMMANDS = {
    "taylor": _cmd_taylor,
    "hpm": _cmd_hpm,
    "integrate": _cmd_integrate,
    "fig1": _cmd_fig1,
    "run-all": _cmd_run_all,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version, 2 for usage errors
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (UnknownProblem, ParseError, MissingKey, InconsistentSlope) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HpmAuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
