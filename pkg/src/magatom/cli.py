"""Command-line interface.

Subcommands: qs, rrm, critical, sweep, oracle, hft-check.  Results are
emitted as CSV (default) or JSON records; `--plot FILE` additionally renders
the record as a figure for the commands with a natural graphical form.
Exit codes: 0 success, 2 usage error, 1 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import critical as critical_mod
from . import frobenius, model, oracle, report, ritz
from .errors import MagatomError, NoQSSolutionError, NumericalError

_EXIT_NUMERICAL = 1


def _parse_n_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise ValueError(f"bad basis-size range {text!r}")
    return lo, hi


def _add_common(p: argparse.ArgumentParser, plot: bool = False) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default="-", metavar="FILE",
                   help="write the record here instead of stdout")
    p.add_argument("--precision", choices=("double", "high"), default="double")
    p.add_argument("--dps", type=int, default=40,
                   help="significant digits for --precision high")
    if plot:
        p.add_argument("--plot", default=None, metavar="FILE",
                       help="also render the record as a figure (png/pdf/svg)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magatom",
        description="Planar hydrogen atom in a magnetic field: exact polynomial "
                    "eigenstates, Rayleigh-Ritz spectra, and critical fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qs", help="exact polynomial eigenstates at degree n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--Z", type=float, default=1.0)
    _add_common(p)

    p = sub.add_parser("rrm", help="Rayleigh-Ritz convergence table")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--Z", type=float, default=1.0)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--basis", choices=("gaussian", "exponential", "auto"), default="auto")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--N", required=True, metavar="LO..HI", help="basis sizes, e.g. 4..7")
    p.add_argument("--levels", type=int, default=4)
    _add_common(p, plot=True)

    p = sub.add_parser("critical", help="critical gamma where W crosses zero")
    p.add_argument("--nu-max", type=int, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--Z", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--n-max", type=int, default=None,
                   help="basis-size ceiling (default 12 double / 32 high)")
    _add_common(p, plot=True)

    p = sub.add_parser("sweep", help="curves, lines and points for the W(gamma) plane")
    p.add_argument("--gamma-min", type=float, required=True)
    p.add_argument("--gamma-max", type=float, required=True)
    p.add_argument("--points", type=int, default=60)
    p.add_argument("--nu-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--Z", type=float, default=1.0)
    p.add_argument("--jobs", type=int, default=int(os.environ.get("QSSPEC_JOBS", "1")))
    _add_common(p, plot=True)

    p = sub.add_parser("oracle", help="independent finite-difference eigenvalues")
    p.add_argument("--Z", type=float, default=1.0)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--n-points", type=int, default=4000)
    _add_common(p)

    p = sub.add_parser("hft-check", help="finite-difference Hellmann-Feynman signs")
    p.add_argument("--Z", type=float, default=1.0)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--N", type=int, default=10)
    _add_common(p)

    return parser


def cmd_qs(args) -> report.OutputRecord:
    inputs = {"n": args.n, "s": args.s, "Z": args.Z}
    columns = ("n", "s", "Z", "i", "gamma", "W", "nodes") + tuple(
        f"c{j}" for j in range(max(args.n, 0) + 1)
    )
    rows: list[tuple] = []
    diagnostics: list[str] = []
    try:
        sols = frobenius.qs_solutions(args.n, args.s, args.Z)
    except NoQSSolutionError as err:
        diagnostics.append(str(err))
        return report.OutputRecord("qs", inputs, columns, rows, diagnostics)
    for sol in sols:
        rows.append(
            (sol.n, sol.s, sol.Z, sol.i, sol.gamma_root, sol.W, sol.node_count)
            + tuple(sol.coeffs)
        )
    if sols.excluded_nonpositive:
        diagnostics.append(f"excluded {sols.excluded_nonpositive} non-positive real root(s)")
    if sols.excluded_nonreal:
        diagnostics.append(f"excluded {sols.excluded_nonreal} non-real root(s)")
    if sols.had_multiple_roots:
        diagnostics.append("termination polynomial had multiple roots")
    return report.OutputRecord("qs", inputs, columns, rows, diagnostics)


def cmd_rrm(args, parser) -> report.OutputRecord:
    n_lo, n_hi = args.N_range
    if args.basis == "auto":
        kind = ritz.select_basis_kind(args.gamma)
    else:
        kind = ritz.BasisKind(args.basis)
    if kind == ritz.BasisKind.GAUSSIAN and args.gamma <= 0:
        parser.error("gaussian basis requires --gamma > 0 (use --basis exponential)")
    params = model.ModelParams(Z=args.Z, gamma=args.gamma, m=args.s)
    table = ritz.converge_spectrum(
        params, kind, n_lo, n_hi, args.levels,
        alpha=args.alpha, precision=args.precision, dps=args.dps,
    )
    columns = (
        ("N",)
        + tuple(f"W_nu{v}" for v in range(args.levels))
        + tuple(f"dW_nu{v}" for v in range(args.levels))
    )
    rows = []
    for r, N in enumerate(table.Ns):
        deltas = tuple(
            None if r == 0 else float(table.cauchy[r, v]) for v in range(args.levels)
        )
        rows.append((N,) + tuple(float(w) for w in table.W[r]) + deltas)
    inputs = {
        "gamma": args.gamma, "Z": args.Z, "s": args.s, "basis": kind.value,
        "alpha": None if kind == ritz.BasisKind.GAUSSIAN else args.alpha,
        "N_min": n_lo, "N_max": n_hi, "levels": args.levels,
        "precision": args.precision,
    }
    return report.OutputRecord("rrm", inputs, columns, rows, list(table.warnings))


def cmd_critical(args) -> report.OutputRecord:
    table = critical_mod.critical_table(
        args.nu_max, args.s, args.Z, args.tol,
        precision=args.precision, n_max=args.n_max, dps=args.dps,
    )
    columns = ("nu", "s", "Z", "gamma_c", "residual", "bracket_lo", "bracket_hi",
               "N", "alpha", "converged", "w_cauchy", "uncertainty", "basis")
    rows = []
    for cg in table.entries:
        rows.append((
            cg.nu, cg.s, cg.Z, cg.gamma_c, cg.residual, cg.bracket[0], cg.bracket[1],
            cg.N_used, cg.alpha, cg.converged, cg.w_cauchy, cg.uncertainty, cg.basis_used,
        ))
    diagnostics = [f"nu={nu}: {msg}" for nu, msg in sorted(table.failures.items())]
    gcs = [cg.gamma_c for cg in table.entries]
    if any(a <= b for a, b in zip(gcs, gcs[1:])):
        diagnostics.append("ordering violation: gamma_c not strictly decreasing in nu")
    inputs = {"nu_max": args.nu_max, "s": args.s, "Z": args.Z, "tol": args.tol,
              "precision": args.precision}
    return report.OutputRecord("critical", inputs, columns, rows, diagnostics)


def _sweep_point(params: model.ModelParams, levels: int, precision: str, dps: int):
    """Converged lowest eigenvalues at one grid gamma (auto basis)."""
    prev = None
    last_err = None
    for N in range(max(levels + 2, 6), 13, 2):
        basis = ritz.auto_basis(params, N)
        try:
            w = ritz.spectrum(params, basis, precision=precision, dps=dps).W[:levels]
        except (NumericalError, MagatomError) as err:
            last_err = err
            break
        if prev is not None and max(abs(a - b) for a, b in zip(w, prev)) < 1e-9:
            return list(w), None
        prev = w
    if prev is not None:
        return list(prev), None
    return None, str(last_err)


def cmd_sweep(args, parser) -> report.OutputRecord:
    if not (0 < args.gamma_min < args.gamma_max):
        parser.error("need 0 < --gamma-min < --gamma-max")
    if args.points < 2:
        parser.error("--points must be >= 2")
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    grid = [
        args.gamma_min + (args.gamma_max - args.gamma_min) * k / (args.points - 1)
        for k in range(args.points)
    ]
    levels = args.nu_max + 1
    columns = ("series", "level", "i", "gamma", "W", "nodes")
    rows: list[tuple] = []
    diagnostics: list[str] = []

    def job(g: float):
        params = model.ModelParams(Z=args.Z, gamma=g, m=args.s)
        return _sweep_point(params, levels, args.precision, args.dps)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(job, grid))
    else:
        results = [job(g) for g in grid]

    for g, (w, err) in zip(grid, results):
        for nu in range(levels):
            rows.append(("rrm", nu, None, g, None if w is None else w[nu], None))
        if err:
            diagnostics.append(f"gamma={g:.6g}: {err}")
    for n in range(args.n_max + 1):
        for g in grid:
            rows.append(("qs_line", n, None, g, g * (n + args.s + 1) / 2.0, None))
    for n in range(1, args.n_max + 1):
        try:
            sols = frobenius.qs_solutions(n, args.s, args.Z)
        except NoQSSolutionError:
            continue
        for sol in sols:
            if args.gamma_min <= sol.gamma_root <= args.gamma_max:
                rows.append(("qs_point", n, sol.i, sol.gamma_root, sol.W, sol.node_count))
    inputs = {
        "gamma_min": args.gamma_min, "gamma_max": args.gamma_max, "points": args.points,
        "nu_max": args.nu_max, "n_max": args.n_max, "s": args.s, "Z": args.Z,
        "precision": args.precision,
    }
    return report.OutputRecord("sweep", inputs, columns, rows, diagnostics)


def cmd_oracle(args) -> report.OutputRecord:
    params = model.ModelParams(Z=args.Z, gamma=args.gamma, m=args.s)
    grid = oracle.GridSpec(r_max=args.r_max, n_points=args.n_points)
    result = oracle.oracle_solve(params, grid, args.levels)
    columns = ("nu", "W", "W_coarse", "W_fine")
    rows = [
        (nu, result.W[nu], result.W_coarse[nu], result.W_fine[nu])
        for nu in range(args.levels)
    ]
    inputs = {"Z": args.Z, "gamma": args.gamma, "s": args.s, "levels": args.levels,
              "r_max": result.r_max, "n_points": result.n_points}
    return report.OutputRecord("oracle", inputs, columns, rows, list(result.warnings))


def cmd_hft_check(args) -> report.OutputRecord:
    params = model.ModelParams(Z=args.Z, gamma=args.gamma, m=args.s)
    solver = ritz.make_solver(N=args.N, precision=args.precision, dps=args.dps)
    level = model.LevelIndex(nu=args.nu, s=args.s)
    dw_dz, dw_dg = model.hft_signs(level, params, solver, args.step)
    ok = bool(dw_dz < 0 and dw_dg > 0)
    columns = ("nu", "s", "Z", "gamma", "step", "dW_dZ", "dW_dgamma", "signs_ok")
    rows = [(args.nu, args.s, args.Z, args.gamma, args.step, dw_dz, dw_dg, ok)]
    diagnostics = [] if ok else ["Hellmann-Feynman sign contract violated"]
    inputs = {"Z": args.Z, "gamma": args.gamma, "s": args.s, "nu": args.nu,
              "step": args.step, "N": args.N}
    return report.OutputRecord("hft-check", inputs, columns, rows, diagnostics)


def _emit(record: report.OutputRecord, args) -> None:
    text = report.render(record, args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    if args.format == "csv":
        for d in record.diagnostics:
            print(f"note: {d}", file=sys.stderr)
    plot = getattr(args, "plot", None)
    if plot:
        from . import figures

        figures.RENDERERS[record.command](record, plot)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if getattr(args, "Z", None) is not None and args.command in ("critical", "qs") and args.Z <= 0:
        parser.error(f"--Z must be positive for {args.command}, got {args.Z}")
    if getattr(args, "s", 0) < 0:
        parser.error(f"--s must be >= 0, got {args.s}")
    if getattr(args, "gamma", 0) is not None and getattr(args, "gamma", 0) < 0:
        parser.error(f"--gamma must be >= 0, got {args.gamma}")
    if args.command == "rrm":
        try:
            args.N_range = _parse_n_range(args.N)
        except ValueError as err:
            parser.error(str(err))

    try:
        if args.command == "qs":
            record = cmd_qs(args)
        elif args.command == "rrm":
            record = cmd_rrm(args, parser)
        elif args.command == "critical":
            record = cmd_critical(args)
        elif args.command == "sweep":
            record = cmd_sweep(args, parser)
        elif args.command == "oracle":
            record = cmd_oracle(args)
        else:
            record = cmd_hft_check(args)
    except (MagatomError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return _EXIT_NUMERICAL

    _emit(record, args)
    if args.command == "hft-check" and record.diagnostics:
        return _EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
