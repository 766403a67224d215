"""Command-line front end emitting JSON or CSV.

Verbs: thresholds, solve, classify, sweep, verify, simulate.  Results go
to stdout unless --out is given, in which case the file is written
atomically (temp file + rename); logs go to stderr.  Exit codes:
0 success, 2 validation error, 3 solver non-convergence or truncation
budget breach, 4 verification tolerance breach.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, fields, is_dataclass
from enum import Enum
from typing import Any

import numpy as np

from . import __version__
from .equilibria import (
    DEFAULT_SOLVER_CONFIG,
    Equilibrium,
    EquilibriumKind,
    SolverConfig,
    enumerate_equilibria,
)
from .errors import ConvergenceError, DomainError, TruncationLimitError
from .oracle import (
    OracleConfig,
    class_sizes,
    pivot_gain_bruteforce,
    simulate_election,
)
from .pivot import ElectorateParams, StrategyPair, r1_closed, r2_closed, thresholds
from .regime import THRESHOLD_NAMES, CASE_DESCRIPTIONS, SweepSpec, classify, sweep_bounds

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3
EXIT_TOLERANCE = 4

# Acceptance grid for `verify`: small electorates whose quadruple sums are
# cheap, crossed with the corners and midpoints of the strategy square.
VERIFY_GRID_N = (5.0, 10.0, 20.0, 40.0)
VERIFY_GRID_P = (0.1, 0.3, 0.5)
VERIFY_GRID_PA = (0.55, 0.7, 0.9)
VERIFY_GRID_ALPHA = (0.0, 0.25, 0.5, 0.75, 1.0)

EQUILIBRIUM_COLUMNS = (
    "kind",
    "alpha_a",
    "alpha_b",
    "z_root",
    "residual",
    "winner",
    "notes",
)


@dataclass
class Command:
    """One validated CLI invocation."""

    verb: str
    params: ElectorateParams | None = None
    cost: float | None = None
    output_format: str = "json"
    output_path: str | None = None
    oracle_cfg: OracleConfig = OracleConfig()
    solver_cfg: SolverConfig = DEFAULT_SOLVER_CONFIG
    sweep: SweepSpec | None = None
    alpha_a: float | None = None
    alpha_b: float | None = None
    kind: str | None = None
    verify_tol: float = 1e-10


def _jsonable(obj: Any) -> Any:
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj


def _fmt_cell(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    if x is None:
        return ""
    if isinstance(x, Enum):
        return str(x.value)
    return str(x)


def _csv_text(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_cell(x) for x in row])
    return buf.getvalue()


def _json_text(cmd: Command, results: Any, diagnostics: dict[str, Any]) -> str:
    envelope = {
        "command": cmd.verb,
        "params": _jsonable(cmd.params) if cmd.params is not None else None,
        "results": _jsonable(results),
        "diagnostics": _jsonable(diagnostics),
        "version": __version__,
    }
    return json.dumps(envelope, indent=2) + "\n"


def _equilibrium_row(eq: Equilibrium) -> list[Any]:
    return [
        eq.kind.value,
        eq.strategies.alpha_a,
        eq.strategies.alpha_b,
        eq.z_root,
        eq.residual,
        eq.winner.value,
        ";".join(eq.notes),
    ]


def standard_verify_rows(cfg: OracleConfig) -> list[dict[str, Any]]:
    """Closed-form vs brute-force residuals over the standard grid."""
    rows = []
    for n in VERIFY_GRID_N:
        for p in VERIFY_GRID_P:
            for p_a in VERIFY_GRID_PA:
                params = ElectorateParams(n=n, p=p, p_a=p_a)
                for alpha_a in VERIFY_GRID_ALPHA:
                    for alpha_b in VERIFY_GRID_ALPHA:
                        s = StrategyPair(alpha_a, alpha_b)
                        y_a = params.m_a * alpha_a
                        y_b = params.m_b * alpha_b
                        for side, closed in (
                            ("A", r1_closed(params, s)),
                            ("B", r2_closed(params, s)),
                        ):
                            brute = pivot_gain_bruteforce(
                                params.x_a, params.x_b, y_a, y_b, side, cfg
                            )
                            rows.append(
                                {
                                    "n": n,
                                    "p": p,
                                    "pa": p_a,
                                    "alpha_a": alpha_a,
                                    "alpha_b": alpha_b,
                                    "side": side,
                                    "closed_form": closed,
                                    "brute_force": brute.value,
                                    "abs_error": abs(closed - brute.value),
                                    "error_bound": brute.error_bound,
                                }
                            )
    return rows


def _run_thresholds(cmd: Command) -> tuple[int, Any, dict, list[str], list[list]]:
    ts = thresholds(cmd.params)
    p = cmd.params
    header = ["n", "p", "pa", *THRESHOLD_NAMES, "ct_admissible"]
    row = [p.n, p.p, p.p_a] + [getattr(ts, q) for q in THRESHOLD_NAMES] + [ts.ct_admissible]
    return EXIT_OK, ts, {}, header, [row]


def _run_solve(cmd: Command) -> tuple[int, Any, dict, list[str], list[list]]:
    eqs = enumerate_equilibria(cmd.params, cmd.cost, cmd.solver_cfg)
    header = list(EQUILIBRIUM_COLUMNS)
    rows = [_equilibrium_row(eq) for eq in eqs]
    return EXIT_OK, eqs, {"cost": cmd.cost, "count": len(eqs)}, header, rows


def _run_classify(cmd: Command) -> tuple[int, Any, dict, list[str], list[list]]:
    report = classify(cmd.params, cmd.cost, cmd.solver_cfg)
    header = ["case_index", "avoid", *EQUILIBRIUM_COLUMNS]
    rows = [
        [report.case_index, report.avoid, *_equilibrium_row(eq)]
        for eq in report.equilibria
    ]
    diag = {"cost": cmd.cost, "case_description": CASE_DESCRIPTIONS[report.case_index]}
    return EXIT_OK, report, diag, header, rows


def _run_sweep(cmd: Command) -> tuple[int, Any, dict, list[str], list[list]]:
    table = sweep_bounds(cmd.sweep)
    quantities = list(cmd.sweep.quantities)
    header = ["n", *quantities]
    rows = [
        [float(table.n[i])] + [float(table.columns[q][i]) for q in quantities]
        for i in range(len(table.n))
    ]
    results = {
        "n": table.n,
        "columns": table.columns,
        "onset": table.onset,
    }
    diag = {"p": cmd.sweep.p, "pa": cmd.sweep.p_a, "points": len(table.n)}
    return EXIT_OK, results, diag, header, rows


def _run_verify(cmd: Command) -> tuple[int, Any, dict, list[str], list[list]]:
    rows = standard_verify_rows(cmd.oracle_cfg)
    max_err = max(r["abs_error"] for r in rows)
    ok = max_err < cmd.verify_tol
    header = [
        "n",
        "p",
        "pa",
        "alpha_a",
        "alpha_b",
        "side",
        "closed_form",
        "brute_force",
        "abs_error",
        "error_bound",
    ]
    csv_rows = [[r[k] for k in header] for r in rows]
    results = {
        "max_abs_error": max_err,
        "tolerance": cmd.verify_tol,
        "points": len(rows),
        "pass": ok,
        "rows": rows,
    }
    diag = {"tail_eps": cmd.oracle_cfg.tail_eps}
    return (EXIT_OK if ok else EXIT_TOLERANCE), results, diag, header, csv_rows


def _strategy_for_simulate(cmd: Command) -> tuple[StrategyPair, dict[str, Any]]:
    if cmd.alpha_a is not None or cmd.alpha_b is not None:
        if cmd.alpha_a is None or cmd.alpha_b is None:
            raise DomainError("--alpha-a and --alpha-b must be given together")
        return StrategyPair(cmd.alpha_a, cmd.alpha_b), {"strategy_source": "explicit"}
    if cmd.kind is None:
        raise DomainError("simulate needs either --alpha-a/--alpha-b or --kind with --c")
    if cmd.cost is None:
        raise DomainError("--kind requires --c to solve for the equilibrium")
    wanted = EquilibriumKind(cmd.kind)
    eqs = [
        eq
        for eq in enumerate_equilibria(cmd.params, cmd.cost, cmd.solver_cfg)
        if eq.kind is wanted
    ]
    if not eqs:
        raise DomainError(
            f"no {wanted.value} equilibrium exists at c={cmd.cost!r} for these parameters"
        )
    diag = {"strategy_source": f"solved {wanted.value}", "solved_count": len(eqs)}
    if len(eqs) > 1:
        diag["note"] = "multiple equilibria of this kind; using the one with smallest z_root"
    return eqs[0].strategies, diag


def _run_simulate(cmd: Command) -> tuple[int, Any, dict, list[str], list[list]]:
    s, diag = _strategy_for_simulate(cmd)
    stats = simulate_election(cmd.params, s, cmd.oracle_cfg)
    size_a, size_b = class_sizes(cmd.params)
    diag.update(
        {
            "alpha_a": s.alpha_a,
            "alpha_b": s.alpha_b,
            "class_size_a": size_a,
            "class_size_b": size_b,
            "seed": cmd.oracle_cfg.seed,
            "trials": cmd.oracle_cfg.trials,
        }
    )
    header = [
        "trials",
        "seed",
        "alpha_a",
        "alpha_b",
        "p_a_wins",
        "se_a_wins",
        "p_tie",
        "p_b_wins",
        "pivot_a",
        "se_pivot_a",
        "pivot_b",
        "se_pivot_b",
        "n_a_wins",
        "n_tie",
        "n_b_wins",
    ]
    row = [
        stats.trials_used,
        cmd.oracle_cfg.seed,
        s.alpha_a,
        s.alpha_b,
        stats.p_a_wins,
        stats.se_a_wins,
        stats.p_tie,
        stats.p_b_wins,
        stats.pivot_a,
        stats.se_pivot_a,
        stats.pivot_b,
        stats.se_pivot_b,
        stats.n_a_wins,
        stats.n_tie,
        stats.n_b_wins,
    ]
    return EXIT_OK, stats, diag, header, [row]


_RUNNERS = {
    "thresholds": _run_thresholds,
    "solve": _run_solve,
    "classify": _run_classify,
    "sweep": _run_sweep,
    "verify": _run_verify,
    "simulate": _run_simulate,
}


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".votecost-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def run(cmd: Command) -> tuple[int, str]:
    """Execute a validated command; returns (exit status, serialized output).

    When ``cmd.output_path`` is set the output is also written there
    atomically.
    """
    try:
        status, results, diag, header, rows = _RUNNERS[cmd.verb](cmd)
    except (DomainError, ValueError) as exc:
        return _error_output(cmd, exc, EXIT_VALIDATION)
    except (ConvergenceError, TruncationLimitError) as exc:
        return _error_output(cmd, exc, EXIT_NO_CONVERGENCE)
    if cmd.output_format == "csv":
        text = _csv_text(header, rows)
    else:
        text = _json_text(cmd, results, diag)
    if cmd.output_path:
        try:
            _write_atomic(cmd.output_path, text)
        except OSError as exc:
            return _error_output(cmd, exc, EXIT_VALIDATION)
    return status, text


def _error_output(cmd: Command, exc: Exception, status: int) -> tuple[int, str]:
    if cmd.output_format == "json":
        payload = {
            "command": cmd.verb,
            "params": _jsonable(cmd.params) if cmd.params is not None else None,
            "error": {"type": type(exc).__name__, "message": str(exc)},
            "version": __version__,
        }
        return status, json.dumps(payload, indent=2) + "\n"
    return status, f"error: {type(exc).__name__}: {exc}\n"


def _add_common(sub: argparse.ArgumentParser, default_format: str) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default=default_format)
    sub.add_argument("--out", default=None, help="write output to this path (atomic)")


def _add_electorate(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=float, required=True, help="expected population size")
    sub.add_argument("--p", type=float, required=True, help="partisan share in (0,1)")
    sub.add_argument("--pa", type=float, required=True, help="A-supporter share in (1/2,1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="votecost",
        description="Costly-voting equilibria, cost regimes, and oracle checks.",
    )
    parser.add_argument("--version", action="version", version=f"votecost {__version__}")
    subs = parser.add_subparsers(dest="verb", required=True)

    sub = subs.add_parser("thresholds", help="the four cost frontiers")
    _add_electorate(sub)
    _add_common(sub, "json")

    sub = subs.add_parser("solve", help="all equilibria at a cost")
    _add_electorate(sub)
    sub.add_argument("--c", type=float, required=True, help="voting cost")
    _add_common(sub, "json")

    sub = subs.add_parser("classify", help="regime report for a cost")
    _add_electorate(sub)
    sub.add_argument("--c", type=float, required=True, help="voting cost")
    _add_common(sub, "json")

    sub = subs.add_parser("sweep", help="threshold curves over a population grid")
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--pa", type=float, required=True)
    sub.add_argument("--n-min", type=float, required=True)
    sub.add_argument("--n-max", type=float, required=True)
    sub.add_argument("--points", type=int, required=True)
    sub.add_argument(
        "--quantities",
        default=",".join(THRESHOLD_NAMES),
        help="comma-separated subset of " + ",".join(THRESHOLD_NAMES),
    )
    _add_common(sub, "csv")

    sub = subs.add_parser("verify", help="closed form vs brute force on the standard grid")
    sub.add_argument("--tol", type=float, default=1e-10)
    sub.add_argument("--tail-eps", type=float, default=1e-13)
    _add_common(sub, "csv")

    sub = subs.add_parser("simulate", help="Monte Carlo election statistics")
    _add_electorate(sub)
    sub.add_argument("--alpha-a", type=float, default=None)
    sub.add_argument("--alpha-b", type=float, default=None)
    sub.add_argument(
        "--kind",
        choices=[k.value for k in EquilibriumKind],
        default=None,
        help="simulate at a solved equilibrium of this kind (requires --c)",
    )
    sub.add_argument("--c", type=float, default=None)
    sub.add_argument("--trials", type=int, default=100_000)
    sub.add_argument("--seed", type=int, default=20240717)
    _add_common(sub, "json")

    return parser


def command_from_args(args: argparse.Namespace) -> Command:
    params = None
    if hasattr(args, "n"):
        params = ElectorateParams(n=args.n, p=args.p, p_a=args.pa)
    cmd = Command(
        verb=args.verb,
        params=params,
        output_format=args.format,
        output_path=args.out,
    )
    if hasattr(args, "c"):
        cmd.cost = args.c
    if args.verb == "sweep":
        if args.points < 1:
            raise DomainError(f"--points must be >= 1, got {args.points}")
        if not (0 < args.n_min <= args.n_max):
            raise DomainError("need 0 < --n-min <= --n-max")
        if args.points == 1:
            grid = (float(args.n_min),)
        else:
            grid = tuple(
                float(x)
                for x in np.geomspace(args.n_min, args.n_max, args.points)
            )
        quantities = tuple(q.strip() for q in args.quantities.split(",") if q.strip())
        cmd.sweep = SweepSpec(p=args.p, p_a=args.pa, n_grid=grid, quantities=quantities)
    if args.verb == "verify":
        cmd.verify_tol = args.tol
        cmd.oracle_cfg = OracleConfig(tail_eps=args.tail_eps)
    if args.verb == "simulate":
        cmd.alpha_a = args.alpha_a
        cmd.alpha_b = args.alpha_b
        cmd.kind = args.kind
        cmd.oracle_cfg = OracleConfig(trials=args.trials, seed=args.seed)
    return cmd


def execute(argv: list[str] | None = None) -> tuple[int, str, Command]:
    """Parse argv and run it; validation failures become error payloads."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cmd = command_from_args(args)
    except (DomainError, ValueError) as exc:
        stub = Command(verb=args.verb, output_format=getattr(args, "format", "json"))
        status, text = _error_output(stub, exc, EXIT_VALIDATION)
        return status, text, stub
    status, text = run(cmd)
    return status, text, cmd


def main(argv: list[str] | None = None) -> int:
    status, text, cmd = execute(argv)
    failed = status in (EXIT_VALIDATION, EXIT_NO_CONVERGENCE)
    if failed and cmd.output_format == "csv":
        sys.stderr.write(text)
    elif cmd.output_path and not failed:
        print(f"wrote {cmd.output_path}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
