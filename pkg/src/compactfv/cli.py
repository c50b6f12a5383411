"""Command-line interface: single runs, convergence studies, and
positivity diagnostics.

Exit codes: 0 success, 1 solver failure, 2 usage/configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Optional

from .analysis import convergence_study, format_table, l1_error, write_table_csv
from .errors import CompactFVError, ConfigurationError, SolverError, UsageError
from .grid import CellField
from .limiters import ParamField, compute_courant
from .positivity import (
    assemble_P,
    check_condition_lt,
    check_incompressibility,
    write_report_csv,
)
from .problems import LINEAR_ADVECTION, PRESETS, get_problem
from .solver import METHODS, SweepConfig, run_simulation


def _parse_fraction(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid fraction {text!r}") from exc


def _parse_n_rule(text: str):
    """Parse 'M/<int>' into a function mapping M to a step count."""
    parts = text.replace(" ", "").split("/")
    if len(parts) != 2 or parts[0] not in ("M", "m"):
        raise UsageError(f"--N-rule must look like 'M/10', got {text!r}")
    try:
        divisor = int(parts[1])
    except ValueError as exc:
        raise UsageError(f"--N-rule divisor must be an integer, got {parts[1]!r}") from exc
    if divisor < 1:
        raise UsageError("--N-rule divisor must be positive")

    def rule(M: int) -> int:
        if M % divisor:
            raise UsageError(f"M={M} is not divisible by {divisor}")
        return M // divisor

    return rule


def _parse_int_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"invalid integer list {text!r}") from exc
    if not values:
        raise UsageError("empty resolution list")
    return values


_CONFIG_KEYS = {
    "problem", "method", "omega", "omega-bar", "epsilon", "M", "N", "N-rule",
    "gs", "corrector-passes", "outdir", "dump-times", "positivity-check",
}


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in _CONFIG_KEYS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compactfv",
        description="Compact implicit finite-volume solver for 2D scalar conservation laws",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key=value config file; flags override it")
        p.add_argument("--problem", choices=sorted(PRESETS), help="problem preset")
        p.add_argument("--method", choices=METHODS, help="scheme variant")
        p.add_argument("--omega", type=float, help="weight for --method fixed-omega")
        p.add_argument("--omega-bar", type=float, default=None,
                       help="WENO linear weight (default 1/3)")
        p.add_argument("--epsilon", type=float, default=None,
                       help="WENO regularization (default 1e-6)")
        p.add_argument("--gs", type=int, default=None,
                       help="Gauss-Seidel pass count; each pass is 4 corner sweeps")
        p.add_argument("--corrector-passes", type=int, default=None)
        p.add_argument("--outdir", default=None, help="output directory (default .)")

    run_p = sub.add_parser("run", help="run one resolution and dump fields")
    add_common(run_p)
    run_p.add_argument("--M", type=int, help="cells per direction")
    run_p.add_argument("--N", type=int, help="number of time steps")
    run_p.add_argument("--N-rule", dest="n_rule", help="step rule like M/10 (alternative to --N)")
    run_p.add_argument("--dump-times", default=None,
                       help="comma-separated fractions of the final time, e.g. 0,1/3,2/3,1")
    run_p.add_argument("--positivity-check", action="store_true", default=None)

    study_p = sub.add_parser("study", help="convergence study over several resolutions")
    add_common(study_p)
    study_p.add_argument("--M", help="comma-separated resolutions, e.g. 40,80,160")
    study_p.add_argument("--N-rule", dest="n_rule", help="step rule like M/10")

    diag_p = sub.add_parser("diagnose", help="positivity diagnostics for a linear run")
    add_common(diag_p)
    diag_p.add_argument("--M", type=int)
    diag_p.add_argument("--N", type=int)
    diag_p.add_argument("--N-rule", dest="n_rule")
    return parser


def _apply_config_file(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    file_values = _load_config_file(args.config)
    mapping = {
        "problem": "problem", "method": "method", "omega": "omega",
        "omega-bar": "omega_bar", "epsilon": "epsilon", "M": "M", "N": "N",
        "N-rule": "n_rule", "gs": "gs", "corrector-passes": "corrector_passes",
        "outdir": "outdir", "dump-times": "dump_times",
        "positivity-check": "positivity_check",
    }
    for key, value in file_values.items():
        attr = mapping[key]
        if not hasattr(args, attr):
            raise UsageError(f"config key {key!r} does not apply to this command")
        if getattr(args, attr) is not None:
            continue  # flags win
        if attr in ("omega", "omega_bar", "epsilon"):
            setattr(args, attr, float(value))
        elif attr in ("N", "gs", "corrector_passes"):
            setattr(args, attr, int(value))
        elif attr == "M":
            setattr(args, attr, int(value) if args.command != "study" else value)
        elif attr == "positivity_check":
            setattr(args, attr, value.lower() in ("1", "true", "yes", "on"))
        else:
            setattr(args, attr, value)


def _validate_method(args: argparse.Namespace) -> None:
    if args.problem is None:
        raise UsageError("--problem is required")
    if args.method is None:
        raise UsageError("--method is required")
    if args.method == "fixed-omega":
        if args.omega is None:
            raise UsageError("--method fixed-omega requires --omega")
    elif args.omega is not None:
        raise UsageError(f"--omega is incompatible with --method {args.method}")
    if args.method != "weno":
        if args.omega_bar is not None:
            raise UsageError("--omega-bar applies to --method weno only")
        if args.epsilon is not None:
            raise UsageError("--epsilon applies to --method weno only")


def _sweep_config(args: argparse.Namespace) -> SweepConfig:
    return SweepConfig(
        gs_passes=args.gs if args.gs is not None else 1,
        corrector_passes=(
            args.corrector_passes if args.corrector_passes is not None else 1
        ),
    )


def _resolve_steps(args: argparse.Namespace, M: int) -> int:
    has_n = getattr(args, "N", None) is not None
    if has_n and args.n_rule is not None:
        raise UsageError("--N and --N-rule are mutually exclusive")
    if has_n:
        return args.N
    if args.n_rule is not None:
        return _parse_n_rule(args.n_rule)(M)
    raise UsageError("either --N or --N-rule is required")


def _method_kwargs(args: argparse.Namespace) -> dict:
    kwargs = {}
    if args.method == "fixed-omega":
        kwargs["omega"] = args.omega
    if args.method == "weno":
        if args.omega_bar is not None:
            kwargs["omega_bar"] = args.omega_bar
        if args.epsilon is not None:
            kwargs["epsilon"] = args.epsilon
    return kwargs


def _cmd_run(args: argparse.Namespace) -> int:
    _validate_method(args)
    if args.M is None:
        raise UsageError("--M is required")
    problem = get_problem(args.problem)
    N = _resolve_steps(args, args.M)
    outdir = args.outdir or "."
    os.makedirs(outdir, exist_ok=True)
    if args.dump_times is None:
        fractions = [1.0]
    else:
        fractions = sorted({_parse_fraction(tok) for tok in args.dump_times.split(",")})
        for f in fractions:
            if not 0.0 <= f <= 1.0:
                raise UsageError(f"dump time fraction {f} outside [0, 1]")
    dump_steps: dict[int, list[float]] = {}
    for f in fractions:
        dump_steps.setdefault(round(f * N), []).append(f)

    config = _sweep_config(args)
    positivity_rows: list[str] = []
    do_positivity = bool(getattr(args, "positivity_check", False))
    if do_positivity and problem.kind != LINEAR_ADVECTION:
        raise UsageError("--positivity-check applies to linear advection problems only")
    tau = problem.final_time / N

    def dump_field(field: CellField, fraction: float) -> None:
        path = os.path.join(outdir, f"field_t{fraction:.6f}.csv")
        field.write_csv(path)

    def on_step(step: int, field: CellField, params: ParamField, report) -> None:
        if step in dump_steps:
            for fraction in dump_steps[step]:
                dump_field(field, fraction)
            if args.method in ("eno", "weno"):
                params.write_csv(outdir, prefix=f"params_step{step}")
        if do_positivity:
            courant = compute_courant(problem, field.grid, tau)
            pr = assemble_P(params, courant, problem, tau)
            positivity_rows.append(pr.csv_row(step))

    result = run_simulation(
        problem, args.M, N, args.method, config=config,
        on_step=on_step, **_method_kwargs(args),
    )
    if 0 in dump_steps:
        from .grid import fill_from_function, make_grid
        g = make_grid(problem.x_lo, problem.x_hi, problem.y_lo, problem.y_hi, args.M)
        initial_field = fill_from_function(g, problem.initial, 0.0)
        for fraction in dump_steps[0]:
            dump_field(initial_field, fraction)
    if do_positivity:
        write_report_csv(os.path.join(outdir, "positivity.csv"), positivity_rows)
    if problem.exact is not None:
        E = l1_error(result.field, problem.exact, problem.final_time)
        print(f"E = {E:.5g}")
    print(f"min = {result.u_min:.5g}  max = {result.u_max:.5g}")
    c = result.courant
    if c.cmax_x is not None:
        print(f"Cmax_x = {c.cmax_x:.4f}  Cmax_y = {c.cmax_y:.4f}")
    if c.cmax is not None:
        print(f"Cmax = {c.cmax:.4f}")
    return 0


def _cmd_study(args: argparse.Namespace) -> int:
    _validate_method(args)
    if args.M is None:
        raise UsageError("--M is required (comma-separated resolutions)")
    if args.n_rule is None:
        raise UsageError("--N-rule is required for studies")
    problem = get_problem(args.problem)
    M_list = _parse_int_list(str(args.M))
    rule = _parse_n_rule(args.n_rule)
    config = _sweep_config(args)
    kwargs = _method_kwargs(args)
    reports, _ = convergence_study(
        problem, args.method, M_list, rule, config=config,
        omega=kwargs.get("omega"),
        omega_bar=kwargs.get("omega_bar", 1.0 / 3.0),
        epsilon=kwargs.get("epsilon", 1e-6),
    )
    outdir = args.outdir or "."
    os.makedirs(outdir, exist_ok=True)
    write_table_csv(os.path.join(outdir, "convergence.csv"), reports)
    print(format_table(reports))
    return 0


def _cmd_diagnose(args: argparse.Namespace) -> int:
    _validate_method(args)
    if args.M is None:
        raise UsageError("--M is required")
    problem = get_problem(args.problem)
    if problem.kind != LINEAR_ADVECTION:
        raise UsageError("diagnose applies to linear advection problems only")
    N = _resolve_steps(args, args.M)
    config = _sweep_config(args)
    tau = problem.final_time / N
    rows: list[str] = []
    worst_lt = 0.0

    def on_step(step: int, field: CellField, params: ParamField, report) -> None:
        nonlocal worst_lt
        courant = compute_courant(problem, field.grid, tau)
        pr = assemble_P(params, courant, problem, tau)
        worst_lt = max(worst_lt, check_condition_lt(params, courant))
        rows.append(pr.csv_row(step))

    run_simulation(
        problem, args.M, N, args.method, config=config,
        on_step=on_step, **_method_kwargs(args),
    )
    outdir = args.outdir or "."
    os.makedirs(outdir, exist_ok=True)
    write_report_csv(os.path.join(outdir, "positivity.csv"), rows)
    print(f"wrote {len(rows)} positivity rows; worst lt excess = {worst_lt:.3g}")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config_file(args)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "study":
            return _cmd_study(args)
        return _cmd_diagnose(args)
    except (UsageError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 1
    except CompactFVError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
