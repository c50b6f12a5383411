"""Fast sweeping Gauss-Seidel drivers: per-step solvers for the first-order,
fixed-omega, ENO and WENO variants, plus the time loop.

A solve phase always executes ``4 * gs_passes`` sweeps cycling through the
four corner orderings.  Convergence is declared by completing the configured
sweep count (the fixed 4GS / 8GS protocol); the final residual is reported,
not thresholded.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import ConfigurationError, SolverError
from .grid import GHOST, CellField, Grid, fill_from_function, fill_ghosts_dirichlet, make_grid
from .limiters import (
    XM, XP, YM, YP,
    CourantData,
    ParamField,
    compute_courant,
    compute_ell,
    compute_ratios,
    eno_select,
    weno_weights,
)
from .problems import LINEAR_ADVECTION, ProblemSpec
from .scheme import residual_field

METHODS = ("first-order", "fixed-omega", "eno", "weno")


@dataclass
class SweepConfig:
    """Sweep counts and per-cell nonlinear solve controls."""

    gs_passes: int = 1
    corrector_passes: int = 1
    cell_tol: float = 1e-12
    cell_max_iter: int = 30

    def __post_init__(self) -> None:
        if self.gs_passes < 1:
            raise ConfigurationError("gs_passes must be at least 1")
        if self.corrector_passes < 1:
            raise ConfigurationError("corrector_passes must be at least 1")
        if self.cell_tol <= 0.0:
            raise ConfigurationError("cell_tol must be positive")


@dataclass
class StepReport:
    """Per-time-step solver statistics."""

    step: int
    sweeps: int
    max_residual: float
    newton_iterations: int = 0
    newton_max_per_cell: int = 0
    bisection_fallbacks: int = 0
    wall_time: float = 0.0


class _Workspace:
    """Precomputed per-(problem, grid, tau) data shared by all steps."""

    def __init__(self, problem: ProblemSpec, grid: Grid, tau: float):
        self.problem = problem
        self.grid = grid
        self.tau = tau
        self.lam = tau / grid.h
        if problem.kind == LINEAR_ADVECTION:
            self.courant = compute_courant(problem, grid, tau)
        else:
            self.courant = None  # rebuilt each step from the current range

    def courant_for(self, u_old: CellField) -> CourantData:
        if self.problem.kind == LINEAR_ADVECTION:
            return self.courant
        lo = float(np.min(u_old.data))
        hi = float(np.max(u_old.data))
        return compute_courant(self.problem, self.grid, self.tau, (lo, hi))


def sweep_once(
    u_new: CellField,
    u_old: CellField,
    params: ParamField,
    ordering: int,
    workspace: _Workspace,
    config: SweepConfig,
) -> tuple[int, int, int]:
    """One Gauss-Seidel sweep over the interior in the given corner ordering.

    Returns (newton iterations, max per cell, bisection fallbacks); zeros for
    the linear closed-form path.
    """
    grid = workspace.grid
    i_range, j_range = _kernels.sweep_ranges(ordering, grid.M)
    if workspace.problem.kind == LINEAR_ADVECTION:
        c = workspace.courant
        _kernels.sweep_linear(
            u_new.data, u_old.data,
            c.cx_plus, c.cx_minus, c.cy_plus, c.cy_minus,
            params.omega, params.ell, i_range, j_range,
        )
        return 0, 0, 0
    if workspace.problem.flux_code != "burgers":
        raise ConfigurationError(
            "the fast solver supports nonlinear fluxes with flux_code='burgers' only"
        )
    total, mx, fallbacks, status = _kernels.sweep_burgers(
        u_new.data, u_old.data, workspace.lam,
        params.omega, params.ell, i_range, j_range,
        config.cell_tol, config.cell_max_iter,
    )
    if status < 0:
        n = grid.n_padded
        a, b = divmod(-status, n)
        raise SolverError(
            f"cell solve failed to bracket a root at cell ({a - GHOST + 1}, {b - GHOST + 1})"
        )
    return total, mx, fallbacks


def _run_phase(
    u_new: CellField,
    u_old: CellField,
    params: ParamField,
    workspace: _Workspace,
    config: SweepConfig,
    update_params: Optional[Callable[[int], None]] = None,
) -> tuple[int, int, int, int]:
    """Run 4 * gs_passes sweeps; optionally refresh parameters before each."""
    total = mx = fallbacks = sweeps = 0
    for _ in range(config.gs_passes):
        for ordering in (1, 2, 3, 4):
            if update_params is not None:
                update_params(ordering)
            t, m, f = sweep_once(u_new, u_old, params, ordering, workspace, config)
            total += t
            mx = max(mx, m)
            fallbacks += f
            sweeps += 1
    return sweeps, total, mx, fallbacks


def _prepare_candidate(
    u_old: CellField, workspace: _Workspace, t_next: float, boundary: str
) -> CellField:
    u_new = u_old.copy()
    u_new.time_label = t_next
    if boundary == "exact":
        if workspace.problem.exact is None:
            raise ConfigurationError(
                "boundary mode 'exact' requires a problem with an exact solution"
            )
        fill_ghosts_dirichlet(u_new, workspace.problem.exact, t_next)
    elif boundary != "frozen":
        raise ConfigurationError(f"unknown boundary mode {boundary!r}")
    return u_new


def _finish(
    step_index: int, sweeps: int, stats, u_new, u_old, params, workspace, t0
) -> StepReport:
    courant = workspace.courant_for(u_old)
    res = residual_field(u_new, u_old, params, workspace.problem, courant, workspace.tau)
    total, mx, fallbacks = stats
    return StepReport(
        step=step_index,
        sweeps=sweeps,
        max_residual=float(np.max(np.abs(res))),
        newton_iterations=total,
        newton_max_per_cell=mx,
        bisection_fallbacks=fallbacks,
        wall_time=time.perf_counter() - t0,
    )


def solve_first_order_step(
    u_old: CellField,
    workspace: _Workspace,
    config: SweepConfig,
    t_next: float,
    boundary: str = "exact",
    step_index: int = 0,
) -> tuple[CellField, ParamField, StepReport]:
    t0 = time.perf_counter()
    u_new = _prepare_candidate(u_old, workspace, t_next, boundary)
    params = ParamField.constant(workspace.grid, omega=0.0, ell=0.0)
    sweeps, *stats = _run_phase(u_new, u_old, params, workspace, config)
    return u_new, params, _finish(step_index, sweeps, stats, u_new, u_old, params, workspace, t0)


def solve_fixed_omega_step(
    u_old: CellField,
    workspace: _Workspace,
    omega_const: float,
    config: SweepConfig,
    t_next: float,
    boundary: str = "exact",
    step_index: int = 0,
) -> tuple[CellField, ParamField, StepReport]:
    if not 0.0 <= omega_const <= 1.0:
        raise ConfigurationError("omega must lie in [0, 1]")
    t0 = time.perf_counter()
    u_new = _prepare_candidate(u_old, workspace, t_next, boundary)
    params = ParamField.constant(workspace.grid, omega=omega_const, ell=1.0)
    sweeps, *stats = _run_phase(u_new, u_old, params, workspace, config)
    return u_new, params, _finish(step_index, sweeps, stats, u_new, u_old, params, workspace, t0)


def _limited_step(
    u_old: CellField,
    workspace: _Workspace,
    config: SweepConfig,
    t_next: float,
    boundary: str,
    step_index: int,
    predictor_omega: float,
    omega_of: Callable[[CellField, CellField], np.ndarray],
) -> tuple[CellField, ParamField, StepReport]:
    t0 = time.perf_counter()
    u_new = _prepare_candidate(u_old, workspace, t_next, boundary)

    # predictor: fixed omega, unlimited in time
    params = ParamField.constant(workspace.grid, omega=predictor_omega, ell=1.0)
    sweeps, total, mx, fallbacks = _run_phase(u_new, u_old, params, workspace, config)

    # corrector: refresh r, omega and ell from the current iterate before
    # every sweep
    courant = workspace.courant_for(u_old)

    def refresh(_ordering: int) -> None:
        params.r = compute_ratios(u_new, u_old)
        params.omega = omega_of(u_new, u_old)
        params.ell = compute_ell(params.omega, params.r, courant, workspace.grid.M)

    for _ in range(config.corrector_passes):
        s, t, m, f = _run_phase(u_new, u_old, params, workspace, config, update_params=refresh)
        sweeps += s
        total += t
        mx = max(mx, m)
        fallbacks += f
    stats = (total, mx, fallbacks)
    return u_new, params, _finish(step_index, sweeps, stats, u_new, u_old, params, workspace, t0)


def solve_eno_step(
    u_old: CellField,
    workspace: _Workspace,
    config: SweepConfig,
    t_next: float,
    boundary: str = "exact",
    step_index: int = 0,
) -> tuple[CellField, ParamField, StepReport]:
    def omega_of(u_new: CellField, u_ref: CellField) -> np.ndarray:
        return eno_select(compute_ratios(u_new, u_ref))

    return _limited_step(
        u_old, workspace, config, t_next, boundary, step_index,
        predictor_omega=0.0, omega_of=omega_of,
    )


def solve_weno_step(
    u_old: CellField,
    workspace: _Workspace,
    config: SweepConfig,
    t_next: float,
    omega_bar: float = 1.0 / 3.0,
    epsilon: float = 1e-6,
    boundary: str = "exact",
    step_index: int = 0,
) -> tuple[CellField, ParamField, StepReport]:
    def omega_of(u_new: CellField, u_ref: CellField) -> np.ndarray:
        return weno_weights(u_new, u_ref, omega_bar, epsilon)

    return _limited_step(
        u_old, workspace, config, t_next, boundary, step_index,
        predictor_omega=omega_bar, omega_of=omega_of,
    )


@dataclass
class RunResult:
    """Final field plus everything tracked over the run."""

    field: CellField
    params: ParamField
    reports: list[StepReport]
    u_min: float
    u_max: float
    abs_max: float  # max |u| over all steps and cells, for Courant reporting
    courant: CourantData


def run_simulation(
    problem: ProblemSpec,
    M: int,
    N: int,
    method: str,
    config: Optional[SweepConfig] = None,
    omega: Optional[float] = None,
    omega_bar: float = 1.0 / 3.0,
    epsilon: float = 1e-6,
    boundary: str = "exact",
    on_step: Optional[Callable[[int, CellField, ParamField, StepReport], None]] = None,
) -> RunResult:
    """Advance the problem from t = 0 to its final time in N steps."""
    if N < 1:
        raise ConfigurationError("N must be at least 1")
    if method not in METHODS:
        raise ConfigurationError(f"method must be one of {METHODS}")
    if method == "fixed-omega":
        if omega is None:
            raise ConfigurationError("fixed-omega requires an omega value")
    elif omega is not None:
        raise ConfigurationError(f"omega is only valid with fixed-omega, not {method!r}")
    config = config or SweepConfig()
    grid = make_grid(problem.x_lo, problem.x_hi, problem.y_lo, problem.y_hi, M)
    tau = problem.final_time / N
    workspace = _Workspace(problem, grid, tau)
    if boundary == "exact" and problem.exact is None:
        raise ConfigurationError("problem has no exact solution; use boundary='frozen'")

    u = fill_from_function(grid, problem.initial, 0.0)
    interior = u.interior()
    u_min = float(np.min(interior))
    u_max = float(np.max(interior))
    abs_max = float(np.max(np.abs(u.data)))
    reports: list[StepReport] = []
    params = ParamField.constant(grid, omega=0.0, ell=0.0)
    courant = workspace.courant_for(u)
    for n in range(N):
        t_next = (n + 1) * tau
        courant = workspace.courant_for(u)
        if method == "first-order":
            u, params, report = solve_first_order_step(
                u, workspace, config, t_next, boundary, n)
        elif method == "fixed-omega":
            u, params, report = solve_fixed_omega_step(
                u, workspace, omega, config, t_next, boundary, n)
        elif method == "eno":
            u, params, report = solve_eno_step(
                u, workspace, config, t_next, boundary, n)
        else:
            u, params, report = solve_weno_step(
                u, workspace, config, t_next, omega_bar, epsilon, boundary, n)
        reports.append(report)
        interior = u.interior()
        u_min = min(u_min, float(np.min(interior)))
        u_max = max(u_max, float(np.max(interior)))
        abs_max = max(abs_max, float(np.max(np.abs(u.data))))
        if on_step is not None:
            on_step(n + 1, u, params, report)
    if problem.kind != LINEAR_ADVECTION:
        lam = tau / grid.h
        courant = workspace.courant_for(u)
        courant.cmax = lam * abs_max
    return RunResult(
        field=u, params=params, reports=reports,
        u_min=u_min, u_max=u_max, abs_max=abs_max, courant=courant,
    )
