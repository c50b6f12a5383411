"""Error norms, experimental convergence orders, sector errors, and the
multi-resolution study driver."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError
from .grid import CellField, Grid
from .problems import ProblemSpec
from .solver import RunResult, SweepConfig, run_simulation


def _interior_mesh(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    X, Y = grid.center_mesh()
    s = grid.interior()
    return X[s], Y[s]


def l1_error(
    numeric: CellField,
    exact: Callable,
    T: float,
    mask: Optional[np.ndarray] = None,
) -> float:
    """Cell-centered discrete L1 error, h^2 * sum |u - exact|.

    An optional boolean mask of shape (M, M) restricts the sum.
    """
    grid = numeric.grid
    X, Y = _interior_mesh(grid)
    diff = np.abs(numeric.interior() - exact(X, Y, T))
    if mask is not None:
        diff = diff[mask]
    return float(grid.h**2 * np.sum(diff))


def eoc(e_coarse: float, e_fine: float) -> Optional[float]:
    """Order estimate log2(E_coarse / E_fine); None when undefined."""
    if e_coarse <= 0.0 or e_fine <= 0.0:
        return None
    return math.log2(e_coarse / e_fine)


def quadrant_masks(grid: Grid) -> dict[str, np.ndarray]:
    """Boolean cell masks of the four quadrants around the domain center."""
    X, Y = _interior_mesh(grid)
    cx = 0.5 * (grid.x_lo + grid.x_hi)
    cy = 0.5 * (grid.y_lo + grid.y_hi)
    return {
        "I": (X > cx) & (Y > cy),
        "II": (X < cx) & (Y > cy),
        "III": (X < cx) & (Y < cy),
        "IV": (X > cx) & (Y < cy),
    }


def rotated_quadrant_masks(grid: Grid, angle: float) -> dict[str, np.ndarray]:
    """Quadrant masks transported by a rotation about the domain center.

    A cell belongs to quadrant Q if rotating its center backwards by
    ``angle`` lands in Q; with angle = 2*pi*T this tracks where features that
    started in Q sit at time T.
    """
    X, Y = _interior_mesh(grid)
    c, s = math.cos(angle), math.sin(angle)
    X0 = c * X + s * Y
    Y0 = -s * X + c * Y
    return {
        "I": (X0 > 0) & (Y0 > 0),
        "II": (X0 < 0) & (Y0 > 0),
        "III": (X0 < 0) & (Y0 < 0),
        "IV": (X0 > 0) & (Y0 < 0),
    }


def sector_errors(
    numeric: CellField,
    exact: Callable,
    T: float,
    masks: dict[str, np.ndarray],
) -> dict[str, float]:
    return {name: l1_error(numeric, exact, T, mask) for name, mask in masks.items()}


@dataclass
class ErrorReport:
    """One convergence-table row."""

    M: int
    N: int
    E: float
    EOC: Optional[float]
    u_min: float
    u_max: float
    cmax_x: Optional[float]
    cmax_y: Optional[float]
    cmax: Optional[float]
    method: str
    gs_passes: int

    def __post_init__(self) -> None:
        if self.E < 0.0:
            raise ConfigurationError("error norm cannot be negative")


def convergence_study(
    problem: ProblemSpec,
    method: str,
    M_list: list[int],
    n_rule: Callable[[int], int],
    config: Optional[SweepConfig] = None,
    omega: Optional[float] = None,
    omega_bar: float = 1.0 / 3.0,
    epsilon: float = 1e-6,
    keep_fields: bool = False,
) -> tuple[list[ErrorReport], list[RunResult]]:
    """Run the problem at each resolution and build an EOC-chained table.

    Returns the table rows and, when ``keep_fields`` is set, the full run
    results (otherwise an empty list).
    """
    if problem.exact is None:
        raise ConfigurationError(f"problem {problem.name!r} has no exact solution")
    config = config or SweepConfig()
    reports: list[ErrorReport] = []
    results: list[RunResult] = []
    prev_E: Optional[float] = None
    for M in M_list:
        N = n_rule(M)
        result = run_simulation(
            problem, M, N, method, config=config,
            omega=omega, omega_bar=omega_bar, epsilon=epsilon,
        )
        E = l1_error(result.field, problem.exact, problem.final_time)
        reports.append(ErrorReport(
            M=M, N=N, E=E,
            EOC=None if prev_E is None else eoc(prev_E, E),
            u_min=result.u_min, u_max=result.u_max,
            cmax_x=result.courant.cmax_x,
            cmax_y=result.courant.cmax_y,
            cmax=result.courant.cmax,
            method=method, gs_passes=config.gs_passes,
        ))
        prev_E = E
        if keep_fields:
            results.append(result)
    return reports, results


TABLE_CSV_HEADER = "M,N,E,EOC,min,max,Cmax_x,Cmax_y,Cmax,method,gs"


def _opt(value: Optional[float]) -> str:
    return "" if value is None else repr(value)


def write_table_csv(path, reports: list[ErrorReport]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(TABLE_CSV_HEADER + "\n")
        for r in reports:
            fh.write(
                f"{r.M},{r.N},{r.E!r},{_opt(r.EOC)},{r.u_min!r},{r.u_max!r},"
                f"{_opt(r.cmax_x)},{_opt(r.cmax_y)},{_opt(r.cmax)},"
                f"{r.method},{r.gs_passes}\n"
            )


def format_table(reports: list[ErrorReport]) -> str:
    """Human-readable table: E to 5 significant figures, EOC to 2 decimals."""
    lines = [f"{'M':>6} {'N':>6} {'E':>12} {'EOC':>6} {'min':>10} {'max':>10}"]
    for r in reports:
        eoc_s = "-" if r.EOC is None else f"{r.EOC:.2f}"
        lines.append(
            f"{r.M:>6} {r.N:>6} {r.E:>12.5g} {eoc_s:>6} "
            f"{r.u_min:>10.5g} {r.u_max:>10.5g}"
        )
    return "\n".join(lines)
