"""Solution-dependent parameter machinery: ratios r, ENO/WENO weights omega,
the time limiter ell, and Courant-like numbers.

Parameter fields are stored as stacked arrays of shape (4, n, n) where the
leading axis enumerates (direction, side) as XM, XP, YM, YP and the trailing
axes match the padded cell layout of :mod:`compactfv.grid`.  Parameters are
kept for the interior plus the first ghost ring (cells 0..M+1), because the
inflow-face reconstructions belong to ghost cells.

Degenerate ratios (denominator below 1e-14) are encoded as +inf; the limiter
forces ell = 0 for nonpositive or degenerate-with-zero-weight ratios.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, UsageError
from .grid import GHOST, CellField, Grid
from .problems import LINEAR_ADVECTION, ProblemSpec, split_velocity

# (direction, side) slots in stacked parameter arrays
XM, XP, YM, YP = 0, 1, 2, 3
SLOT_NAMES = {XM: ("x", "-"), XP: ("x", "+"), YM: ("y", "-"), YP: ("y", "+")}

DEGENERATE_EPS = 1e-14


@dataclass
class ParamField:
    """Per-cell, per-(direction, side) values of omega, ell and r."""

    grid: Grid
    omega: np.ndarray
    ell: np.ndarray
    r: np.ndarray

    @classmethod
    def constant(cls, grid: Grid, omega: float, ell: float) -> "ParamField":
        n = grid.n_padded
        return cls(
            grid,
            np.full((4, n, n), float(omega)),
            np.full((4, n, n), float(ell)),
            np.full((4, n, n), np.inf),
        )

    @classmethod
    def zeros(cls, grid: Grid) -> "ParamField":
        n = grid.n_padded
        return cls(grid, np.zeros((4, n, n)), np.zeros((4, n, n)), np.zeros((4, n, n)))

    def write_csv(self, outdir, prefix: str = "params") -> list[str]:
        """One CSV per (direction, side, quantity), same layout as field dumps."""
        import os

        paths = []
        for slot, (direction, side) in SLOT_NAMES.items():
            tag = f"{direction}{'m' if side == '-' else 'p'}"
            for qty, arr in (("omega", self.omega), ("ell", self.ell), ("r", self.r)):
                path = os.path.join(outdir, f"{prefix}_{qty}_{tag}.csv")
                _write_param_csv(path, self.grid, arr[slot])
                paths.append(path)
        return paths


def _write_param_csv(path, grid: Grid, values: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("i,j,x,y,u\n")
        for j in range(1, grid.M + 1):
            for i in range(1, grid.M + 1):
                x, y = grid.cell_center(i, j)
                fh.write(f"{i},{j},{x!r},{y!r},{values[i + 1, j + 1]!r}\n")


@dataclass
class CourantData:
    """Edge Courant numbers, per-cell Courant-like number C (floored at 1),
    and directional maxima for reporting."""

    cx_plus: np.ndarray  # tau/h * v+ at face right of cell (a, b)
    cx_minus: np.ndarray
    cy_plus: np.ndarray  # tau/h * w+ at face above cell (a, b)
    cy_minus: np.ndarray
    cell_C: np.ndarray
    cmax_x: Optional[float] = None
    cmax_y: Optional[float] = None
    cmax: Optional[float] = None


def _safe_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.full(num.shape, np.inf)
    ok = np.abs(den) >= DEGENERATE_EPS
    out[ok] = num[ok] / den[ok]
    return out


def compute_ratios(u_new: CellField, u_old: CellField) -> np.ndarray:
    """Ratios r for all four (direction, side) slots, stacked (4, n, n).

    Values are computed for the interior plus the first ghost ring; the
    outermost layer keeps a 0 placeholder (its cells own no reconstruction).
    """
    if u_new.grid is not u_old.grid and u_new.grid != u_old.grid:
        raise ConfigurationError("fields must share a grid")
    un = u_new.data
    uo = u_old.data
    n = un.shape[0]
    r = np.zeros((4, n, n))
    s = slice(1, n - 1)
    # x,-: (u^{n+1}_{i-1,j} - u^n_{i,j}) / (u^{n+1}_{i,j} - u^n_{i+1,j})
    r[XM, s, s] = _safe_ratio(un[:-2, s] - uo[s, s], un[s, s] - uo[2:, s])
    # x,+: (u^{n+1}_{i+1,j} - u^n_{i,j}) / (u^{n+1}_{i,j} - u^n_{i-1,j})
    r[XP, s, s] = _safe_ratio(un[2:, s] - uo[s, s], un[s, s] - uo[:-2, s])
    r[YM, s, s] = _safe_ratio(un[s, :-2] - uo[s, s], un[s, s] - uo[s, 2:])
    r[YP, s, s] = _safe_ratio(un[s, 2:] - uo[s, s], un[s, s] - uo[s, :-2])
    return r


def eno_select(r):
    """ENO stencil choice: omega = 1 where |r| <= 1, else 0 (inf maps to 0)."""
    r = np.asarray(r, dtype=float)
    out = np.where(np.abs(r) <= 1.0, 1.0, 0.0)
    if out.shape == ():
        return float(out)
    return out


def weno_weights(
    u_new: CellField,
    u_old: CellField,
    omega_bar: float = 1.0 / 3.0,
    epsilon: float = 1e-6,
) -> np.ndarray:
    """WENO weights omega in [0, 1] for all slots, from the numerator and
    denominator differences of the corresponding ratios."""
    if not 0.0 < omega_bar < 1.0:
        raise ConfigurationError("omega_bar must lie in (0, 1)")
    if epsilon <= 0.0:
        raise ConfigurationError("epsilon must be positive")
    un = u_new.data
    uo = u_old.data
    n = un.shape[0]
    omega = np.zeros((4, n, n))
    s = slice(1, n - 1)
    pairs = {
        XM: (un[:-2, s] - uo[s, s], un[s, s] - uo[2:, s]),
        XP: (un[2:, s] - uo[s, s], un[s, s] - uo[:-2, s]),
        YM: (un[s, :-2] - uo[s, s], un[s, s] - uo[s, 2:]),
        YP: (un[s, 2:] - uo[s, s], un[s, s] - uo[s, :-2]),
    }
    for slot, (d_up, d_ce) in pairs.items():
        a_up = omega_bar / (epsilon + d_up**2) ** 2
        a_ce = (1.0 - omega_bar) / (epsilon + d_ce**2) ** 2
        omega[slot, s, s] = a_up / (a_up + a_ce)
    return omega


def weno_weight_scalar(d_up: float, d_ce: float, omega_bar: float, epsilon: float) -> float:
    """Single-pair WENO weight, used by unit tests and diagnostics."""
    a_up = omega_bar / (epsilon + d_up**2) ** 2
    a_ce = (1.0 - omega_bar) / (epsilon + d_ce**2) ** 2
    return a_up / (a_up + a_ce)


def compute_ell(omega: np.ndarray, r: np.ndarray, courant: CourantData, M: int) -> np.ndarray:
    """Time-limiter ell for all slots via the upstream recurrence.

    The x,- recurrence runs with ascending i (upstream neighbor i-1), the
    x,+ recurrence with descending i (upstream i+1); analogously in y.
    Upstream values outside the computed range count as 0.
    """
    from ._kernels import ell_recurrences

    ell = np.zeros_like(omega)
    ell_recurrences(ell, omega, r, courant.cell_C, M)
    return ell


def compute_courant(
    problem: ProblemSpec,
    grid: Grid,
    tau: float,
    u_range: Optional[tuple[float, float]] = None,
) -> CourantData:
    """Edge Courant numbers and the per-cell Courant-like number C.

    Linear advection: C is the sum of the four edge terms of each cell,
    floored at 1; the directional maxima sample the velocity at grid
    vertices so that the reported values are resolution independent.
    Nonlinear: C is the global (tau/h)(max|f'| + max|g'|) over u_range,
    floored at 1.
    """
    lam = tau / grid.h
    n = grid.n_padded
    if problem.kind == LINEAR_ADVECTION:
        xs, ys = grid.centers_1d()
        # face right of cell with array x-index a is at x_edge(a - 1)
        edge_x = grid.x_lo + (np.arange(n) - GHOST + 1.0) * grid.h
        edge_y = grid.y_lo + (np.arange(n) - GHOST + 1.0) * grid.h
        XE, YC = np.meshgrid(edge_x, ys, indexing="ij")
        v_edge, _ = problem.velocity(XE, YC)
        XC, YE = np.meshgrid(xs, edge_y, indexing="ij")
        _, w_edge = problem.velocity(XC, YE)
        vp, vm = split_velocity(v_edge)
        wp, wm = split_velocity(w_edge)
        cxp, cxm = lam * vp, lam * vm
        cyp, cym = lam * wp, lam * wm
        cell_C = np.zeros((n, n))
        cell_C[1:, 1:] = (
            cxp[1:, 1:] - cxm[:-1, 1:] + cyp[1:, 1:] - cym[1:, :-1]
        )
        cell_C = np.maximum(1.0, cell_C)
        # vertex sampling for the directional maxima
        vx = np.linspace(grid.x_lo, grid.x_hi, grid.M + 1)
        vy = np.linspace(grid.y_lo, grid.y_hi, grid.M + 1)
        VX, VY = np.meshgrid(vx, vy, indexing="ij")
        vv, wv = problem.velocity(VX, VY)
        return CourantData(
            cx_plus=cxp, cx_minus=cxm, cy_plus=cyp, cy_minus=cym,
            cell_C=cell_C,
            cmax_x=float(lam * np.max(np.abs(vv))),
            cmax_y=float(lam * np.max(np.abs(wv))),
        )
    if u_range is None:
        raise ConfigurationError("u_range is required for nonlinear problems")
    lo, hi = float(u_range[0]), float(u_range[1])
    if not np.isfinite(lo) or not np.isfinite(hi) or hi < lo:
        raise ConfigurationError(f"invalid u_range {u_range!r}")
    samples = np.linspace(lo, hi, 129)
    max_df = float(np.max(np.abs(problem.dflux_f(samples))))
    max_dg = float(np.max(np.abs(problem.dflux_g(samples))))
    C = max(1.0, lam * max_df + lam * max_dg)
    u_max = max(abs(lo), abs(hi))
    zero = np.zeros((n, n))
    return CourantData(
        cx_plus=zero, cx_minus=zero, cy_plus=zero, cy_minus=zero,
        cell_C=np.full((n, n), C),
        cmax=float(lam * u_max),
    )
