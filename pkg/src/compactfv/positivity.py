"""Convex-combination diagnostics for the linear high-resolution scheme.

After a step, the interior cell equation can be rewritten as

    P_c (u_new - u_old) + sum_nb P_nb (u_new_c - u_new_nb) = 0

over the four edge neighbors.  When every coefficient P is non-negative the
new value is a convex combination of its stencil, so no new extrema appear.
This module assembles the P coefficients from the stored step parameters and
checks the sufficient conditions (neighbor A-coefficients bounded by 1, and
the per-cell inequality tying the ell-weighted self terms to 1/C).

All checks apply to divergence-free linear advection only.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import UsageError
from .grid import GHOST, Grid
from .limiters import XM, XP, YM, YP, CourantData, ParamField, compute_courant
from .problems import LINEAR_ADVECTION, ProblemSpec

VIOLATION_TOL = 1e-10


@dataclass
class PositivityReport:
    """Per-cell convex-combination coefficients and their worst values.

    The five arrays have shape (M, M); ``p_self`` multiplies the time
    difference, the others multiply differences against the four edge
    neighbors.
    """

    p_self: np.ndarray
    p_east: np.ndarray   # neighbor (i+1, j)
    p_west: np.ndarray   # neighbor (i-1, j)
    p_north: np.ndarray  # neighbor (i, j+1)
    p_south: np.ndarray  # neighbor (i, j-1)
    min_p_self: float
    min_p_neighbors: float
    violations: int
    incompr_residual: float

    def csv_row(self, step: int) -> str:
        return (
            f"{step},{self.min_p_self!r},{self.min_p_neighbors!r},"
            f"{self.violations},{self.incompr_residual!r}"
        )


CSV_HEADER = "step,min_Pij,min_Pneighbors,violations,incompr_residual"


def write_report_csv(path, rows: list[str]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row + "\n")


def _require_linear(problem: ProblemSpec, what: str) -> None:
    if problem.kind != LINEAR_ADVECTION:
        raise UsageError(f"{what} applies to linear advection problems only")


def check_incompressibility(
    problem: ProblemSpec, grid: Grid, tau: float, courant: Optional[CourantData] = None
) -> float:
    """Max over interior cells of the discrete divergence of the edge Courant
    numbers (zero for discretely divergence-free velocities)."""
    _require_linear(problem, "check_incompressibility")
    if courant is None:
        courant = compute_courant(problem, grid, tau)
    cxp, cxm = courant.cx_plus, courant.cx_minus
    cyp, cym = courant.cy_plus, courant.cy_minus
    sx = (GHOST, GHOST + grid.M)
    a = slice(*sx)
    am = slice(sx[0] - 1, sx[1] - 1)
    div = (
        cxp[a, a] + cxm[a, a] - cxp[am, a] - cxm[am, a]
        + cyp[a, a] + cym[a, a] - cyp[a, am] - cym[a, am]
    )
    return float(np.max(np.abs(div)))


def assemble_A(omega: np.ndarray, ell: np.ndarray, r: np.ndarray):
    """Self and neighbor A-coefficients for all four (direction, side) slots.

    A_self = (omega + (1 - omega)/r) / 2 (not scaled by ell; the P formulas
    multiply by ell separately).  A_neighbor = (ell/2)(omega r + 1 - omega).
    Degenerate ratios (encoded +inf) contribute nothing: the differences they
    multiply vanish, so both sentinel terms are dropped.
    """
    finite = np.isfinite(r)
    inv_r = np.zeros_like(r)
    np.divide(1.0, r, out=inv_r, where=finite & (r != 0.0))
    a_self = 0.5 * (omega + (1.0 - omega) * inv_r)
    r_term = np.where(finite, r, 0.0)
    a_neighbor = 0.5 * ell * (omega * r_term + 1.0 - omega)
    return a_self, a_neighbor


def assemble_P(
    params: ParamField,
    courant: CourantData,
    problem: ProblemSpec,
    tau: float,
    tol: float = VIOLATION_TOL,
) -> PositivityReport:
    """Assemble the five P coefficient families for every interior cell."""
    _require_linear(problem, "assemble_P")
    grid = params.grid
    M = grid.M
    a_self, a_nb = assemble_A(params.omega, params.ell, params.r)
    ell = params.ell
    cxp, cxm = courant.cx_plus, courant.cx_minus
    cyp, cym = courant.cy_plus, courant.cy_minus

    c = slice(GHOST, GHOST + M)          # cell itself
    lo = slice(GHOST - 1, GHOST + M - 1)  # index shifted -1
    hi = slice(GHOST + 1, GHOST + M + 1)  # index shifted +1

    # self terms, scaled by the cell's own ell
    sxm = ell[XM, c, c] * a_self[XM, c, c]
    sxp = ell[XP, c, c] * a_self[XP, c, c]
    sym = ell[YM, c, c] * a_self[YM, c, c]
    syp = ell[YP, c, c] * a_self[YP, c, c]
    # neighbor A-coefficients, evaluated at the neighboring cells
    nxm = a_nb[XM, lo, c]   # west neighbor, slot x,-
    nxp = a_nb[XP, hi, c]   # east neighbor, slot x,+
    nym = a_nb[YM, c, lo]   # south neighbor, slot y,-
    nyp = a_nb[YP, c, hi]   # north neighbor, slot y,+

    p_west = cxp[c, c] * sxm + cxp[lo, c] * (1.0 - nxm)
    p_east = -cxm[lo, c] * sxp - cxm[c, c] * (1.0 - nxp)
    p_south = cyp[c, c] * sym + cyp[c, lo] * (1.0 - nym)
    p_north = -cym[c, lo] * syp - cym[c, c] * (1.0 - nyp)
    p_self = (
        1.0
        - cxp[c, c] * sxm + cxp[lo, c] * nxm
        + cxm[lo, c] * sxp - cxm[c, c] * nxp
        - cyp[c, c] * sym + cyp[c, lo] * nym
        + cym[c, lo] * syp - cym[c, c] * nyp
    )

    neighbors = np.stack([p_east, p_west, p_north, p_south])
    violations = int(np.count_nonzero(p_self < -tol) + np.count_nonzero(neighbors < -tol))
    return PositivityReport(
        p_self=p_self, p_east=p_east, p_west=p_west,
        p_north=p_north, p_south=p_south,
        min_p_self=float(np.min(p_self)),
        min_p_neighbors=float(np.min(neighbors)),
        violations=violations,
        incompr_residual=check_incompressibility(problem, grid, tau, courant),
    )


def check_condition_lt(params: ParamField, courant: CourantData) -> float:
    """Max positive excess of the per-cell sufficient inequality

        sum_slots ell * A_self  <=  (1 + inflow neighbor credits) / C,

    zero when it holds everywhere."""
    grid = params.grid
    M = grid.M
    a_self, a_nb = assemble_A(params.omega, params.ell, params.r)
    ell = params.ell
    cxp, cxm = courant.cx_plus, courant.cx_minus
    cyp, cym = courant.cy_plus, courant.cy_minus
    c = slice(GHOST, GHOST + M)
    lo = slice(GHOST - 1, GHOST + M - 1)
    hi = slice(GHOST + 1, GHOST + M + 1)
    lhs = (
        ell[XM, c, c] * a_self[XM, c, c]
        + ell[XP, c, c] * a_self[XP, c, c]
        + ell[YM, c, c] * a_self[YM, c, c]
        + ell[YP, c, c] * a_self[YP, c, c]
    )
    rhs = (
        1.0
        + cxp[lo, c] * a_nb[XM, lo, c]
        - cxm[c, c] * a_nb[XP, hi, c]
        + cyp[c, lo] * a_nb[YM, c, lo]
        - cym[c, c] * a_nb[YP, c, hi]
    ) / courant.cell_C[c, c]
    excess = lhs - rhs
    worst = float(np.max(excess))
    return max(0.0, worst)
