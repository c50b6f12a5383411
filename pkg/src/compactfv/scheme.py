"""The compact implicit residual: parametric interface reconstructions,
numerical fluxes, and the per-cell discrete equation whose root is the new
cell value.

The residual sign convention follows the discrete equations directly: the
residual is the left-hand side of the "= 0" cell equation, evaluated at a
candidate new value.  The solver looks for a root, never a normalized update.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import ConfigurationError, UsageError
from .grid import GHOST, CellField, Grid
from .limiters import XM, XP, YM, YP, CourantData, ParamField
from .problems import LINEAR_ADVECTION, SCALAR_CONSERVATION, ProblemSpec


class InterfaceParams(NamedTuple):
    """Weight omega and time limiter ell for one interface reconstruction."""

    omega: float
    ell: float

    def validate(self) -> "InterfaceParams":
        if not (0.0 <= self.omega <= 1.0 and 0.0 <= self.ell <= 1.0):
            raise ConfigurationError("omega and ell must lie in [0, 1]")
        return self


def reconstruct_minus_x(u_new_ij, u_new_im1j, u_n_ij, u_n_ip1j, params: InterfaceParams):
    """Interface value on the minus side of face (i+1/2, j), owned by cell (i, j)."""
    om, el = params
    return u_new_ij - 0.5 * el * (
        om * (u_new_im1j - u_n_ij) + (1.0 - om) * (u_new_ij - u_n_ip1j)
    )


def reconstruct_plus_x(u_new_ip1j, u_new_ip2j, u_n_ip1j, u_n_ij, params: InterfaceParams):
    """Interface value on the plus side of face (i+1/2, j), owned by cell (i+1, j)."""
    om, el = params
    return u_new_ip1j - 0.5 * el * (
        om * (u_new_ip2j - u_n_ip1j) + (1.0 - om) * (u_new_ip1j - u_n_ij)
    )


def reconstruct_minus_y(u_new_ij, u_new_ijm1, u_n_ij, u_n_ijp1, params: InterfaceParams):
    return reconstruct_minus_x(u_new_ij, u_new_ijm1, u_n_ij, u_n_ijp1, params)


def reconstruct_plus_y(u_new_ijp1, u_new_ijp2, u_n_ijp1, u_n_ij, params: InterfaceParams):
    return reconstruct_plus_x(u_new_ijp1, u_new_ijp2, u_n_ijp1, u_n_ij, params)


# ---------------------------------------------------------------------------
# Vectorized interface values and residual fields
# ---------------------------------------------------------------------------


def _faces_x(un: np.ndarray, uo: np.ndarray, params: ParamField):
    """Minus and plus values at all x faces.

    Returned arrays have shape (M+1, M): entry (k, l) is the face between
    cells with array x-indices k+1 and k+2, at array y-index l+2 (interior
    rows only).  That covers paper faces i+1/2 for i = 0..M.
    """
    M = un.shape[0] - 2 * GHOST
    om_m, el_m = params.omega[XM], params.ell[XM]
    om_p, el_p = params.omega[XP], params.ell[XP]
    rows = slice(GHOST, GHOST + M)
    own = slice(1, M + 2)      # owning cells of the minus side: indices 1..M+1
    um = un[own, rows] - 0.5 * el_m[own, rows] * (
        om_m[own, rows] * (un[0:M + 1, rows] - uo[own, rows])
        + (1.0 - om_m[own, rows]) * (un[own, rows] - uo[2:M + 3, rows])
    )
    nxt = slice(2, M + 3)      # owning cells of the plus side: indices 2..M+2
    up = un[nxt, rows] - 0.5 * el_p[nxt, rows] * (
        om_p[nxt, rows] * (un[3:M + 4, rows] - uo[nxt, rows])
        + (1.0 - om_p[nxt, rows]) * (un[nxt, rows] - uo[own, rows])
    )
    return um, up


def _faces_y(un: np.ndarray, uo: np.ndarray, params: ParamField):
    """Minus and plus values at all y faces; shape (M, M+1)."""
    M = un.shape[0] - 2 * GHOST
    om_m, el_m = params.omega[YM], params.ell[YM]
    om_p, el_p = params.omega[YP], params.ell[YP]
    cols = slice(GHOST, GHOST + M)
    own = slice(1, M + 2)
    um = un[cols, own] - 0.5 * el_m[cols, own] * (
        om_m[cols, own] * (un[cols, 0:M + 1] - uo[cols, own])
        + (1.0 - om_m[cols, own]) * (un[cols, own] - uo[cols, 2:M + 3])
    )
    nxt = slice(2, M + 3)
    up = un[cols, nxt] - 0.5 * el_p[cols, nxt] * (
        om_p[cols, nxt] * (un[cols, 3:M + 4] - uo[cols, nxt])
        + (1.0 - om_p[cols, nxt]) * (un[cols, nxt] - uo[cols, own])
    )
    return um, up


def residual_field_advection(
    u_new: CellField,
    u_old: CellField,
    params: ParamField,
    courant: CourantData,
    tau: float,
) -> np.ndarray:
    """Residual of every interior cell equation of the linear scheme,
    shape (M, M)."""
    grid = u_new.grid
    M = grid.M
    um_x, up_x = _faces_x(u_new.data, u_old.data, params)
    um_y, up_y = _faces_y(u_new.data, u_old.data, params)
    # edge Courant arrays are cell-aligned: face right of cell index a is at
    # slot a; face k (k = 0..M, between indices k+1, k+2) is at slot k+1.
    rows = slice(GHOST, GHOST + M)
    cxp = courant.cx_plus[1:M + 2, rows]
    cxm = courant.cx_minus[1:M + 2, rows]
    cyp = courant.cy_plus[rows, 1:M + 2]
    cym = courant.cy_minus[rows, 1:M + 2]
    flux_x = cxp * um_x + cxm * up_x
    flux_y = cyp * um_y + cym * up_y
    interior = grid.interior()
    return (
        u_new.data[interior]
        - u_old.data[interior]
        + (flux_x[1:, :] - flux_x[:-1, :])
        + (flux_y[:, 1:] - flux_y[:, :-1])
    )


def residual_field_conservation(
    u_new: CellField,
    u_old: CellField,
    params: ParamField,
    problem: ProblemSpec,
    tau: float,
) -> np.ndarray:
    """Residual of every interior cell equation of the nonlinear scheme."""
    grid = u_new.grid
    M = grid.M
    lam = tau / grid.h
    um_x, up_x = _faces_x(u_new.data, u_old.data, params)
    um_y, up_y = _faces_y(u_new.data, u_old.data, params)
    F = problem.numerical_flux_x(um_x, up_x)
    G = problem.numerical_flux_y(um_y, up_y)
    interior = grid.interior()
    return (
        u_new.data[interior]
        - u_old.data[interior]
        + lam * (F[1:, :] - F[:-1, :])
        + lam * (G[:, 1:] - G[:, :-1])
    )


def residual_field(
    u_new: CellField,
    u_old: CellField,
    params: ParamField,
    problem: ProblemSpec,
    courant: CourantData,
    tau: float,
) -> np.ndarray:
    if problem.kind == LINEAR_ADVECTION:
        return residual_field_advection(u_new, u_old, params, courant, tau)
    return residual_field_conservation(u_new, u_old, params, problem, tau)


# ---------------------------------------------------------------------------
# Single-cell residual (paper-indexed), used by tests and diagnostics
# ---------------------------------------------------------------------------


@dataclass
class CellResidualInputs:
    """Bundle for evaluating one interior cell's equation at a candidate value.

    ``i`` and ``j`` use 1-based interior indexing; the candidate value
    ``u_new`` overrides the stored entry of the new field at that cell.
    """

    u_new_field: CellField
    u_old_field: CellField
    i: int
    j: int
    u_new: float
    params: ParamField
    tau: float
    problem: ProblemSpec
    courant: Optional[CourantData] = None


def _cell_residual(inputs: CellResidualInputs) -> float:
    field = inputs.u_new_field
    a = inputs.i + GHOST - 1
    b = inputs.j + GHOST - 1
    saved = field.data[a, b]
    field.data[a, b] = inputs.u_new
    try:
        res = residual_field(
            field, inputs.u_old_field, inputs.params, inputs.problem,
            inputs.courant, inputs.tau,
        )
    finally:
        field.data[a, b] = saved
    return float(res[inputs.i - 1, inputs.j - 1])


def cell_residual_advection(inputs: CellResidualInputs) -> float:
    if inputs.problem.kind != LINEAR_ADVECTION:
        raise UsageError("cell_residual_advection requires a linear advection problem")
    if inputs.courant is None:
        raise ConfigurationError("courant data is required for the linear residual")
    return _cell_residual(inputs)


def cell_residual_conservation(inputs: CellResidualInputs) -> float:
    if inputs.problem.kind != SCALAR_CONSERVATION:
        raise UsageError("cell_residual_conservation requires a conservation problem")
    return _cell_residual(inputs)
