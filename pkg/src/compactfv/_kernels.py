"""Numba-compiled inner loops: Gauss-Seidel sweeps and the ell recurrences.

All kernels operate on padded arrays laid out as in :mod:`compactfv.grid`
(axis 0 = x, two ghost layers, interior at indices 2..M+1).  Parameter
arrays are stacked (4, n, n) with slots XM, XP, YM, YP.
"""

from __future__ import annotations

import numpy as np
from numba import njit

XM, XP, YM, YP = 0, 1, 2, 3

_ORDERINGS = {
    1: (1, 1),
    2: (-1, 1),
    3: (-1, -1),
    4: (1, -1),
}


def sweep_ranges(ordering: int, M: int):
    """Array-index iteration bounds (start, stop, step) per axis for one of
    the four corner orderings."""
    try:
        si, sj = _ORDERINGS[ordering]
    except KeyError:
        raise ValueError(f"ordering must be 1..4, got {ordering}") from None
    lo, hi = 2, M + 2
    ri = (lo, hi, 1) if si > 0 else (hi - 1, lo - 1, -1)
    rj = (lo, hi, 1) if sj > 0 else (hi - 1, lo - 1, -1)
    return ri, rj


@njit(cache=True, inline="always")
def _recon_m_x(un, uo, a, b, om, el):
    return un[a, b] - 0.5 * el * (
        om * (un[a - 1, b] - uo[a, b]) + (1.0 - om) * (un[a, b] - uo[a + 1, b])
    )


@njit(cache=True, inline="always")
def _recon_p_x(un, uo, a, b, om, el):
    # face between cells a and a+1; om, el belong to cell a+1
    return un[a + 1, b] - 0.5 * el * (
        om * (un[a + 2, b] - uo[a + 1, b]) + (1.0 - om) * (un[a + 1, b] - uo[a, b])
    )


@njit(cache=True, inline="always")
def _recon_m_y(un, uo, a, b, om, el):
    return un[a, b] - 0.5 * el * (
        om * (un[a, b - 1] - uo[a, b]) + (1.0 - om) * (un[a, b] - uo[a, b + 1])
    )


@njit(cache=True, inline="always")
def _recon_p_y(un, uo, a, b, om, el):
    return un[a, b + 1] - 0.5 * el * (
        om * (un[a, b + 2] - uo[a, b + 1]) + (1.0 - om) * (un[a, b + 1] - uo[a, b])
    )


@njit(cache=True, inline="always")
def _residual_linear(un, uo, a, b, cxp, cxm, cyp, cym, om, el):
    fxr = cxp[a, b] * _recon_m_x(un, uo, a, b, om[XM, a, b], el[XM, a, b]) + cxm[
        a, b
    ] * _recon_p_x(un, uo, a, b, om[XP, a + 1, b], el[XP, a + 1, b])
    fxl = cxp[a - 1, b] * _recon_m_x(un, uo, a - 1, b, om[XM, a - 1, b], el[XM, a - 1, b]) + cxm[
        a - 1, b
    ] * _recon_p_x(un, uo, a - 1, b, om[XP, a, b], el[XP, a, b])
    fyr = cyp[a, b] * _recon_m_y(un, uo, a, b, om[YM, a, b], el[YM, a, b]) + cym[
        a, b
    ] * _recon_p_y(un, uo, a, b, om[YP, a, b + 1], el[YP, a, b + 1])
    fyl = cyp[a, b - 1] * _recon_m_y(un, uo, a, b - 1, om[YM, a, b - 1], el[YM, a, b - 1]) + cym[
        a, b - 1
    ] * _recon_p_y(un, uo, a, b - 1, om[YP, a, b], el[YP, a, b])
    return un[a, b] - uo[a, b] + (fxr - fxl) + (fyr - fyl)


@njit(cache=True)
def sweep_linear(un, uo, cxp, cxm, cyp, cym, om, el, i_range, j_range):
    """One Gauss-Seidel sweep for linear advection: each visited cell's affine
    equation is solved exactly in closed form."""
    i0, i1, istep = i_range
    j0, j1, jstep = j_range
    for a in range(i0, i1, istep):
        for b in range(j0, j1, jstep):
            slope = (
                1.0
                + cxp[a, b] * (1.0 - 0.5 * el[XM, a, b] * (1.0 - om[XM, a, b]))
                - cxm[a - 1, b] * (1.0 - 0.5 * el[XP, a, b] * (1.0 - om[XP, a, b]))
                + cyp[a, b] * (1.0 - 0.5 * el[YM, a, b] * (1.0 - om[YM, a, b]))
                - cym[a, b - 1] * (1.0 - 0.5 * el[YP, a, b] * (1.0 - om[YP, a, b]))
            )
            res = _residual_linear(un, uo, a, b, cxp, cxm, cyp, cym, om, el)
            un[a, b] -= res / slope


@njit(cache=True, inline="always")
def _godunov_burgers(um, up):
    hm = 0.5 * um * um
    hp = 0.5 * up * up
    if um <= up:
        if um <= 0.0 <= up:
            return 0.0
        return hm if hm < hp else hp
    return hm if hm > hp else hp


@njit(cache=True, inline="always")
def _residual_burgers(un, uo, a, b, lam, om, el):
    fxr = _godunov_burgers(
        _recon_m_x(un, uo, a, b, om[XM, a, b], el[XM, a, b]),
        _recon_p_x(un, uo, a, b, om[XP, a + 1, b], el[XP, a + 1, b]),
    )
    fxl = _godunov_burgers(
        _recon_m_x(un, uo, a - 1, b, om[XM, a - 1, b], el[XM, a - 1, b]),
        _recon_p_x(un, uo, a - 1, b, om[XP, a, b], el[XP, a, b]),
    )
    fyr = _godunov_burgers(
        _recon_m_y(un, uo, a, b, om[YM, a, b], el[YM, a, b]),
        _recon_p_y(un, uo, a, b, om[YP, a, b + 1], el[YP, a, b + 1]),
    )
    fyl = _godunov_burgers(
        _recon_m_y(un, uo, a, b - 1, om[YM, a, b - 1], el[YM, a, b - 1]),
        _recon_p_y(un, uo, a, b - 1, om[YP, a, b], el[YP, a, b]),
    )
    return un[a, b] - uo[a, b] + lam * (fxr - fxl) + lam * (fyr - fyl)


@njit(cache=True, inline="always")
def _res_burgers_at(un, uo, a, b, lam, om, el, u):
    saved = un[a, b]
    un[a, b] = u
    r = _residual_burgers(un, uo, a, b, lam, om, el)
    un[a, b] = saved
    return r


@njit(cache=True)
def sweep_burgers(un, uo, lam, om, el, i_range, j_range, tol, max_iter):
    """One nonlinear Gauss-Seidel sweep: Newton with a finite-difference
    derivative per cell, bisection fallback on an expanded stencil bracket.

    Returns (total Newton iterations, max iterations in one cell, number of
    bisection fallbacks, number of failed cells); on failure the first failed
    cell is encoded as -(a * n + b) in the last slot instead.
    """
    i0, i1, istep = i_range
    j0, j1, jstep = j_range
    n = un.shape[0]
    total_it = 0
    max_it = 0
    fallbacks = 0
    for a in range(i0, i1, istep):
        for b in range(j0, j1, jstep):
            lo = un[a, b]
            hi = un[a, b]
            for da in (-2, -1, 0, 1, 2):
                for arr in (un, uo):
                    v1 = arr[a + da, b]
                    v2 = arr[a, b + da]
                    lo = min(lo, v1, v2)
                    hi = max(hi, v1, v2)
            lo -= 1.0
            hi += 1.0
            u = un[a, b]
            converged = False
            it = 0
            while it < max_iter:
                r = _res_burgers_at(un, uo, a, b, lam, om, el, u)
                if abs(r) < tol:
                    converged = True
                    break
                du = 1e-7 * max(1.0, abs(u))
                dr = (
                    _res_burgers_at(un, uo, a, b, lam, om, el, u + du)
                    - _res_burgers_at(un, uo, a, b, lam, om, el, u - du)
                ) / (2.0 * du)
                if dr <= 0.0 or not np.isfinite(dr):
                    break
                u_next = u - r / dr
                if not (lo <= u_next <= hi) or not np.isfinite(u_next):
                    break
                u = u_next
                it += 1
            total_it += it
            if it > max_it:
                max_it = it
            if not converged:
                # bisection on an expanding bracket; the residual is
                # monotone nondecreasing in the unknown
                blo = lo
                bhi = hi
                rlo = _res_burgers_at(un, uo, a, b, lam, om, el, blo)
                rhi = _res_burgers_at(un, uo, a, b, lam, om, el, bhi)
                expand = 0
                while rlo * rhi > 0.0 and expand < 60:
                    width = bhi - blo
                    blo -= width
                    bhi += width
                    rlo = _res_burgers_at(un, uo, a, b, lam, om, el, blo)
                    rhi = _res_burgers_at(un, uo, a, b, lam, om, el, bhi)
                    expand += 1
                if rlo * rhi > 0.0:
                    return total_it, max_it, fallbacks, -(a * n + b)
                for _ in range(200):
                    mid = 0.5 * (blo + bhi)
                    rm = _res_burgers_at(un, uo, a, b, lam, om, el, mid)
                    if abs(rm) < tol or (bhi - blo) < 1e-15:
                        break
                    if rlo * rm <= 0.0:
                        bhi = mid
                        rhi = rm
                    else:
                        blo = mid
                        rlo = rm
                u = 0.5 * (blo + bhi)
                fallbacks += 1
            un[a, b] = u
    return total_it, max_it, fallbacks, 0


@njit(cache=True)
def ell_recurrences(ell, om, r, cell_C, M):
    """Fill all four ell slots via the upstream recurrences.

    Values are produced for cells 0..M+1 (array 1..M+2); the outermost ring
    stays 0, which is also the upstream seed at the range boundary.
    """
    lo = 1
    hi = M + 3  # exclusive
    for b in range(lo, hi):
        # x,-: ascending i, upstream (a-1, b)
        for a in range(lo, hi):
            ell[XM, a, b] = _ell_value(
                om[XM, a, b], r[XM, a, b], cell_C[a, b],
                ell[XM, a - 1, b], om[XM, a - 1, b], r[XM, a - 1, b],
            )
        # x,+: descending i, upstream (a+1, b)
        for a in range(hi - 1, lo - 1, -1):
            ell[XP, a, b] = _ell_value(
                om[XP, a, b], r[XP, a, b], cell_C[a, b],
                ell[XP, a + 1, b], om[XP, a + 1, b], r[XP, a + 1, b],
            )
    for a in range(lo, hi):
        # y,-: ascending j, upstream (a, b-1)
        for b in range(lo, hi):
            ell[YM, a, b] = _ell_value(
                om[YM, a, b], r[YM, a, b], cell_C[a, b],
                ell[YM, a, b - 1], om[YM, a, b - 1], r[YM, a, b - 1],
            )
        # y,+: descending j, upstream (a, b+1)
        for b in range(hi - 1, lo - 1, -1):
            ell[YP, a, b] = _ell_value(
                om[YP, a, b], r[YP, a, b], cell_C[a, b],
                ell[YP, a, b + 1], om[YP, a, b + 1], r[YP, a, b + 1],
            )


@njit(cache=True, inline="always")
def _ell_value(om, r, C, ell_up, om_up, r_up):
    if not np.isfinite(r):
        # degenerate ratio: (1 - om)/r vanishes; with om = 0 the prefactor
        # is singular, so fall back to first order
        if om <= 0.0:
            return 0.0
        denom_fac = om
    elif r <= 0.0:
        return 0.0
    else:
        denom_fac = om + (1.0 - om) / r
        if denom_fac <= 0.0:
            return 0.0
    if ell_up <= 0.0:
        upstream = 0.0
    elif not np.isfinite(r_up):
        if om_up > 0.0:
            return 1.0  # unbounded upstream credit: clamp
        upstream = ell_up
    else:
        upstream = ell_up * (om_up * r_up + 1.0 - om_up)
    val = (2.0 / C + upstream) / denom_fac
    if val < 0.0:
        return 0.0
    if val > 1.0:
        return 1.0
    return val
