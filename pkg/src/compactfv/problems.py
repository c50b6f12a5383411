"""PDE problem definitions: fluxes, velocity fields, presets, Godunov flux.

Two problem kinds are supported: linear advection with a space dependent
velocity field, and scalar conservation laws with state dependent fluxes.
The five built-in presets cover a rotating Gaussian, rotating shapes with
discontinuities, and three Burgers-equation experiments (smooth, rarefaction,
shock).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigurationError, EvaluationError, UsageError

LINEAR_ADVECTION = "linear_advection"
SCALAR_CONSERVATION = "scalar_conservation"


@dataclass
class ProblemSpec:
    """Everything the solver needs to know about one PDE instance.

    For linear advection, ``velocity`` is required and the flux callables are
    unused.  For scalar conservation laws, ``flux_f``/``flux_g`` and their
    derivatives are required; ``flux_code`` selects the compiled fast path
    ("burgers" for f = g = u^2/2).
    """

    name: str
    kind: str
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    final_time: float
    initial: Callable
    exact: Optional[Callable] = None
    velocity: Optional[Callable] = None
    flux_f: Optional[Callable] = None
    flux_g: Optional[Callable] = None
    dflux_f: Optional[Callable] = None
    dflux_g: Optional[Callable] = None
    flux_code: Optional[str] = None
    shock_speeds: Optional["ShockSpeeds"] = None

    def __post_init__(self) -> None:
        if self.kind == LINEAR_ADVECTION:
            if self.velocity is None:
                raise ConfigurationError("linear advection requires a velocity field")
        elif self.kind == SCALAR_CONSERVATION:
            if None in (self.flux_f, self.flux_g, self.dflux_f, self.dflux_g):
                raise ConfigurationError(
                    "scalar conservation requires flux functions and derivatives"
                )
        else:
            raise ConfigurationError(f"unknown problem kind {self.kind!r}")

    def numerical_flux_x(self, u_minus, u_plus):
        """Godunov flux in the x direction for reconstructed interface values."""
        if self.flux_code == "burgers":
            return burgers_numerical_flux(u_minus, u_plus)
        return _godunov_vectorized(self.flux_f, self.dflux_f, u_minus, u_plus)

    def numerical_flux_y(self, u_minus, u_plus):
        if self.flux_code == "burgers":
            return burgers_numerical_flux(u_minus, u_plus)
        return _godunov_vectorized(self.flux_g, self.dflux_g, u_minus, u_plus)


@dataclass(frozen=True)
class ShockSpeeds:
    """Rankine-Hugoniot speeds for the three-state shock experiment."""

    s_x1: float
    s_x2: float
    s_y1: float
    s_y2: float


def split_velocity(v):
    """Split a velocity component into nonnegative and nonpositive parts."""
    v = np.asarray(v, dtype=float)
    return np.maximum(0.0, v), np.minimum(0.0, v)


def _flux_critical_points(dflux, lo: float, hi: float) -> list[float]:
    """Roots of the flux derivative inside (lo, hi), located by sign changes."""
    if hi - lo < 1e-300:
        return []
    xs = np.linspace(lo, hi, 33)
    ds = np.asarray([dflux(x) for x in xs], dtype=float)
    roots = []
    for k in range(len(xs) - 1):
        if ds[k] == 0.0:
            roots.append(float(xs[k]))
        elif ds[k] * ds[k + 1] < 0.0:
            roots.append(float(brentq(dflux, xs[k], xs[k + 1])))
    if ds[-1] == 0.0:
        roots.append(float(xs[-1]))
    return roots


def godunov_flux(flux, dflux, u_minus: float, u_plus: float) -> float:
    """Godunov two-point flux: min of the flux over [u-, u+] when u- <= u+,
    max over [u+, u-] otherwise.  Interior extrema are located via roots of
    the flux derivative."""
    lo, hi = (u_minus, u_plus) if u_minus <= u_plus else (u_plus, u_minus)
    candidates = [flux(lo), flux(hi)]
    candidates += [flux(r) for r in _flux_critical_points(dflux, lo, hi)]
    return min(candidates) if u_minus <= u_plus else max(candidates)


def _godunov_vectorized(flux, dflux, u_minus, u_plus):
    um = np.asarray(u_minus, dtype=float)
    up = np.asarray(u_plus, dtype=float)
    out = np.empty(np.broadcast(um, up).shape)
    flat = np.nditer([np.broadcast_to(um, out.shape), np.broadcast_to(up, out.shape)],
                     flags=["multi_index"])
    for a, b in flat:
        out[flat.multi_index] = godunov_flux(flux, dflux, float(a), float(b))
    if out.shape == ():
        return float(out)
    return out


def burgers_numerical_flux(u_minus, u_plus):
    """Closed-form Godunov flux for f(u) = u^2 / 2."""
    um = np.asarray(u_minus, dtype=float)
    up = np.asarray(u_plus, dtype=float)
    hm = 0.5 * um * um
    hp = 0.5 * up * up
    fmin = np.where((um <= 0.0) & (0.0 <= up), 0.0, np.minimum(hm, hp))
    out = np.where(um <= up, fmin, np.maximum(hm, hp))
    if out.shape == ():
        return float(out)
    return out


# ---------------------------------------------------------------------------
# Preset problems
# ---------------------------------------------------------------------------


def _rotation_velocity(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return -2.0 * np.pi * y, 2.0 * np.pi * x


def _rotated_exact(initial):
    """Exact advection solution for the rotating velocity field: evaluate the
    initial condition at the back-rotated point."""

    def exact(x, y, t):
        c = np.cos(2.0 * np.pi * t)
        s = np.sin(2.0 * np.pi * t)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return initial(x * c + y * s, y * c - x * s)

    return exact


def _gaussian_initial(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.exp(10.0 * (-((x - 0.25) ** 2) - (y - 0.25) ** 2))


def preset_rotating_gaussian() -> ProblemSpec:
    return ProblemSpec(
        name="rotating-gaussian",
        kind=LINEAR_ADVECTION,
        x_lo=-1.0, x_hi=1.0, y_lo=-1.0, y_hi=1.0,
        final_time=0.25,
        initial=_gaussian_initial,
        exact=_rotated_exact(_gaussian_initial),
        velocity=_rotation_velocity,
    )


def _shapes_initial(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gauss = np.exp(100.0 * (-((x - 0.5) ** 2) - (y - 0.5) ** 2))
    d_cone = np.sqrt((x + 0.5) ** 2 + (y - 0.5) ** 2)
    d_sphere = np.sqrt((x + 0.5) ** 2 + (y + 0.5) ** 2)
    d_circle = np.sqrt((x - 0.5) ** 2 + (y + 0.5) ** 2)
    cone = 1.0 - d_cone / 0.25
    sphere = np.sqrt(np.clip(1.0 - (d_sphere / 0.25) ** 2, 0.0, None))
    c1 = (x >= 0) & (y >= 0) & ((x - 0.5) ** 2 + (y - 0.5) ** 2 < 0.3**2)
    c2 = (x < 0) & (y >= 0) & (d_cone <= 0.25)
    c3 = (x < 0) & (y < 0) & (d_sphere <= 0.25)
    c4 = (x >= 0) & (y < 0) & (d_circle <= 0.25)
    out = np.select([c1, c2, c3, c4], [gauss, cone, sphere, np.ones_like(x + y)], 0.0)
    if out.shape == ():
        return float(out)
    return out


def preset_rotating_shapes() -> ProblemSpec:
    return ProblemSpec(
        name="rotating-shapes",
        kind=LINEAR_ADVECTION,
        x_lo=-1.0, x_hi=1.0, y_lo=-1.0, y_hi=1.0,
        final_time=0.25,
        initial=_shapes_initial,
        exact=_rotated_exact(_shapes_initial),
        velocity=_rotation_velocity,
    )


def _burgers_sine_initial(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return 0.5 * np.sin(np.pi * x) * np.sin(np.pi * y)


def _burgers_sine_exact(x, y, t, tol: float = 1e-13, max_iter: int = 50):
    """Solve u = sin(pi (x - u t)) sin(pi (y - u t)) / 2 by damped Newton with
    a bisection fallback on [-1/2, 1/2]."""
    x_in = np.asarray(x, dtype=float)
    y_in = np.asarray(y, dtype=float)
    out_shape = np.broadcast(x_in, y_in).shape
    x, y = np.broadcast_arrays(np.atleast_1d(x_in), np.atleast_1d(y_in))

    def residual(u):
        return u - 0.5 * np.sin(np.pi * (x - u * t)) * np.sin(np.pi * (y - u * t))

    u = np.array(_burgers_sine_initial(x, y), dtype=float, copy=True)
    if t == 0.0:
        return u.reshape(out_shape) if out_shape else float(u.flat[0])
    for _ in range(max_iter):
        r = residual(u)
        if np.all(np.abs(r) < tol):
            break
        # d/du of the implicit relation
        a = np.pi * (x - u * t)
        b = np.pi * (y - u * t)
        dr = 1.0 + 0.5 * np.pi * t * (np.cos(a) * np.sin(b) + np.sin(a) * np.cos(b))
        step = np.where(np.abs(dr) > 1e-14, r / np.where(dr == 0.0, 1.0, dr), r)
        u = u - np.clip(step, -0.25, 0.25)
    bad = np.abs(residual(u)) >= tol
    if bad.any():
        flat_bad = np.argwhere(bad)
        for idx in map(tuple, flat_bad):
            xi, yi = x[idx], y[idx]

            def res1(v, xi=xi, yi=yi):
                return v - 0.5 * np.sin(np.pi * (xi - v * t)) * np.sin(np.pi * (yi - v * t))

            try:
                u[idx] = brentq(res1, -0.5, 0.5, xtol=1e-15)
            except ValueError as exc:
                raise EvaluationError(
                    f"characteristic solve failed at (x={xi}, y={yi}, t={t})"
                ) from exc
    return u.reshape(out_shape) if out_shape else float(u.flat[0])


def _burgers_flux(u):
    u = np.asarray(u, dtype=float)
    return 0.5 * u * u


def _burgers_dflux(u):
    return np.asarray(u, dtype=float)


def preset_burgers_smooth() -> ProblemSpec:
    return ProblemSpec(
        name="burgers-smooth",
        kind=SCALAR_CONSERVATION,
        x_lo=-1.0, x_hi=1.0, y_lo=-1.0, y_hi=1.0,
        final_time=0.5,
        initial=_burgers_sine_initial,
        exact=_burgers_sine_exact,
        flux_f=_burgers_flux, flux_g=_burgers_flux,
        dflux_f=_burgers_dflux, dflux_g=_burgers_dflux,
        flux_code="burgers",
    )


def _rarefaction_initial(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.where((x + y) / 2.0 < 0.0, -1.0, 1.0)
    if out.shape == ():
        return float(out)
    return out


def _rarefaction_exact(x, y, t):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if t == 0.0:
        return _rarefaction_initial(x, y)
    s = (x + y) / 2.0
    fan = (x + y) / (2.0 * t)
    out = np.where(s <= -t, -1.0, np.where(s <= t, fan, 1.0))
    if out.shape == ():
        return float(out)
    return out


def preset_rarefaction() -> ProblemSpec:
    return ProblemSpec(
        name="burgers-rarefaction",
        kind=SCALAR_CONSERVATION,
        x_lo=-1.0, x_hi=1.0, y_lo=-1.0, y_hi=1.0,
        final_time=0.4,
        initial=_rarefaction_initial,
        exact=_rarefaction_exact,
        flux_f=_burgers_flux, flux_g=_burgers_flux,
        dflux_f=_burgers_dflux, dflux_g=_burgers_dflux,
        flux_code="burgers",
    )


U_L1, U_L2, U_R2 = 1.0, 0.1, -0.5


def _shock_states(x, y, shift1: float, shift2: float, shift1d: float, shift2d: float):
    # Region tests are evaluated top-down, exactly as the piecewise definition
    # chains them with "or".
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    c1 = (x < -0.8 + shift1) | (y < -0.8 + shift1) | (x + y < -0.8 + shift1d)
    c2 = (x < 0.2 + shift2) | (y < 0.2 + shift2) | (x + y < 0.7 + shift2d)
    out = np.select([c1, c2], [U_L1, U_L2], U_R2)
    if out.shape == ():
        return float(out)
    return out


def preset_shock() -> ProblemSpec:
    s1 = (_burgers_flux(U_L1) - _burgers_flux(U_L2)) / (U_L1 - U_L2)
    s2 = (_burgers_flux(U_L2) - _burgers_flux(U_R2)) / (U_L2 - U_R2)
    speeds = ShockSpeeds(s_x1=s1, s_x2=s2, s_y1=s1, s_y2=s2)

    def initial(x, y):
        return _shock_states(x, y, 0.0, 0.0, 0.0, 0.0)

    def exact(x, y, t):
        return _shock_states(
            x, y,
            speeds.s_x1 * t, speeds.s_x2 * t,
            (speeds.s_x1 + speeds.s_y1) * t, (speeds.s_x2 + speeds.s_y2) * t,
        )

    return ProblemSpec(
        name="burgers-shock",
        kind=SCALAR_CONSERVATION,
        x_lo=-1.0, x_hi=1.0, y_lo=-1.0, y_hi=1.0,
        final_time=0.4,
        initial=initial,
        exact=exact,
        flux_f=_burgers_flux, flux_g=_burgers_flux,
        dflux_f=_burgers_dflux, dflux_g=_burgers_dflux,
        flux_code="burgers",
        shock_speeds=speeds,
    )


PRESETS = {
    "rotating-gaussian": preset_rotating_gaussian,
    "rotating-shapes": preset_rotating_shapes,
    "burgers-smooth": preset_burgers_smooth,
    "burgers-rarefaction": preset_rarefaction,
    "burgers-shock": preset_shock,
}


def get_problem(name: str) -> ProblemSpec:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown problem {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
    return factory()
