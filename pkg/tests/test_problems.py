import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compactfv import ConfigurationError, PRESETS, get_problem, godunov_flux
from compactfv.problems import (
    LINEAR_ADVECTION,
    SCALAR_CONSERVATION,
    ProblemSpec,
    burgers_numerical_flux,
    split_velocity,
)


def _burgers_flux(u):
    return 0.5 * u * u


def _burgers_dflux(u):
    return u


def test_all_presets_construct():
    assert set(PRESETS) == {
        "rotating-gaussian",
        "rotating-shapes",
        "burgers-smooth",
        "burgers-rarefaction",
        "burgers-shock",
    }
    for name in PRESETS:
        p = get_problem(name)
        assert p.name == name
        assert p.exact is not None


def test_unknown_preset_rejected():
    with pytest.raises(ConfigurationError):
        get_problem("no-such-problem")


def test_exact_matches_initial_at_t0():
    rng = np.random.default_rng(7)
    x = rng.uniform(-0.95, 0.95, 40)
    y = rng.uniform(-0.95, 0.95, 40)
    for name in PRESETS:
        p = get_problem(name)
        np.testing.assert_allclose(p.exact(x, y, 0.0), p.initial(x, y), atol=1e-14)


def test_rotation_exact_transports_values():
    p = get_problem("rotating-gaussian")
    # after a quarter turn the peak sits at (-0.25, 0.25)
    assert p.exact(-0.25, 0.25, 0.25) == pytest.approx(1.0)
    assert p.exact(0.25, 0.25, 0.25) < 0.1
    # a full turn restores the initial condition
    x = np.linspace(-0.9, 0.9, 13)
    np.testing.assert_allclose(p.exact(x, x, 1.0), p.initial(x, x), atol=1e-12)


def test_rotation_velocity_is_divergence_free_rigid_body():
    p = get_problem("rotating-gaussian")
    v, w = p.velocity(0.5, -0.25)
    assert v == pytest.approx(2.0 * np.pi * 0.25)
    assert w == pytest.approx(2.0 * np.pi * 0.5)


def test_shapes_initial_features():
    p = get_problem("rotating-shapes")
    assert p.initial(0.5, 0.5) == pytest.approx(1.0)       # Gaussian peak
    assert p.initial(-0.5, 0.5) == pytest.approx(1.0)      # cone apex
    assert p.initial(-0.5, -0.5) == pytest.approx(1.0)     # dome top
    assert p.initial(0.5, -0.5) == pytest.approx(1.0)      # flat disc
    assert p.initial(0.0, 0.95) == pytest.approx(0.0)      # background
    # cone profile is linear in the distance from its apex
    assert p.initial(-0.5 + 0.125, 0.5) == pytest.approx(0.5)
    # dome profile is a hemisphere
    assert p.initial(-0.5 + 0.125, -0.5) == pytest.approx(math.sqrt(1 - 0.25))


def test_burgers_smooth_exact_satisfies_characteristic_relation():
    p = get_problem("burgers-smooth")
    u = p.exact(0.5, 0.5, 0.1)
    res = u - 0.5 * math.sin(math.pi * (0.5 - u * 0.1)) * math.sin(
        math.pi * (0.5 - u * 0.1)
    )
    assert abs(res) < 1e-12
    xs = np.linspace(-0.99, 0.99, 21)
    X, Y = np.meshgrid(xs, xs)
    U = p.exact(X, Y, 0.3)
    R = U - 0.5 * np.sin(np.pi * (X - U * 0.3)) * np.sin(np.pi * (Y - U * 0.3))
    assert np.max(np.abs(R)) < 1e-11
    assert np.max(np.abs(U)) <= 0.5 + 1e-12


def test_rarefaction_exact_fan():
    p = get_problem("burgers-rarefaction")
    t = 0.4
    assert p.exact(-1.0, 0.0, t) == -1.0
    assert p.exact(1.0, 0.2, t) == 1.0
    # inside the fan the profile is (x + y) / (2 t)
    assert p.exact(0.1, 0.1, t) == pytest.approx(0.2 / (2 * t))
    assert p.exact(0.0, 0.0, t) == pytest.approx(0.0)


def test_shock_speeds_and_fronts():
    p = get_problem("burgers-shock")
    s = p.shock_speeds
    assert s.s_x1 == pytest.approx(0.55)
    assert s.s_x2 == pytest.approx(-0.2)
    assert s.s_y1 == pytest.approx(0.55)
    assert s.s_y2 == pytest.approx(-0.2)
    # front positions along the row y = 0.5 at t = 0.4
    t = 0.4
    x1 = -0.8 + s.s_x1 * t
    x2 = 0.2 + s.s_x2 * t
    eps = 1e-6
    assert p.exact(x1 - eps, 0.5, t) == pytest.approx(1.0)
    assert p.exact(x1 + eps, 0.5, t) == pytest.approx(0.1)
    assert p.exact(x2 - eps, 0.5, t) == pytest.approx(0.1)
    assert p.exact(x2 + eps, 0.5, t) == pytest.approx(-0.5)


def test_split_velocity():
    vp, vm = split_velocity(np.array([-2.0, 0.0, 3.0]))
    np.testing.assert_array_equal(vp, [0.0, 0.0, 3.0])
    np.testing.assert_array_equal(vm, [-2.0, 0.0, 0.0])
    assert np.all(vp + vm == np.array([-2.0, 0.0, 3.0]))


def test_godunov_flux_hand_values():
    # transonic rarefaction picks the sonic point
    assert godunov_flux(_burgers_flux, _burgers_dflux, -1.0, 1.0) == pytest.approx(0.0)
    # shock picks the larger flux
    assert godunov_flux(_burgers_flux, _burgers_dflux, 1.0, -1.0) == pytest.approx(0.5)
    # consistent for equal states
    assert godunov_flux(_burgers_flux, _burgers_dflux, 0.3, 0.3) == pytest.approx(0.045)


@given(
    um=st.floats(-3.0, 3.0, allow_nan=False),
    up=st.floats(-3.0, 3.0, allow_nan=False),
)
@settings(max_examples=200, deadline=None)
def test_burgers_flux_matches_generic_godunov(um, up):
    fast = burgers_numerical_flux(um, up)
    generic = godunov_flux(_burgers_flux, _burgers_dflux, um, up)
    assert fast == pytest.approx(generic, abs=1e-12)


@given(u=st.floats(-5.0, 5.0, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_burgers_flux_consistency(u):
    assert burgers_numerical_flux(u, u) == pytest.approx(0.5 * u * u, abs=1e-13)


def test_burgers_flux_monotonicity():
    us = np.linspace(-1.5, 1.5, 25)
    for b in us:
        vals = [burgers_numerical_flux(a, b) for a in us]
        assert all(v2 >= v1 - 1e-13 for v1, v2 in zip(vals, vals[1:]))
    for a in us:
        vals = [burgers_numerical_flux(a, b) for b in us]
        assert all(v2 <= v1 + 1e-13 for v1, v2 in zip(vals, vals[1:]))


def test_problem_spec_validation():
    with pytest.raises(ConfigurationError):
        ProblemSpec(
            name="bad", kind=LINEAR_ADVECTION,
            x_lo=0, x_hi=1, y_lo=0, y_hi=1, final_time=1.0,
            initial=lambda x, y: x,
        )
    with pytest.raises(ConfigurationError):
        ProblemSpec(
            name="bad", kind=SCALAR_CONSERVATION,
            x_lo=0, x_hi=1, y_lo=0, y_hi=1, final_time=1.0,
            initial=lambda x, y: x, flux_f=_burgers_flux,
        )
    with pytest.raises(ConfigurationError):
        ProblemSpec(
            name="bad", kind="mystery",
            x_lo=0, x_hi=1, y_lo=0, y_hi=1, final_time=1.0,
            initial=lambda x, y: x,
        )
