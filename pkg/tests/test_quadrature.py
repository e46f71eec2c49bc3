import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vdwaccel.quadrature import (
    OscillatoryIntegrand,
    QuadratureError,
    QuadratureSpec,
    abel_moment,
    default_regulators,
    integrate_damped,
    integrate_oscillatory,
    laplace_moment,
)


def _moment_integrand(n, R):
    return lambda u: u**n * np.exp(-2.0 * u * R)


def test_exponential_integrates_to_inverse_2R():
    R = 3.5
    res = integrate_damped(lambda u: np.exp(-2 * u * R), 1 / (2 * R))
    assert res.value == pytest.approx(1 / (2 * R), rel=1e-12)
    assert res.converged


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("R", [1e-3, 1e-1, 1.0, 10.0, 1e3])
def test_damped_laplace_moments(n, R):
    res = integrate_damped(_moment_integrand(n, R), 1 / (2 * R))
    assert abs(res.value / laplace_moment(n, R) - 1) < 1e-9


@settings(max_examples=40, deadline=None)
@given(n=st.integers(0, 6), log_r=st.floats(-3.0, 3.0))
def test_damped_moments_any_scale(n, log_r):
    R = 10.0**log_r
    res = integrate_damped(_moment_integrand(n, R), 1 / (2 * R))
    assert abs(res.value / laplace_moment(n, R) - 1) < 1e-9


@pytest.mark.parametrize("k0", [1e-2, 1.0, 5e4])
def test_damped_lorentz_square(k0):
    alpha0 = 2.5
    res = integrate_damped(lambda u: (alpha0 / (1 + (u / k0) ** 2)) ** 2, k0)
    assert res.value == pytest.approx(math.pi * alpha0**2 * k0 / 4, rel=1e-8)


def test_damped_converged_implies_tolerance():
    spec = QuadratureSpec(rel_tol=1e-7)
    res = integrate_damped(_moment_integrand(3, 0.7), 1 / 1.4, spec)
    assert res.converged
    assert res.error_estimate <= max(spec.rel_tol * abs(res.value), spec.abs_tol)
    assert res.error_estimate >= 0


def test_damped_raises_when_budget_exhausted():
    spec = QuadratureSpec(rel_tol=1e-14, max_subdivisions=1)
    with pytest.raises(QuadratureError):
        integrate_damped(lambda u: np.abs(np.sin(50 * u)) * np.exp(-u), 1.0, spec)


def test_damped_rejects_bad_scale():
    with pytest.raises(ValueError):
        integrate_damped(lambda u: np.exp(-u), 0.0)


@pytest.mark.parametrize(
    "n, kind, R, expected",
    [
        (3, "cos", 1.0, 3 / 8),
        (0, "sin", 2.0, 1 / 4),
        (2, "sin", 0.5, -1 / (4 * 0.5**3)),
    ],
)
def test_oscillatory_worked_examples(n, kind, R, expected):
    trig = np.sin if kind == "sin" else np.cos
    res = integrate_oscillatory(lambda k: k**n * trig(2 * k * R), R)
    assert res.value == pytest.approx(expected, rel=1e-3)


@pytest.mark.parametrize("kind", ["sin", "cos"])
@pytest.mark.parametrize("n", range(5))
@pytest.mark.parametrize("R", [0.3, 1.0, 40.0])
def test_oscillatory_abel_table(n, kind, R):
    trig = np.sin if kind == "sin" else np.cos
    exact = abel_moment(n, R, kind)
    res = integrate_oscillatory(lambda k: k**n * trig(2 * k * R), R)
    scale = math.factorial(n) / (2 * R) ** (n + 1)
    assert abs(res.value - exact) < 1e-3 * scale


@pytest.mark.parametrize("kind", ["sin", "cos"])
@pytest.mark.parametrize("n", range(5))
def test_structured_integrand_is_tighter(n, kind):
    R = 1.3
    poly = lambda k: k**n  # noqa: E731
    f = OscillatoryIntegrand(p_sin=poly) if kind == "sin" else OscillatoryIntegrand(p_cos=poly)
    res = integrate_oscillatory(f, R)
    scale = math.factorial(n) / (2 * R) ** (n + 1)
    assert abs(res.value - abel_moment(n, R, kind)) < 1e-5 * scale


def test_oscillatory_invariant_under_halved_regulator():
    R = 2.0
    f = lambda k: k**3 * np.sin(2 * k * R) + k * np.cos(2 * k * R)  # noqa: E731
    base = integrate_oscillatory(f, R)
    spec = QuadratureSpec(regulator_sequence=tuple(default_regulators(R) / 2))
    half = integrate_oscillatory(f, R, spec)
    assert half.value == pytest.approx(base.value, rel=1e-3)


@pytest.mark.parametrize("f", [lambda k: k, lambda k: np.ones_like(k)])
def test_oscillatory_rejects_non_abel_summable(f):
    with pytest.raises(QuadratureError):
        integrate_oscillatory(f, 1.0)


def test_oscillatory_requires_geometric_regulators():
    spec = QuadratureSpec(regulator_sequence=(1.0, 0.5, 0.2))
    with pytest.raises(ValueError):
        integrate_oscillatory(lambda k: np.sin(2 * k), 1.0, spec)


def test_results_are_bit_identical():
    f = lambda k: k**2 * np.cos(2 * k * 1.7)  # noqa: E731
    a = integrate_oscillatory(f, 1.7)
    b = integrate_oscillatory(f, 1.7)
    assert a == b
    g = _moment_integrand(4, 0.2)
    assert integrate_damped(g, 2.5) == integrate_damped(g, 2.5)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"rel_tol": 0.0},
        {"abs_tol": -1.0},
        {"max_subdivisions": 0},
        {"regulator_sequence": (1.0,)},
        {"regulator_sequence": (0.5, 1.0)},
        {"regulator_sequence": (1.0, -0.5)},
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)


def test_default_regulators_are_geometric_and_decreasing():
    eps = default_regulators(4.0)
    assert len(eps) == 8
    assert eps[0] == pytest.approx(2.0)
    np.testing.assert_allclose(eps[:-1] / eps[1:], 2.0)
