import math
import warnings

import numpy as np
import pytest

from vdwaccel import energy as en
from vdwaccel import polarizability as pol
from vdwaccel.constants import GAUSSIAN, NATURAL
from vdwaccel.kinematics import Trajectory
from vdwaccel.quadrature import OscillatoryIntegrand


def pair(R, a=0.0, t=0.0, A=None, B=None):
    A = A or pol.static(1.0)
    B = B or A
    return en.AtomPair(A, B, R, Trajectory(a, 1.0), t, NATURAL)


def lorentz(k0=1.0, alpha0=1.0):
    return pol.lorentz(alpha0, k0)


# mode kernel

def test_kernel_small_argument():
    K = en.mode_kernel(1e-6, 1.0)
    np.testing.assert_allclose(np.diag(K), [2 / 3, 2 / 3, 2 / 3], rtol=1e-10)


def test_kernel_at_pi():
    assert en.mode_kernel(math.pi, 1.0)[2, 2] == pytest.approx(2 / math.pi**2, rel=1e-14)


def test_kernel_series_matches_closed_form_at_switch():
    lo, hi = en._kernel_scalars(np.array([0.1 - 1e-12, 0.1 + 1e-12]))
    assert lo[0] == pytest.approx(lo[1], rel=1e-12)
    assert hi[0] == pytest.approx(hi[1], rel=1e-9)


def test_kernel_decay():
    K = en.mode_kernel(1e4, 1.0)
    assert abs(K[2, 2]) < 3e-8
    assert not np.any(K - np.diag(np.diag(K)))


def test_kernel_domain():
    with pytest.raises(ValueError):
        en.mode_kernel(0.0, 1.0)


# pair construction

def test_pair_validation():
    with pytest.raises(ValueError):
        pair(0.0)
    with pytest.raises(ValueError):
        pair(1.0, t=-1.0)
    with pytest.raises(ValueError):
        en.AtomPair(pol.static(1), pol.static(1), 1.0, Trajectory(0.0, 1.0), 0.0, GAUSSIAN)


@pytest.mark.parametrize("R, label", [(0.01, "near"), (1.0, "intermediate"), (100.0, "far")])
def test_regime_labels(R, label):
    assert pair(R, A=lorentz()).validity.regime == label


# rest energy

@pytest.mark.parametrize("R", [1.0, 10.0, 100.0])
def test_static_rest_energy_far_zone(R):
    E = en.rest_energy(pair(R)).value
    assert E == pytest.approx(-23 / (4 * math.pi * R**7), rel=1e-12)


@pytest.mark.parametrize("R", [50.0, 100.0, 300.0])
def test_lorentz_rest_energy_far_zone(R):
    E = en.rest_energy(pair(R, A=lorentz())).value
    assert E == pytest.approx(-23 / (4 * math.pi * R**7), rel=5e-3)


def test_real_and_imaginary_axes_agree():
    p = pair(10.0)
    im = en.rest_energy(p, "imaginary")
    re = en.rest_energy(p, "real")
    assert abs(im.value - re.value) <= im.error_estimate + re.error_estimate


def test_real_axis_rejects_dispersive_models():
    with pytest.raises(en.StaticModelRequired):
        en.rest_energy(pair(10.0, A=lorentz()), "real")
    with pytest.raises(ValueError):
        en.rest_energy(pair(10.0), "complex")


def test_gaussian_units_rest_energy():
    R, alpha = 5e-5, 1e-24
    p = en.AtomPair(pol.static(alpha), pol.static(alpha), R, Trajectory(0.0), 0.0, GAUSSIAN)
    ref = -23 * GAUSSIAN.hbar * GAUSSIAN.c * alpha**2 / (4 * math.pi * R**7)
    assert en.rest_energy(p).value == pytest.approx(ref, rel=1e-12)


def test_tabulated_matches_lorentz():
    u = np.concatenate([[0.0], np.geomspace(1e-3, 1e3, 400)])
    tab = pol.tabulated(zip(u, 1 / (1 + u**2)))
    for R in (0.01, 1.0, 100.0):
        a = en.rest_energy(pair(R, A=tab)).value
        b = en.rest_energy(pair(R, A=lorentz())).value
        assert a == pytest.approx(b, rel=1e-6)


# accelerated energy

@pytest.mark.parametrize("a, t", [(0.0, 5.0), (0.05, 0.0)])
def test_inertial_reduction(a, t):
    p = pair(3.0, a, t, A=lorentz())
    b = en.accelerated_energy(p)
    assert b.total == b.rest
    assert b.rest == en.rest_energy(p).value


def test_breakdown_total_and_signs():
    b = en.accelerated_energy(pair(2.0, 0.01, 10.0, A=lorentz(), B=lorentz(2.0, 0.5)))
    assert b.total == b.rest + b.a2t_term + b.a2t2_term
    assert b.rest < 0 and b.a2t_term > 0
    assert set(b.errors) == {"rest", "a2t", "a2t2"}


def test_a2t_far_zone_coefficient():
    R, a, t = 100.0, 1e-3, 50.0
    b = en.accelerated_energy(pair(R, a, t))
    assert b.a2t_term == pytest.approx(11 * a**2 * t / (8 * math.pi * R**6), rel=1e-12)


@pytest.mark.parametrize(
    "A, B",
    [
        (pol.static(1.0), pol.static(2.0)),
        (pol.lorentz(1.0, 1.0), pol.static(3.0)),
        (pol.lorentz(1.0, 0.5), pol.lorentz(2.0, 4.0)),
    ],
)
def test_exchange_symmetry(A, B):
    p = en.AtomPair(A, B, 0.7, Trajectory(0.1, 1.0), 1.5, NATURAL)
    assert en.accelerated_energy(p) == en.accelerated_energy(p.swapped())


def test_validity_warning_and_status():
    p = pair(1.0, 0.5, 1.0)
    with pytest.warns(en.ValidityWarning):
        b = en.accelerated_energy(p)
    assert b.validity.status == "warning"
    assert b.validity.flag == "warn:at/c+aR/c2"
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ok = en.accelerated_energy(pair(1.0, 0.1, 1.0))
    assert ok.validity.flag == "ok"


@pytest.mark.parametrize("A", [pol.static(1.0), pol.lorentz(1.0, 1.0)])
@pytest.mark.parametrize("R", [0.01, 1.0, 100.0])
def test_attractive_and_weakening_in_time(A, R):
    a = 0.29 / max(R, 1.0)
    ts = np.linspace(0, 0.29 / a, 12)
    totals = [en.accelerated_energy(pair(R, a, t, A=A)).total for t in ts]
    assert all(e < 0 for e in totals)
    assert np.all(np.diff(np.abs(totals)) <= 0)


# near zone

def test_near_zone_London_form():
    R = 0.01
    p = pair(R, A=lorentz())
    b = en.near_zone_energy(p)
    assert b.total == b.rest
    assert b.rest == pytest.approx(-(3 / (2 * math.pi * R**6)) * (math.pi / 4), rel=1e-9)


def test_near_zone_percentage():
    R = 0.01
    t = 1.0
    a = math.sqrt(0.2) / t
    with pytest.warns(en.ValidityWarning):
        b = en.near_zone_energy(pair(R, a, t, A=lorentz()))
    assert b.a2t2_term / abs(b.rest) == pytest.approx(4 * 0.2 / 9, rel=1e-12)


def test_near_zone_needs_a_dispersive_model():
    with pytest.raises(en.StaticModelRequired):
        en.near_zone_energy(pair(0.01))


def test_near_zone_warns_outside_its_regime():
    with pytest.warns(en.ValidityWarning):
        en.near_zone_energy(pair(1.0, A=lorentz()))


@pytest.mark.parametrize("term", ["rest", "a2t_term", "a2t2_term"])
def test_near_zone_matches_accelerated(term):
    p = pair(0.01, 0.1, 1.0, A=lorentz())
    full = getattr(en.accelerated_energy(p), term)
    near = getattr(en.near_zone_energy(p), term)
    assert near == pytest.approx(full, rel=0.02)


# far zone

def test_far_zone_closed_at_rest():
    R = 40.0
    b = en.far_zone_energy(pair(R))
    assert b.total == pytest.approx(-23 / (4 * math.pi * R**7), rel=1e-15)


def test_far_zone_percentage():
    R, t = 100.0, 1.0
    a = math.sqrt(0.2) / t
    with pytest.warns(en.ValidityWarning):
        b = en.far_zone_energy(pair(R, a, t))
    assert b.a2t2_term / abs(b.rest) == pytest.approx((7 / 24) * 0.2 / (23 / 4), rel=1e-12)


def test_far_zone_integral_matches_closed():
    p = pair(20.0, 0.001, 30.0)
    closed = en.far_zone_energy(p, "closed")
    integral = en.far_zone_energy(p, "integral")
    for term in ("rest", "a2t_term", "a2t2_term"):
        assert getattr(integral, term) == pytest.approx(getattr(closed, term), rel=1e-4)
    assert integral.converged


def test_far_zone_rejects_unknown_form():
    with pytest.raises(ValueError):
        en.far_zone_energy(pair(10.0), "series")


def test_far_zone_warns_near_resonance():
    with pytest.warns(en.ValidityWarning):
        en.far_zone_energy(pair(1.0, A=lorentz()))


@pytest.mark.parametrize("R", [50.0, 200.0])
def test_far_zone_matches_accelerated(R):
    p = pair(R, 0.2 / R, 0.5 * R, A=lorentz())
    full = en.accelerated_energy(p)
    far = en.far_zone_energy(p)
    assert far.rest == pytest.approx(full.rest, rel=0.02)
    assert far.a2t_term == pytest.approx(full.a2t_term, rel=0.02)


# mode contraction

def test_contraction_at_rest_matches_real_axis():
    p = pair(3.0)
    b = en.mode_contraction_breakdown(p)
    re = en.rest_energy(p, "real")
    assert abs(b.total - re.value) <= 2 * (b.errors["rest"] + re.error_estimate)


def test_contraction_a2t_coefficient():
    R, a, t = 5.0, 0.01, 2.0
    b = en.mode_contraction_breakdown(pair(R, a, t))
    assert b.a2t_term == pytest.approx(11 * a**2 * t / (8 * math.pi * R**6), rel=1e-4)
    assert en.mode_contraction_energy(pair(R, a, t)) == b.total


def test_contraction_rejects_dispersive_models():
    with pytest.raises(en.StaticModelRequired):
        en.mode_contraction_energy(pair(3.0, A=lorentz()))


def test_x_row_carries_no_acceleration_correction():
    # Z_11 = 0, so only the growth factor touches the x-x channel
    _, z_t, z_t2 = en.potential_tensor.closed_diagonal(np.linspace(0.1, 5, 9), 1.0, 1, 1, 1)
    assert not np.any(z_t[:, 0]) and not np.any(z_t2[:, 0])


# consistency report

@pytest.fixture(scope="module")
def report():
    return en.consistency_report(pair(100.0, 0.001, 10.0))


def test_report_coefficients(report):
    lap, abel = report.a2t2_pair
    assert lap == pytest.approx(27 / 24, rel=0.01)
    assert abel == pytest.approx(7 / 24, rel=0.01)
    assert report.a2t2_ratio == pytest.approx(27 / 7, rel=0.01)
    assert report.a2t2_discrepancy
    assert report.rest_consistent and report.a2t_consistent
    assert report.status == "ok"


def test_report_probe_point(report):
    assert report.at_over_c == pytest.approx(0.01)
    assert report.aR_over_c2 == pytest.approx(0.1)


def test_report_flags_injected_fault(monkeypatch):
    wrong = OscillatoryIntegrand(p_sin=lambda x: 1.1 * (x**4 - 5 * x**2 + 3),
                                 p_cos=lambda x: 1.1 * (2 * x**3 - 6 * x))
    monkeypatch.setattr(en, "_REST_REAL", wrong)
    rep = en.consistency_report(pair(100.0))
    assert not rep.rest_consistent
    assert rep.status == "failed"


def test_report_needs_static_models():
    with pytest.raises(en.StaticModelRequired):
        en.consistency_report(pair(100.0, A=lorentz()))


# Unruh temperature

def test_unruh_temperature():
    assert en.unruh_temperature(Trajectory(0.0)) == 0.0
    a1 = 2 * math.pi * GAUSSIAN.c * GAUSSIAN.k_B / GAUSSIAN.hbar
    assert en.unruh_temperature(Trajectory(a1)) == pytest.approx(1.0, rel=1e-14)
    assert a1 == pytest.approx(2.47e22, rel=2e-3)
    assert en.unruh_temperature(Trajectory(2 * a1)) == pytest.approx(2.0, rel=1e-14)
