"""Dispersion energy of two identically accelerated atoms.

Production formulas run on the imaginary wavenumber axis, where every
integrand is a positive polynomial in ``1/(uR)`` times ``exp(-2uR)``.  The
real-axis (Abel-regularised) forms and the mode-kernel contraction are kept
as independent cross-checks; they need static polarizabilities because a
Lorentz model has a pole on the real axis.

All integrals are done in the dimensionless variable ``x = uR`` (or
``x = kR``) with the polarizabilities normalised by ``alpha0_A alpha0_B``;
the physical prefactor is applied afterwards.  This keeps the quadrature
tolerances meaningful in both unit systems.

The energies are time averages over ``[0, t]`` reported as the energy at
time ``t``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import potential_tensor
from .constants import GAUSSIAN, UnitSystem
from .kinematics import Trajectory
from .polarizability import PolarizabilityModel, eval_imag
from .quadrature import (
    OscillatoryIntegrand,
    QuadratureResult,
    QuadratureSpec,
    integrate_damped,
    integrate_oscillatory,
)

NONRELATIVISTIC_LIMIT = 0.3
LOCALLY_INERTIAL_LIMIT = 0.3
# regime boundaries in R * k_resonance
NEAR_ZONE_MAX = 0.1
FAR_ZONE_MIN = 10.0

# expected far-zone coefficients, used by consistency_report
REST_COEFF = 23.0 / 4.0
A2T_COEFF = 11.0 / 8.0
A2T2_COEFF_LAPLACE = 27.0 / 24.0
A2T2_COEFF_ABEL = 7.0 / 24.0


class ValidityWarning(UserWarning):
    """The requested point lies outside the small-acceleration domain."""


class StaticModelRequired(ValueError):
    """A real-axis route was asked to handle a dispersive polarizability."""


@dataclass(frozen=True)
class Validity:
    at_over_c: float
    aR_over_c2: float
    regime: str

    @property
    def nonrelativistic(self) -> bool:
        return self.at_over_c < NONRELATIVISTIC_LIMIT

    @property
    def locally_inertial(self) -> bool:
        return self.aR_over_c2 < LOCALLY_INERTIAL_LIMIT

    @property
    def status(self) -> str:
        return "ok" if self.nonrelativistic and self.locally_inertial else "warning"

    @property
    def flag(self) -> str:
        """Compact label for tabular output."""
        bad = []
        if not self.nonrelativistic:
            bad.append("at/c")
        if not self.locally_inertial:
            bad.append("aR/c2")
        return "ok" if not bad else "warn:" + "+".join(bad)


@dataclass(frozen=True)
class AtomPair:
    """Two atoms at separation ``R`` (cm) on the same hyperbolic worldline.

    ``t`` is the lab time since the atoms started from rest.  ``traj.c`` must
    match ``units.c``.
    """

    alpha_A: PolarizabilityModel
    alpha_B: PolarizabilityModel
    R: float
    traj: Trajectory
    t: float = 0.0
    units: UnitSystem = GAUSSIAN

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"R must be > 0, got {self.R}")
        if not self.t >= 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if not math.isclose(self.traj.c, self.units.c, rel_tol=1e-12):
            raise ValueError(
                f"trajectory uses c = {self.traj.c}, unit system "
                f"{self.units.name!r} has c = {self.units.c}"
            )

    @property
    def a(self) -> float:
        return self.traj.a

    @property
    def c(self) -> float:
        return self.traj.c

    @property
    def alpha0_product(self) -> float:
        return self.alpha_A.alpha0 * self.alpha_B.alpha0

    @property
    def validity(self) -> Validity:
        return Validity(
            at_over_c=self.a * self.t / self.c,
            aR_over_c2=self.a * self.R / self.c**2,
            regime=_regime(self),
        )

    def swapped(self) -> "AtomPair":
        return AtomPair(self.alpha_B, self.alpha_A, self.R, self.traj, self.t, self.units)


@dataclass(frozen=True)
class EnergyBreakdown:
    rest: float
    a2t_term: float
    a2t2_term: float
    total: float
    errors: dict = field(default_factory=dict)
    validity: Validity | None = None
    converged: bool = True


def _regime(pair: AtomPair) -> str:
    ks = [m.resonance_k for m in (pair.alpha_A, pair.alpha_B) if m.resonance_k is not None]
    if not ks:
        return "far"
    if pair.R * max(ks) <= NEAR_ZONE_MAX:
        return "near"
    if pair.R * min(ks) >= FAR_ZONE_MIN:
        return "far"
    return "intermediate"


def _check_validity(pair: AtomPair) -> Validity:
    v = pair.validity
    if v.status != "ok":
        warnings.warn(
            f"outside the small-acceleration domain: at/c = {v.at_over_c:.3g}, "
            f"aR/c^2 = {v.aR_over_c2:.3g} (limits {NONRELATIVISTIC_LIMIT}, "
            f"{LOCALLY_INERTIAL_LIMIT})",
            ValidityWarning,
            stacklevel=3,
        )
    return v


def _is_static(pair: AtomPair) -> bool:
    return pair.alpha_A.variant == "static" and pair.alpha_B.variant == "static"


def _require_static(pair: AtomPair, what: str):
    if not _is_static(pair):
        raise StaticModelRequired(
            f"{what} runs on the real axis and needs static polarizabilities"
        )


def _weight(pair: AtomPair):
    """``alpha_A(iu) alpha_B(iu) / (alpha0_A alpha0_B)`` as a function of ``x = uR``."""
    A, B, R = pair.alpha_A, pair.alpha_B, pair.R
    norm = pair.alpha0_product
    if _is_static(pair):
        return lambda x: np.ones_like(x)
    return lambda x: eval_imag(A, x / R) * eval_imag(B, x / R) / norm


def _damped(pair: AtomPair, poly, spec: QuadratureSpec | None) -> QuadratureResult:
    """``int_0^inf w(x) poly(x) exp(-2x) dx``."""
    w = _weight(pair)
    return integrate_damped(lambda x: w(x) * poly(x) * np.exp(-2.0 * x), 0.5, spec)


# Imaginary-axis polynomials in x = uR, after multiplying the brackets by the
# power of x that the measure carries.
def _rest_poly(x):
    return x**4 + 2 * x**3 + 5 * x**2 + 6 * x + 3


def _a2t_poly(x):
    return 3 * x**2 + 4 * x + 2


def _a2t2_poly(x):
    return -(x**4) + 4 * x**3 + 8 * x**2 + 8 * x + 4


# Real-axis brackets in x = kR; the oscillation is trig(2x).
_REST_REAL = OscillatoryIntegrand(
    p_sin=lambda x: x**4 - 5 * x**2 + 3,
    p_cos=lambda x: 2 * x**3 - 6 * x,
)
_A2T_REAL = OscillatoryIntegrand(
    p_sin=lambda x: 3 * x**2 - 2,
    p_cos=lambda x: 4 * x,
)
_A2T2_REAL = OscillatoryIntegrand(
    p_sin=lambda x: x**4 + 3 * x**2 - 1,
    p_cos=lambda x: -2 * x**3 + 2 * x,
)


def _scaled(res: QuadratureResult, factor: float) -> QuadratureResult:
    return QuadratureResult(
        res.value * factor,
        res.error_estimate * abs(factor),
        res.evaluations,
        res.converged,
        res.levels,
    )


def _rest_unit(pair: AtomPair) -> float:
    """``hbar c alpha0_A alpha0_B / (pi R^7)``."""
    u = pair.units
    return u.hbar * u.c * pair.alpha0_product / (math.pi * pair.R**7)


def mode_kernel(k, R: float) -> np.ndarray:
    """Polarization-summed, angle-integrated mode kernel.

    ``S sin(x)/x + T (cos(x)/x^2 - sin(x)/x^3)`` with ``x = kR``,
    ``T = diag(1, 1, -2)`` and ``S = diag(1, 1, 0)``.

    Parameters
    ----------
    k : float or array
        Wavenumber(s), ``> 0``.
    R : float

    Returns
    -------
    ndarray
        Shape ``k.shape + (3, 3)``.
    """
    x = np.asarray(k, dtype=float) * R
    if np.any(x <= 0):
        raise ValueError("mode_kernel needs k > 0 and R > 0")
    j0, j1 = _kernel_scalars(x)
    T = potential_tensor.T_HAT
    S = potential_tensor.S_HAT
    return j0[..., None, None] * S + j1[..., None, None] * T


def _kernel_scalars(x):
    """``sin(x)/x`` and ``(x cos x - sin x)/x^3`` with a series below 0.1."""
    x = np.asarray(x, dtype=float)
    small = x < 0.1
    xs = np.where(small, 1.0, x)
    x2 = x * x
    j0 = np.where(small, 1 - x2 / 6 + x2**2 / 120 - x2**3 / 5040, np.sin(xs) / xs)
    j1 = np.where(
        small,
        -1 / 3 + x2 / 30 - x2**2 / 840 + x2**3 / 45360,
        (xs * np.cos(xs) - np.sin(xs)) / xs**3,
    )
    return j0, j1


def rest_energy(
    pair: AtomPair, axis: str = "imaginary", spec: QuadratureSpec | None = None
) -> QuadratureResult:
    """Interaction energy of the pair at rest.

    Parameters
    ----------
    pair : AtomPair
        Only ``R`` and the polarizabilities are used.
    axis : {"imaginary", "real"}
        ``"imaginary"`` integrates over ``alpha(iu)`` with ``exp(-2uR)``
        damping.  ``"real"`` evaluates the oscillatory real-``k`` form by
        Abel regularisation and requires static polarizabilities.
    spec : QuadratureSpec, optional

    Returns
    -------
    QuadratureResult
        Energy in the pair's units, with the quadrature error scaled to match.
    """
    unit = _rest_unit(pair)
    if axis == "imaginary":
        return _scaled(_damped(pair, _rest_poly, spec), -unit)
    if axis == "real":
        _require_static(pair, "real-axis rest_energy")
        return _scaled(integrate_oscillatory(_REST_REAL, 1.0, spec), -unit)
    raise ValueError("axis must be 'imaginary' or 'real'")


def accelerated_energy(pair: AtomPair, spec: QuadratureSpec | None = None) -> EnergyBreakdown:
    """Time-averaged interaction energy of the accelerated pair.

    ``total = rest + a2t_term + a2t2_term``, where the corrections carry
    ``a^2 t / 2c^3`` and ``a^2 t^2 / 6c^2`` respectively.  Points outside
    ``at/c < 0.3`` or ``aR/c^2 < 0.3`` are computed but raise a
    :class:`ValidityWarning` and carry a ``"warning"`` status.
    """
    validity = _check_validity(pair)
    u, R, a, t, c = pair.units, pair.R, pair.a, pair.t, pair.c
    rest = rest_energy(pair, "imaginary", spec)
    errors = {"rest": rest.error_estimate}
    a2t = a2t2 = 0.0
    errors["a2t"] = errors["a2t2"] = 0.0
    if a > 0 and t > 0:
        i1 = _damped(pair, _a2t_poly, spec)
        f1 = (a**2 * t / (2 * c**3)) * u.hbar * c * pair.alpha0_product / (math.pi * R**6)
        a2t, errors["a2t"] = f1 * i1.value, abs(f1) * i1.error_estimate
        i2 = _damped(pair, _a2t2_poly, spec)
        f2 = (a**2 * t**2 / (6 * c**2)) * _rest_unit(pair)
        a2t2, errors["a2t2"] = f2 * i2.value, abs(f2) * i2.error_estimate
    return EnergyBreakdown(rest.value, a2t, a2t2, rest.value + a2t + a2t2, errors, validity)


def _near_zone_J(pair: AtomPair, spec: QuadratureSpec | None) -> QuadratureResult:
    """``J = int_0^inf alpha_A(iu) alpha_B(iu) du``."""
    ks = [m.resonance_k for m in (pair.alpha_A, pair.alpha_B) if m.resonance_k is not None]
    if not ks:
        raise StaticModelRequired(
            "near-zone integral diverges for two static polarizabilities"
        )
    A, B = pair.alpha_A, pair.alpha_B
    scale = min(ks)
    res = integrate_damped(
        lambda u: eval_imag(A, u) * eval_imag(B, u) / pair.alpha0_product, scale, spec
    )
    return _scaled(res, pair.alpha0_product)


def near_zone_energy(pair: AtomPair, spec: QuadratureSpec | None = None) -> EnergyBreakdown:
    """Short-distance (``uR << 1``) form of the accelerated energy.

    ``rest = -(3 hbar c / 2 pi R^6) J``, ``a2t_term = a^2 t hbar J / (pi c^2 R^5)``
    and ``a2t2_term = (4 a^2 t^2 / 9 c^2)(3 hbar c / 2 pi R^6) J``.

    Warns with :class:`ValidityWarning` if ``R k`` is not small for the
    largest resonance wavenumber.
    """
    validity = _check_validity(pair)
    J = _near_zone_J(pair, spec)
    u, R, a, t, c = pair.units, pair.R, pair.a, pair.t, pair.c
    ks = [m.resonance_k for m in (pair.alpha_A, pair.alpha_B) if m.resonance_k is not None]
    if R * max(ks) > NEAR_ZONE_MAX:
        warnings.warn(
            f"near-zone form used at R k0 = {R * max(ks):.3g}", ValidityWarning, stacklevel=2
        )
    london = 3 * u.hbar * c / (2 * math.pi * R**6)
    rest = -london * J.value
    a2t = a**2 * t * u.hbar / (math.pi * c**2 * R**5) * J.value
    a2t2 = 4 * a**2 * t**2 / (9 * c**2) * london * J.value
    rel = J.error_estimate / J.value
    errors = {"rest": abs(rest) * rel, "a2t": abs(a2t) * rel, "a2t2": abs(a2t2) * rel}
    return EnergyBreakdown(rest, a2t, a2t2, rest + a2t + a2t2, errors, validity)


def far_zone_energy(
    pair: AtomPair, form: str = "closed", spec: QuadratureSpec | None = None
) -> EnergyBreakdown:
    """Long-distance form with static polarizabilities ``alpha(0)``.

    Parameters
    ----------
    form : {"closed", "integral"}
        ``"closed"`` uses the exact coefficients 23/4, 11/8 and 7/24.
        ``"integral"`` evaluates each real-``k`` bracket by Abel
        regularisation, which is how those coefficients arise.
    """
    validity = _check_validity(pair)
    ks = [m.resonance_k for m in (pair.alpha_A, pair.alpha_B) if m.resonance_k is not None]
    if ks and pair.R * min(ks) < FAR_ZONE_MIN:
        warnings.warn(
            f"far-zone form used at R k0 = {pair.R * min(ks):.3g}", ValidityWarning, stacklevel=2
        )
    u, R, a, t, c = pair.units, pair.R, pair.a, pair.t, pair.c
    unit = _rest_unit(pair)
    f1 = u.hbar * a**2 * t * pair.alpha0_product / (math.pi * c**2 * R**6)
    f2 = (a**2 * t**2 / c**2) * unit
    if form == "closed":
        rest, a2t, a2t2 = -REST_COEFF * unit, A2T_COEFF * f1, A2T2_COEFF_ABEL * f2
        errors = {"rest": 0.0, "a2t": 0.0, "a2t2": 0.0}
        converged = True
    elif form == "integral":
        r0 = integrate_oscillatory(_REST_REAL, 1.0, spec)
        r1 = integrate_oscillatory(_A2T_REAL, 1.0, spec)
        r2 = integrate_oscillatory(_A2T2_REAL, 1.0, spec)
        rest, a2t, a2t2 = -unit * r0.value, -0.5 * f1 * r1.value, -f2 / 6 * r2.value
        errors = {
            "rest": unit * r0.error_estimate,
            "a2t": 0.5 * f1 * r1.error_estimate,
            "a2t2": f2 / 6 * r2.error_estimate,
        }
        converged = r0.converged and r1.converged and r2.converged
    else:
        raise ValueError("form must be 'closed' or 'integral'")
    return EnergyBreakdown(rest, a2t, a2t2, rest + a2t + a2t2, errors, validity, converged)


def _contraction_integrals(spec: QuadratureSpec | None):
    """Dimensionless k-integrals of the kernel contracted with the averaged tensor.

    Returns results for the rest tensor, the ``a^2 t`` part of Z and the
    ``a^2 t^2`` part of Z, in the units where ``R = c = a = t = 1``.
    """

    def make(idx):
        def f(x):
            j0, j1 = _kernel_scalars(x)
            diag_k = (j0[..., None] * np.diag(potential_tensor.S_HAT)
                      + j1[..., None] * np.diag(potential_tensor.T_HAT))
            parts = potential_tensor.closed_diagonal(x, 1.0, 1.0, 1.0, 1.0)
            return np.sum(diag_k * parts[idx], axis=-1) * x**3
        return f

    return tuple(integrate_oscillatory(make(i), 1.0, spec) for i in range(3))


def mode_contraction_breakdown(
    pair: AtomPair, spec: QuadratureSpec | None = None
) -> EnergyBreakdown:
    """Energy from contracting :func:`mode_kernel` with the averaged tensor.

    ``(hbar c / pi) alpha_A alpha_B int K(kR) : <V>(k) k^3 dk``, where the
    average includes both the ``1 + a^2 t^2/6c^2`` growth of the rest tensor
    and the diagonal Z.  The off-diagonal Z drops out because the kernel is
    diagonal.  The exchange of A and B is already inside ``<V>``, so the
    prefactor carries no extra 2.  Static polarizabilities only.
    """
    _require_static(pair, "mode_contraction_energy")
    validity = _check_validity(pair)
    u, R, a, t, c = pair.units, pair.R, pair.a, pair.t, pair.c
    r0, r1, r2 = _contraction_integrals(spec)
    unit = _rest_unit(pair)
    f1 = u.hbar * a**2 * t * pair.alpha0_product / (math.pi * c**2 * R**6)
    f2 = (a**2 * t**2 / c**2) * unit
    rest = unit * r0.value
    a2t = f1 * r1.value
    a2t2 = f2 * (r2.value + r0.value / 6)
    errors = {
        "rest": unit * r0.error_estimate,
        "a2t": f1 * r1.error_estimate,
        "a2t2": f2 * (r2.error_estimate + r0.error_estimate / 6),
    }
    converged = r0.converged and r1.converged and r2.converged
    return EnergyBreakdown(rest, a2t, a2t2, rest + a2t + a2t2, errors, validity, converged)


def mode_contraction_energy(pair: AtomPair, spec: QuadratureSpec | None = None) -> float:
    return mode_contraction_breakdown(pair, spec).total


def unruh_temperature(traj: Trajectory, units: UnitSystem = GAUSSIAN) -> float:
    """``hbar a / (2 pi c k_B)``; kelvin in Gaussian units."""
    return units.hbar * traj.a / (2 * math.pi * units.c * units.k_B)


@dataclass(frozen=True)
class Coefficient:
    name: str
    value: float
    error: float
    expected: float

    @property
    def rel_deviation(self) -> float:
        return abs(self.value / self.expected - 1.0)


@dataclass(frozen=True)
class ConsistencyReport:
    """Far-zone coefficients from every route, in natural units of each term.

    Rest: ``hbar c alpha^2 / (pi R^7)`` (sign dropped).  ``a^2 t``:
    ``hbar a^2 t alpha^2 / (pi c^2 R^6)``.  ``a^2 t^2``:
    ``(a^2 t^2 / c^2) hbar c alpha^2 / (pi R^7)``.
    """

    coefficients: tuple
    tolerance: float
    at_over_c: float
    aR_over_c2: float

    def get(self, name: str) -> Coefficient:
        for c in self.coefficients:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def a2t2_pair(self) -> tuple[float, float]:
        return self.get("a2t2_imaginary").value, self.get("a2t2_real").value

    @property
    def a2t2_ratio(self) -> float:
        lap, abel = self.a2t2_pair
        return lap / abel

    @property
    def a2t2_discrepancy(self) -> bool:
        lap, abel = self.a2t2_pair
        return abs(lap - abel) > self.tolerance * abs(abel)

    @property
    def rest_consistent(self) -> bool:
        return self._agree("rest_imaginary", "rest_real", "rest_contraction")

    @property
    def a2t_consistent(self) -> bool:
        return self._agree("a2t_imaginary", "a2t_real", "a2t_contraction")

    def _agree(self, *names) -> bool:
        return all(self.get(n).rel_deviation <= self.tolerance for n in names)

    @property
    def ok(self) -> bool:
        """Every coefficient matches its own expected value."""
        return all(c.rel_deviation <= self.tolerance for c in self.coefficients)

    @property
    def status(self) -> str:
        return "ok" if self.ok else "failed"


def consistency_report(
    pair: AtomPair, spec: QuadratureSpec | None = None, tolerance: float = 0.01
) -> ConsistencyReport:
    """Cross-check the far-zone coefficients between representations.

    The imaginary-axis integrals give rest 23/4, ``a^2 t`` 11/8 and
    ``a^2 t^2`` 27/24.  The real-axis brackets and the kernel contraction
    give 23/4, 11/8 and 7/24.  The ``a^2 t^2`` pair is reported side by
    side and never reconciled; :attr:`ConsistencyReport.a2t2_discrepancy`
    flags it.  Coefficients do not depend on ``a`` or ``t``, so they are
    computed directly from the dimensionless integrals.
    """
    _require_static(pair, "consistency_report")
    rest_i = _damped(pair, _rest_poly, spec)
    a2t_i = _damped(pair, _a2t_poly, spec)
    a2t2_i = _damped(pair, _a2t2_poly, spec)
    rest_r = integrate_oscillatory(_REST_REAL, 1.0, spec)
    a2t_r = integrate_oscillatory(_A2T_REAL, 1.0, spec)
    a2t2_r = integrate_oscillatory(_A2T2_REAL, 1.0, spec)
    c0, c1, c2 = _contraction_integrals(spec)

    coeffs = (
        Coefficient("rest_imaginary", rest_i.value, rest_i.error_estimate, REST_COEFF),
        Coefficient("rest_real", rest_r.value, rest_r.error_estimate, REST_COEFF),
        Coefficient("rest_contraction", -c0.value, c0.error_estimate, REST_COEFF),
        Coefficient("a2t_imaginary", a2t_i.value / 2, a2t_i.error_estimate / 2, A2T_COEFF),
        Coefficient("a2t_real", -a2t_r.value / 2, a2t_r.error_estimate / 2, A2T_COEFF),
        Coefficient("a2t_contraction", c1.value, c1.error_estimate, A2T_COEFF),
        Coefficient("a2t2_imaginary", a2t2_i.value / 6, a2t2_i.error_estimate / 6,
                    A2T2_COEFF_LAPLACE),
        Coefficient("a2t2_real", -a2t2_r.value / 6, a2t2_r.error_estimate / 6,
                    A2T2_COEFF_ABEL),
        Coefficient("a2t2_contraction", c2.value + c0.value / 6,
                    c2.error_estimate + c0.error_estimate / 6, A2T2_COEFF_ABEL),
    )
    v = pair.validity
    return ConsistencyReport(coeffs, tolerance, v.at_over_c, v.aR_over_c2)
