"""Fields of a harmonically oscillating point dipole on an accelerated worldline.

The lab-frame field at the partner atom splits into a polarization part (the
rest-dipole field evaluated at the retarded time) and a Roentgen part that
carries the source velocity and its derivatives.  Callers supply the
retarded time ``t_r`` and the kinematic inputs; no retardation equation is
solved here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ZeroDistanceError(ValueError):
    pass


class SuperluminalBoostError(ValueError):
    pass


@dataclass(frozen=True)
class DipoleHistory:
    """``mu(t) = mu0 cos(omega t)``."""

    mu0: np.ndarray
    omega: float

    def __post_init__(self):
        object.__setattr__(self, "mu0", np.asarray(self.mu0, dtype=float).reshape(3))

    def mu(self, t):
        return self.mu0 * np.cos(self.omega * t)

    def mu_dot(self, t):
        return -self.omega * self.mu0 * np.sin(self.omega * t)

    def mu_ddot(self, t):
        return -self.omega**2 * self.mu0 * np.cos(self.omega * t)


@dataclass(frozen=True)
class GeometryTensors:
    rho_hat: np.ndarray
    T: np.ndarray
    S: np.ndarray


@dataclass(frozen=True)
class FieldSample:
    E: np.ndarray
    B: np.ndarray
    frame: str = "lab"


def geometry_tensors(rho_hat) -> GeometryTensors:
    """``T = 1 - 3 rr``, ``S = 1 - rr`` for the unit direction ``r``."""
    r = np.asarray(rho_hat, dtype=float).reshape(3)
    if abs(np.linalg.norm(r) - 1.0) > 1e-12:
        raise ValueError(f"rho_hat must be a unit vector, |rho_hat| = {np.linalg.norm(r)}")
    rr = np.outer(r, r)
    eye = np.eye(3)
    return GeometryTensors(r, eye - 3.0 * rr, eye - rr)


def _check_rho(rho):
    if not rho > 0:
        raise ZeroDistanceError(f"field point must be at rho > 0, got {rho}")


def _as_vec(x):
    """Scalars are taken along the motion axis x."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return np.array([float(x), 0.0, 0.0])
    return x.reshape(3)


def e_polarization(dip: DipoleHistory, geom: GeometryTensors, rho: float, t_r: float,
                   c: float, radiation: str = "cubic"):
    """Polarization part of E.

    ``radiation="cubic"`` puts a ``1/(c^3 rho)`` weight on the ``mu_ddot``
    term; ``"standard"`` uses the textbook ``1/(c^2 rho)``.  The two agree
    when ``c = 1``.
    """
    _check_rho(rho)
    if radiation not in ("cubic", "standard"):
        raise ValueError("radiation must be 'cubic' or 'standard'")
    rad = c**3 if radiation == "cubic" else c**2
    return -(
        geom.T @ dip.mu(t_r) / rho**3
        + geom.T @ dip.mu_dot(t_r) / (c * rho**2)
        + geom.S @ dip.mu_ddot(t_r) / (rad * rho)
    )


def e_roentgen(dip: DipoleHistory, geom: GeometryTensors, rho: float, t_r: float,
               c: float, xdot, xddot, xdddot):
    _check_rho(rho)
    v, acc, jerk = _as_vec(xdot), _as_vec(xddot), _as_vec(xdddot)
    r = geom.rho_hat
    p0 = r @ dip.mu(t_r)
    p1 = r @ dip.mu_dot(t_r)
    p2 = r @ dip.mu_ddot(t_r)
    return -(
        v * p1 / (c**2 * rho**2)
        + acc * p0 / (c**2 * rho**2)
        + v * p2 / (c**3 * rho)
        + jerk * p0 / (c**3 * rho)
        + 2.0 * acc * p1 / (c**3 * rho)
    )


def b_polarization(dip: DipoleHistory, geom: GeometryTensors, rho: float, t_r: float,
                   c: float):
    _check_rho(rho)
    r = geom.rho_hat
    return (-np.cross(r, dip.mu_dot(t_r)) / (c * rho**2)
            - np.cross(r, dip.mu_ddot(t_r)) / (c**2 * rho))


def b_roentgen(dip: DipoleHistory, geom: GeometryTensors, rho: float, t_r: float,
               c: float, xdot, xddot, xdddot):
    _check_rho(rho)
    v, acc, jerk = _as_vec(xdot), _as_vec(xddot), _as_vec(xdddot)
    m0, m1, m2 = dip.mu(t_r), dip.mu_dot(t_r), dip.mu_ddot(t_r)
    near = np.cross(m0, v) / rho + np.cross(m0, acc) / c + np.cross(m1, v) / c
    far = np.cross(m0, jerk) + 2.0 * np.cross(m1, acc) + np.cross(m2, v)
    return -geom.T @ near / (c * rho**2) - geom.S @ far / (c**3 * rho)


def lab_fields(dip: DipoleHistory, geom: GeometryTensors, rho: float, t_r: float,
               c: float, xdot=0.0, xddot=0.0, xdddot=0.0,
               radiation: str = "cubic") -> FieldSample:
    """Total (polarization + Roentgen) lab-frame E and B."""
    E = (e_polarization(dip, geom, rho, t_r, c, radiation)
         + e_roentgen(dip, geom, rho, t_r, c, xdot, xddot, xdddot))
    B = (b_polarization(dip, geom, rho, t_r, c)
         + b_roentgen(dip, geom, rho, t_r, c, xdot, xddot, xdddot))
    return FieldSample(E, B, "lab")


def lorentz_to_comoving(sample: FieldSample, beta: float, gamma: float) -> FieldSample:
    """Boost along x into the frame moving with velocity ``beta c``.

    ``gamma`` is taken as given so the nonrelativistic ``1 + beta^2/2`` can
    be used consistently with the rest of the pipeline.
    """
    if not abs(beta) < 1:
        raise SuperluminalBoostError(f"|beta| must be < 1, got {beta}")
    if sample.frame != "lab":
        raise ValueError("expected a lab-frame field sample")
    Ex, Ey, Ez = sample.E
    Bx, By, Bz = sample.B
    E = np.array([Ex, gamma * (Ey - beta * Bz), gamma * (Ez + beta * By)])
    B = np.array([Bx, gamma * (By + beta * Ez), gamma * (Bz - beta * Ey)])
    return FieldSample(E, B, "comoving")
