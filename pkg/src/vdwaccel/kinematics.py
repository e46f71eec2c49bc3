"""Hyperbolic (constant proper acceleration) worldline along x.

The atom starts at rest at the origin.  Everything is written so that
``a = 0`` is an exact analytic branch rather than a 0/0 limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import GAUSSIAN

MODES = ("exact", "nonrelativistic")


class DegenerateAccelerationError(ValueError):
    """Proper-time parametrisation requested for a = 0."""


@dataclass(frozen=True)
class Trajectory:
    a: float
    c: float = GAUSSIAN.c

    def __post_init__(self):
        if not self.a >= 0:
            raise ValueError(f"acceleration must be >= 0, got {self.a}")
        if not self.c > 0:
            raise ValueError(f"speed of light must be > 0, got {self.c}")

    def _require_accel(self):
        if self.a == 0:
            raise DegenerateAccelerationError(
                "proper-time form is undefined for a = 0; use position_lab"
            )


def _check_mode(mode: str):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def position_lab(traj: Trajectory, t):
    """Lab-frame displacement ``x(t) = (c^2/a)(sqrt(1 + (at/c)^2) - 1)``."""
    t = np.asarray(t, dtype=float)
    if traj.a == 0:
        return np.zeros_like(t)[()]
    q = traj.a * t / traj.c
    # sqrt(1+q^2) - 1 = q^2 / (sqrt(1+q^2) + 1), no cancellation at small q
    return (traj.c**2 / traj.a * q * q / (np.sqrt(1.0 + q * q) + 1.0))[()]


def position_proper(traj: Trajectory, tau):
    """``x(tau) = (c^2/a)(cosh(a tau/c) - 1)``; requires ``a > 0``."""
    traj._require_accel()
    tau = np.asarray(tau, dtype=float)
    h = traj.a * tau / traj.c
    # cosh h - 1 = 2 sinh^2(h/2)
    return (traj.c**2 / traj.a * 2.0 * np.sinh(0.5 * h) ** 2)[()]


def lab_time_from_proper(traj: Trajectory, tau):
    traj._require_accel()
    tau = np.asarray(tau, dtype=float)
    return (traj.c / traj.a * np.sinh(traj.a * tau / traj.c))[()]


def proper_time_from_lab(traj: Trajectory, t):
    traj._require_accel()
    t = np.asarray(t, dtype=float)
    return (traj.c / traj.a * np.arcsinh(traj.a * t / traj.c))[()]


def beta(traj: Trajectory, t, mode: str = "nonrelativistic"):
    """Velocity over c.  The nonrelativistic form is ``at/c``."""
    _check_mode(mode)
    q = traj.a * np.asarray(t, dtype=float) / traj.c
    if mode == "nonrelativistic":
        return q[()]
    return (q / np.sqrt(1.0 + q * q))[()]


def gamma(traj: Trajectory, t, mode: str = "nonrelativistic"):
    """Lorentz factor.  The nonrelativistic form is ``1 + (at/c)^2 / 2``."""
    _check_mode(mode)
    q = traj.a * np.asarray(t, dtype=float) / traj.c
    if mode == "nonrelativistic":
        return (1.0 + 0.5 * q * q)[()]
    return np.sqrt(1.0 + q * q)[()]


def effective_distance(traj: Trajectory, rho: float, t):
    """Light-path length between the two atoms, ``rho + c(t - (c/a) arctan(at/c))``.

    Grows from ``rho`` at ``t = 0``; stays at ``rho`` for ``a = 0``.
    """
    if not rho > 0:
        raise ValueError(f"separation must be positive, got {rho}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("effective_distance needs t >= 0")
    if traj.a == 0:
        return (rho + np.zeros_like(t))[()]
    q = traj.a * t / traj.c
    # q - arctan q loses everything to cancellation for small q
    small = np.abs(q) < 1e-2
    q2 = q * q
    series = q * q2 * (1 / 3 - q2 / 5 + q2 * q2 / 7 - q2 * q2 * q2 / 9)
    diff = np.where(small, series, q - np.arctan(q))
    return (rho + traj.c**2 / traj.a * diff)[()]
