"""Co-moving potential tensor for one field mode, and its time average.

Geometry is fixed: the separation is along z (``R = (0, 0, R)``) and both
atoms accelerate along x.  The tensor couples the partner's co-moving dipole
to the source's lab-frame dipole, with the exchange factor 2 included.

Two time averages over ``[0, t]`` are provided:

* :func:`time_average_numeric` integrates :func:`v_tilde` directly with
  composite Simpson weights and keeps every term of the nonrelativistic
  expression.
* :func:`time_average_closed` is the leading secular result,
  ``(1 + a^2 t^2/6c^2) V_rest + Z``.

The rest tensor's transverse (S) part is ``-S (kR)^2 cos kR``.  This is what
averaging ``v_tilde`` at ``a = 0`` actually produces, and it is the only form
that reproduces the rest-atom energy when contracted with the mode kernel.
The variant with ``+S (kR)^2 sin kR`` is kept as ``transverse="sin"`` for
comparison only.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kinematics
from .dipole_fields import geometry_tensors
from .kinematics import Trajectory

_GEOM = geometry_tensors([0.0, 0.0, 1.0])
T_HAT = _GEOM.T
S_HAT = _GEOM.S
R_HAT = _GEOM.rho_hat

LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_i, _k, _j] = -1.0

MIN_SAMPLES_PER_PERIOD = 40


class InsufficientSamplingError(ValueError):
    pass


@dataclass(frozen=True)
class ModeContext:
    k: float
    R: float
    t: float
    traj: Trajectory

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"k must be > 0, got {self.k}")
        if not self.R > 0:
            raise ValueError(f"R must be > 0, got {self.R}")
        if not self.t >= 0:
            raise ValueError(f"t must be >= 0, got {self.t}")

    @property
    def omega(self) -> float:
        return self.traj.c * self.k


@dataclass(frozen=True)
class PotentialTensor:
    V: np.ndarray
    # quadrature error estimate per entry (numeric average only)
    error: np.ndarray | None = None


@dataclass(frozen=True)
class ZTensor:
    Z: np.ndarray


def mode_functions(ctx: ModeContext, t=None):
    """``A = cos(wt) cos(w(t - R/c))``, ``B = cos(wt) sin(w(t - R/c))``."""
    t = ctx.t if t is None else np.asarray(t, dtype=float)
    w = ctx.omega
    phase = w * t - ctx.k * ctx.R
    cw = np.cos(w * t)
    return cw * np.cos(phase), cw * np.sin(phase)


def _v_tilde_at(ctx: ModeContext, t) -> np.ndarray:
    """Potential tensor at times ``t`` (array), shape ``t.shape + (3, 3)``."""
    t = np.asarray(t, dtype=float)
    k, R = ctx.k, ctx.R
    a, c = ctx.traj.a, ctx.traj.c
    w = ctx.omega
    A, B = mode_functions(ctx, t)
    b = kinematics.beta(ctx.traj, t, "nonrelativistic")
    g = kinematics.gamma(ctx.traj, t, "nonrelativistic")

    # index structures: X[m, j] = R_l eps_{m l j}, Y[m, j] = T_ml eps_{l j 1},
    # W[m, j] = S_ml eps_{l j 1}
    X = np.einsum("l,mlj->mj", R_HAT, LEVI_CIVITA)
    Y = np.einsum("ml,lj->mj", T_HAT, LEVI_CIVITA[:, :, 0])
    W = np.einsum("ml,lj->mj", S_HAT, LEVI_CIVITA[:, :, 0])

    A_ = A[..., None, None]
    B_ = B[..., None, None]
    t_ = t[..., None, None] + np.zeros_like(A_)
    b_ = np.asarray(b)[..., None, None]
    g_ = np.asarray(g)[..., None, None]

    body = T_HAT / R * (-A_ / R + k * B_) + S_HAT * k**2 * A_

    # bracket multiplying beta/c in rows 2 and 3, as a function of the
    # "partner" row index m (3 for row 2, 2 for row 3)
    def moving(m):
        return (
            X[m] * w * (k * A_ + B_ / R)
            + Y[m] * (a / R) * (-(1.0 / c + t_ / R) * A_ + t_ * k * B_)
            + W[m] * (a * w / c**2) * (w * t_ * A_ + 2.0 * B_)
        )

    extra = np.zeros_like(body)
    row1 = R_HAT * (a / c**2) * ((1.0 / R + k**2 * c * t_) * A_
                                 + (k * c * t_ / R + 2.0 * k) * B_)
    extra[..., 0, :] = row1[..., 0, :]
    extra[..., 1, :] = (-(b_ / c) * moving(2))[..., 0, :]
    extra[..., 2, :] = ((b_ / c) * moving(1))[..., 0, :]

    return -(2.0 * g_ / R) * (body + extra)


def v_tilde(ctx: ModeContext) -> PotentialTensor:
    """Instantaneous co-moving potential tensor at ``ctx.t``."""
    return PotentialTensor(_v_tilde_at(ctx, np.asarray(ctx.t, dtype=float)))


def _simpson(y: np.ndarray, h: float) -> np.ndarray:
    w = np.ones(y.shape[0])
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return h / 3.0 * np.tensordot(w, y, axes=(0, 0))


def time_average_numeric(ctx: ModeContext, samples: int = 64) -> PotentialTensor:
    """``(1/t) int_0^t V(t') dt'`` by composite Simpson.

    Parameters
    ----------
    ctx : ModeContext
        ``ctx.t`` is the averaging window.
    samples : int
        Grid points per oscillation period ``2 pi / omega``; at least 40.

    Returns
    -------
    PotentialTensor
        ``error`` holds ``|S(h) - S(2h)|`` per entry.
    """
    if samples < MIN_SAMPLES_PER_PERIOD:
        raise InsufficientSamplingError(
            f"need >= {MIN_SAMPLES_PER_PERIOD} samples per period, got {samples}"
        )
    if not ctx.t > 0:
        raise ValueError("time average needs t > 0")
    wt = ctx.omega * ctx.t
    if wt < 50:
        warnings.warn(f"omega t = {wt:.3g} is not >> 1; the secular average is not reached",
                      RuntimeWarning, stacklevel=2)
    n = int(math.ceil(samples * wt / (2.0 * math.pi)))
    n = max(8, n + (-n) % 4)  # Simpson on both h and 2h grids
    tt = np.linspace(0.0, ctx.t, n + 1)
    V = _v_tilde_at(ctx, tt)
    h = ctx.t / n
    fine = _simpson(V, h) / ctx.t
    coarse = _simpson(V[::2], 2 * h) / ctx.t
    return PotentialTensor(fine, np.abs(fine - coarse))


def closed_diagonal(k, R: float, a: float, c: float, t: float, transverse: str = "cos"):
    """Diagonals of the averaged tensor, vectorised over ``k``.

    Returns ``(rest, z_t, z_t2)``, each of shape ``k.shape + (3,)``: the rest
    tensor, the ``a^2 t`` part of Z and the ``a^2 t^2`` part of Z.
    """
    k = np.asarray(k, dtype=float)
    x = k * R
    cs, sn = np.cos(x), np.sin(x)
    T = np.diag(T_HAT)
    S = np.diag(S_HAT)
    if transverse == "cos":
        s_part = -(x**2 * cs)[..., None] * S
    elif transverse == "sin":
        s_part = (x**2 * sn)[..., None] * S
    else:
        raise ValueError("transverse must be 'cos' or 'sin'")
    rest = ((cs + x * sn)[..., None] * T + s_part) / R**3

    lin = a**2 * t / (2 * c**3 * R**2) * cs
    quad = a**2 * t**2 / (3 * c**2 * R**3) * cs + a**2 * t**2 / (3 * c**2 * R**2) * k * sn
    s_lin = a**2 * t / (c**3 * R) * k * sn
    s_quad = -a**2 * t**2 / (3 * c**2 * R) * k**2 * cs
    zero = np.zeros_like(x)
    z_t = np.stack([zero, T[2] * lin, T[1] * lin + S[1] * s_lin], axis=-1)
    z_t2 = np.stack([zero, T[2] * quad, T[1] * quad + S[1] * s_quad], axis=-1)
    return rest, z_t, z_t2


def rest_tensor(k: float, R: float, transverse: str = "cos") -> np.ndarray:
    """Time-averaged tensor for atoms at rest."""
    rest, _, _ = closed_diagonal(k, R, 0.0, 1.0, 0.0, transverse)
    return np.diag(rest)


def z_parts(ctx: ModeContext):
    """Acceleration corrections to the averaged tensor, split by power of t.

    Returns ``(Z_t, Z_t2, Z_off)``: the diagonal terms proportional to
    ``a^2 t`` and to ``a^2 t^2``, and the off-diagonal (1,3)/(3,1) entries.
    """
    k, R, t = ctx.k, ctx.R, ctx.t
    a, c = ctx.traj.a, ctx.traj.c
    _, z_t, z_t2 = closed_diagonal(k, R, a, c, t)
    cs, sn = math.cos(k * R), math.sin(k * R)

    # Off-diagonal entries are odd in a; the energy never sees them because
    # the mode kernel is diagonal, but they are part of the average.
    q2 = (a * t / c) ** 2
    g0 = 1.0 + q2 / 6.0
    g1 = 1.0 + q2 / 4.0
    Z_off = np.zeros((3, 3))
    Z_off[0, 2] = -(a / (c**2 * R)) * (
        g0 * (cs / R - 2.0 * k * sn) + 0.5 * c * t * g1 * (k**2 * cs - k * sn / R)
    )
    Z_off[2, 0] = -(a * k * t * g1 / (2.0 * c * R)) * (k * cs - sn / R)
    return np.diag(z_t), np.diag(z_t2), Z_off


def z_tensor(ctx: ModeContext) -> ZTensor:
    Z_t, Z_t2, Z_off = z_parts(ctx)
    return ZTensor(Z_t + Z_t2 + Z_off)


def time_average_closed(ctx: ModeContext, transverse: str = "cos") -> PotentialTensor:
    a, c, t = ctx.traj.a, ctx.traj.c, ctx.t
    growth = 1.0 + a**2 * t**2 / (6.0 * c**2)
    V = growth * rest_tensor(ctx.k, ctx.R, transverse) + z_tensor(ctx).Z
    return PotentialTensor(V)
