"""Isotropic dynamic polarizability models.

Three variants are supported:

``static``
    ``alpha(k) = alpha0`` everywhere.
``lorentz``
    Single undamped oscillator, ``alpha(k) = alpha0 / (1 - k^2/k0^2)`` on the
    real axis and ``alpha0 / (1 + u^2/k0^2)`` at imaginary wavenumber ``iu``.
``tabulated``
    Imaginary-axis data ``(u, alpha(iu))`` interpolated with a monotone cubic,
    held constant below the grid and continued as ``u^-2`` above it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

CSV_HEADER = ("u_cm^-1", "alpha_cm^3")


class ResonancePoleError(ValueError):
    """Real-axis evaluation at the Lorentz resonance."""


@dataclass(frozen=True)
class PolarizabilityModel:
    variant: str
    alpha0: float
    k0: float | None = None
    table: tuple[tuple[float, float], ...] | None = None
    _interp: PchipInterpolator | None = field(
        default=None, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if self.variant == "static":
            pass
        elif self.variant == "lorentz":
            if self.k0 is None or not self.k0 > 0:
                raise ValueError("lorentz model needs k0 > 0")
        elif self.variant == "tabulated":
            if not self.table or len(self.table) < 2:
                raise ValueError("tabulated model needs at least two points")
            arr = np.asarray(self.table, dtype=float)
            if arr.ndim != 2 or arr.shape[1] != 2:
                raise ValueError("table must be a list of (u, alpha) pairs")
            u, al = arr[:, 0], arr[:, 1]
            if np.any(u < 0) or np.any(np.diff(u) <= 0):
                raise ValueError("table u grid must be non-negative and strictly increasing")
            if np.any(al < 0):
                raise ValueError("table alpha values must be >= 0")
            object.__setattr__(self, "_interp", PchipInterpolator(u, al, extrapolate=False))
        else:
            raise ValueError(f"unknown polarizability variant {self.variant!r}")
        if not self.alpha0 > 0:
            raise ValueError(f"alpha0 must be positive, got {self.alpha0}")

    @property
    def resonance_k(self) -> float | None:
        """Characteristic wavenumber of the model, ``None`` for static."""
        if self.variant == "lorentz":
            return self.k0
        if self.variant == "tabulated":
            u, al = np.asarray(self.table, dtype=float).T
            below = np.nonzero(al <= 0.5 * al[0])[0]
            return float(u[below[0]]) if len(below) else float(u[-1])
        return None


def static(alpha0: float) -> PolarizabilityModel:
    return PolarizabilityModel("static", alpha0)


def lorentz(alpha0: float, k0: float) -> PolarizabilityModel:
    return PolarizabilityModel("lorentz", alpha0, k0=k0)


def tabulated(points) -> PolarizabilityModel:
    pts = tuple((float(u), float(a)) for u, a in points)
    if not pts:
        raise ValueError("tabulated model needs at least two points")
    return PolarizabilityModel("tabulated", pts[0][1], table=pts)


def load_table(path) -> PolarizabilityModel:
    """Read a two-column ``u_cm^-1,alpha_cm^3`` CSV into a tabulated model."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty polarizability table")
    header = tuple(h.strip() for h in rows[0])
    if header != CSV_HEADER:
        raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}, got {','.join(header)}")
    try:
        pts = [(float(r[0]), float(r[1])) for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise ValueError(f"{path}: malformed row ({exc})") from None
    return tabulated(pts)


def eval_imag(model: PolarizabilityModel, u):
    """``alpha(iu)`` for ``u >= 0``."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("alpha(iu) is only defined here for u >= 0")
    if model.variant == "static":
        return (model.alpha0 + np.zeros_like(u))[()]
    if model.variant == "lorentz":
        return (model.alpha0 / (1.0 + (u / model.k0) ** 2))[()]

    u_tab, a_tab = np.asarray(model.table, dtype=float).T
    out = np.empty_like(u)
    lo = u <= u_tab[0]
    hi = u >= u_tab[-1]
    mid = ~(lo | hi)
    out[lo] = a_tab[0]
    out[hi] = a_tab[-1] * (u_tab[-1] / u[hi]) ** 2
    out[mid] = model._interp(u[mid])
    return out[()]


def eval_real(model: PolarizabilityModel, k):
    """``alpha(k)`` on the real axis (undamped)."""
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("alpha(k) needs k >= 0")
    if model.variant == "static":
        return (model.alpha0 + np.zeros_like(k))[()]
    if model.variant == "lorentz":
        if np.any(k == model.k0):
            raise ResonancePoleError(f"alpha(k) has a pole at k = k0 = {model.k0}")
        return (model.alpha0 / (1.0 - (k / model.k0) ** 2))[()]
    raise ValueError("tabulated models carry imaginary-axis data only")
