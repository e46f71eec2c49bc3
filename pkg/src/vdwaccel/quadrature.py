"""Semi-infinite quadrature for dispersion integrals.

Two engines live here:

* :func:`integrate_damped` handles integrands on ``[0, inf)`` that decay
  either exponentially (the ``exp(-2uR)`` imaginary-frequency integrals) or
  algebraically (bare polarizability products).  It runs a globally adaptive
  Gauss-Kronrod (7, 15) scheme on a finite head interval and maps the tail
  onto ``(0, 1]`` with ``x -> X/s``.

* :func:`integrate_oscillatory` defines the classically divergent
  ``k^n sin/cos(2kR)`` integrals by Abel regularisation: the integral is
  evaluated with an ``exp(-eps k)`` damping for a decreasing sequence of
  ``eps`` and Richardson-extrapolated to ``eps = 0``.

Both are deterministic: panels are visited and summed in a fixed order.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadratureSpec",
    "QuadratureResult",
    "QuadratureError",
    "OscillatoryIntegrand",
    "integrate_damped",
    "integrate_oscillatory",
    "abel_moment",
    "laplace_moment",
]


class QuadratureError(RuntimeError):
    """Raised when an integral fails to converge or does not stabilise."""


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-30
    max_subdivisions: int = 200
    # None -> eps_n = 0.5 R 2**-n, n = 0..7
    regulator_sequence: tuple[float, ...] | None = None
    richardson_order: int = 3
    # Abel extrapolation cannot reach rel_tol in double precision
    oscillatory_rel_tol: float = 1e-4

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.regulator_sequence is not None:
            seq = np.asarray(self.regulator_sequence, dtype=float)
            if seq.ndim != 1 or len(seq) < 2:
                raise ValueError("regulator_sequence needs at least two values")
            if np.any(seq <= 0) or np.any(np.diff(seq) >= 0):
                raise ValueError(
                    "regulator_sequence must be positive and strictly decreasing"
                )

    def regulators(self, R: float) -> np.ndarray:
        if self.regulator_sequence is not None:
            return np.asarray(self.regulator_sequence, dtype=float)
        return default_regulators(R)


def default_regulators(R: float, levels: int = 8) -> np.ndarray:
    # eps multiplies k, so it carries units of length
    return (0.5 * R) * 2.0 ** -np.arange(levels)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool
    # oscillatory mode only: the damped values I(eps) that were extrapolated
    levels: tuple[float, ...] = field(default=(), repr=False)


# Gauss-Kronrod (7, 15) abscissae and weights on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-node layout: -x0..-x6, 0, x6..x0
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GWEIGHTS = np.zeros(15)
# Gauss nodes sit at odd Kronrod indices (x1, x3, x5) and the centre.
for _i, _w in zip((1, 3, 5), _WG[:3]):
    _GWEIGHTS[_i] = _w
    _GWEIGHTS[14 - _i] = _w
_GWEIGHTS[7] = _WG[3]


def _gk15(g: Callable[[np.ndarray], np.ndarray], a: float, b: float):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = np.asarray(g(mid + half * _NODES), dtype=float)
    if not np.all(np.isfinite(y)):
        raise QuadratureError(f"non-finite integrand on panel [{a}, {b}]")
    kron = half * float(np.dot(_KWEIGHTS, y))
    gauss = half * float(np.dot(_GWEIGHTS, y))
    return kron, abs(kron - gauss)


def integrate_damped(
    f: Callable[[np.ndarray], np.ndarray],
    scale: float,
    spec: QuadratureSpec | None = None,
    head: float = 64.0,
) -> QuadratureResult:
    """Integrate ``f(u)`` over ``u`` in ``[0, inf)``.

    Parameters
    ----------
    f : callable
        Vectorised integrand.  Must be finite on ``(0, inf)`` and decay at
        least like ``u**-2`` (exponential decay is the intended case).
    scale : float
        Characteristic decay length in ``u``; ``1/(2R)`` for the
        ``exp(-2uR)`` integrals.  The integrand is rescaled to ``x = u/scale``
        so panel placement does not depend on the unit system.
    spec : QuadratureSpec, optional
    head : float
        End of the finite head interval in scaled units.  Beyond it the tail
        is integrated in ``s = head/x``.

    Returns
    -------
    QuadratureResult
    """
    spec = spec or QuadratureSpec()
    if not scale > 0:
        raise ValueError("scale must be positive")

    def g_head(x):
        return f(x * scale) * scale

    def g_tail(s):
        x = head / s
        return g_head(x) * head / (s * s)

    # (neg_err, order, a, b, which, value, err); order keeps ties deterministic
    heap = []
    evaluations = 0
    order = 0
    breaks = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, head]
    pieces = [(breaks[i], breaks[i + 1], 0) for i in range(len(breaks) - 1)]
    pieces.append((0.0, 1.0, 1))
    for a, b, which in pieces:
        val, err = _gk15(g_tail if which else g_head, a, b)
        evaluations += 15
        heapq.heappush(heap, (-err, order, a, b, which, val, err))
        order += 1

    subdivisions = 0
    while True:
        total = math.fsum(item[5] for item in heap)
        err_total = math.fsum(item[6] for item in heap)
        if err_total <= max(spec.rel_tol * abs(total), spec.abs_tol):
            return QuadratureResult(total, err_total, evaluations, True)
        if subdivisions >= spec.max_subdivisions:
            raise QuadratureError(
                f"integrate_damped did not converge after {subdivisions} "
                f"subdivisions (value {total:.6e}, error {err_total:.3e})"
            )
        _, _, a, b, which, _, _ = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        g = g_tail if which else g_head
        for lo, hi in ((a, mid), (mid, b)):
            val, err = _gk15(g, lo, hi)
            evaluations += 15
            heapq.heappush(heap, (-err, order, lo, hi, which, val, err))
            order += 1
        subdivisions += 1


@dataclass(frozen=True)
class OscillatoryIntegrand:
    """Integrand of the form ``p_sin(k) sin(2kR) + p_cos(k) cos(2kR)``.

    The amplitudes must be smooth and non-oscillatory.  Passing this instead
    of a bare callable lets the integrator evaluate the trigonometric factor
    with exact half-period phase reduction, which keeps the small-``eps``
    levels free of the phase rounding that otherwise grows like ``k R``.
    """

    p_sin: Callable[[np.ndarray], np.ndarray] | None = None
    p_cos: Callable[[np.ndarray], np.ndarray] | None = None

    def evaluate(self, k, R):
        k = np.asarray(k, dtype=float)
        out = np.zeros_like(k)
        if self.p_sin is not None:
            out = out + self.p_sin(k) * np.sin(2 * k * R)
        if self.p_cos is not None:
            out = out + self.p_cos(k) * np.cos(2 * k * R)
        return out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
# Gauss-Legendre nodes mapped onto one half period [0, pi] of x = 2kR.
_Y = 0.5 * math.pi * (_GL_NODES + 1.0)
_WY = 0.5 * math.pi * _GL_WEIGHTS
_SIN_Y = np.sin(_Y)
_COS_Y = np.cos(_Y)


def _damped_level(f, R: float, eps: float, cutoff: float = 60.0):
    """``int_0^inf f(k) exp(-eps k) dk`` over half-period panels of ``2kR``."""
    z = eps / (2.0 * R)  # damping rate in x = 2kR
    n_panels = int(math.ceil(cutoff / (z * math.pi)))
    m = np.arange(n_panels, dtype=float)[:, None]
    x = m * math.pi + _Y[None, :]
    k = x / (2.0 * R)
    damp = np.exp(-z * x)
    if isinstance(f, OscillatoryIntegrand):
        sign = np.where(m % 2 == 0, 1.0, -1.0)
        vals = np.zeros_like(x)
        if f.p_sin is not None:
            vals += np.asarray(f.p_sin(k), dtype=float) * (sign * _SIN_Y)
        if f.p_cos is not None:
            vals += np.asarray(f.p_cos(k), dtype=float) * (sign * _COS_Y)
    else:
        vals = np.asarray(f(k), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("non-finite integrand in oscillatory integral")
    terms = (vals * damp) * _WY[None, :]
    # dk = dx / (2R)
    return math.fsum(terms.ravel()) / (2.0 * R), x.size


def _richardson(levels: Sequence[float], ratio: float, order: int):
    """Richardson table for ``I(eps) = I0 + c1 eps + c2 eps^2 + ...``.

    ``table[j][m]`` has the first ``m`` powers of ``eps`` eliminated using
    levels ``j-m .. j``.
    """
    table = [[float(v)] for v in levels]
    for j in range(1, len(levels)):
        for m in range(1, min(j, order) + 1):
            prev = table[j][m - 1]
            table[j].append(prev + (prev - table[j - 1][m - 1]) / (ratio ** m - 1.0))
    return table


def _best_extrapolant(table, order: int):
    """Pick the row whose order-``order`` increment is smallest.

    Small-``eps`` levels eventually lose digits to cancellation, so the
    increments fall geometrically and then rise again; the minimum marks the
    most trustworthy extrapolant.
    """
    top = min(order, len(table) - 2)
    best = None
    for j in range(top + 1, len(table)):
        inc = abs(table[j][top] - table[j - 1][top])
        if best is None or inc <= best[1]:
            best = (table[j][top], inc)
    return best


def integrate_oscillatory(
    f: Callable[[np.ndarray], np.ndarray] | OscillatoryIntegrand,
    R: float,
    spec: QuadratureSpec | None = None,
) -> QuadratureResult:
    """Abel-regularised ``int_0^inf f(k) dk`` for ``f ~ k^n trig(2kR)``.

    The damped integral ``I(eps) = int f(k) exp(-eps k) dk`` is computed on
    the regulator sequence and extrapolated to ``eps -> 0`` with a Richardson
    table of order ``spec.richardson_order``.  The sequence must be geometric.
    The error estimate is the last extrapolation increment of the selected
    row.

    Raises
    ------
    QuadratureError
        If the extrapolants do not settle (the input is not Abel summable).
    """
    spec = spec or QuadratureSpec()
    if not R > 0:
        raise ValueError("R must be positive")
    eps = spec.regulators(R)
    ratios = eps[:-1] / eps[1:]
    if not np.allclose(ratios, ratios[0], rtol=1e-12):
        raise ValueError("regulator sequence must be geometric")

    values = []
    evaluations = 0
    for e in eps:
        val, n = _damped_level(f, R, float(e))
        values.append(val)
        evaluations += n

    table = _richardson(values, float(ratios[0]), spec.richardson_order)
    value, err = _best_extrapolant(table, spec.richardson_order)
    scale = max(abs(value), max(abs(v) for v in values))
    if not np.isfinite(value) or err > 1e-2 * scale:
        raise QuadratureError(
            f"oscillatory integral did not stabilise: value {value:.6e}, "
            f"last increment {err:.3e}"
        )
    converged = err <= max(spec.oscillatory_rel_tol * abs(value), spec.abs_tol)
    return QuadratureResult(value, err, evaluations, converged, tuple(values))


def laplace_moment(n: int, R: float) -> float:
    """``int_0^inf u^n exp(-2uR) du = n! / (2R)^(n+1)``."""
    return math.factorial(n) / (2.0 * R) ** (n + 1)


def abel_moment(n: int, R: float, kind: str) -> float:
    """Abel-regularised ``int_0^inf k^n trig(2kR) dk``.

    Equals ``n! trig((n+1) pi/2) / (2R)^(n+1)`` with ``trig`` the same
    function as in the integrand.
    """
    phase = (n + 1) % 4
    if kind == "sin":
        t = (0.0, 1.0, 0.0, -1.0)[phase]
    elif kind == "cos":
        t = (1.0, 0.0, -1.0, 0.0)[phase]
    else:
        raise ValueError("kind must be 'sin' or 'cos'")
    return math.factorial(n) * t / (2.0 * R) ** (n + 1)
