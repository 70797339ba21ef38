"""Special functions and quadrature used by every other module.

Everything here is pure numpy: complex digamma by recurrence plus Stirling,
the log-derivative of Gamma_R, K-Bessel functions of purely imaginary order
(with y-derivatives), and an adaptive Gauss-Kronrod integrator that accepts
vectorised, possibly vector-valued, integrands.
"""
from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import AccuracyLossError, DomainError, PoleError, QuadratureError

EULER_GAMMA = 0.57721566490153286061
LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    tail_cut: float = 1e-30

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.tail_cut > 0:
            raise ValueError("tail_cut must be positive")


DEFAULT_SETTINGS = QuadratureSettings()


class Quad(NamedTuple):
    value: complex | float | np.ndarray
    error: float | np.ndarray


# ---------------------------------------------------------------------------
# digamma
# ---------------------------------------------------------------------------

# B_2k for k = 1..10
_BERNOULLI = np.array([
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
    -3617 / 510, 43867 / 798, -174611 / 330,
])
_STIRLING = _BERNOULLI / (2 * np.arange(1, 11))
_LIFT = 10.0
_STIRLING_REV = tuple(float(c) for c in _STIRLING[::-1])


def _digamma_right(z: np.ndarray) -> np.ndarray:
    """psi(z) for Re z >= 0.5 (lift to Re z > 10, then Stirling)."""
    acc = np.zeros_like(z)
    z = z.copy()
    mask = z.real < _LIFT
    while mask.any():
        acc[mask] -= 1.0 / z[mask]
        z[mask] += 1.0
        mask = z.real < _LIFT
    w = 1.0 / (z * z)
    series = np.zeros_like(z)
    for coef in _STIRLING[::-1]:
        series = (series + coef) * w
    return acc + np.log(z) - 0.5 / z - series


def _digamma_scalar(z: complex) -> complex:
    # scalar fast path, used when no reflection is needed
    acc = 0j
    while z.real < _LIFT:
        acc -= 1.0 / z
        z += 1.0
    w = 1.0 / (z * z)
    series = 0j
    for coef in _STIRLING_REV:
        series = (series + coef) * w
    return acc + cmath.log(z) - 0.5 / z - series


def digamma(z, abs_tol: float = DEFAULT_SETTINGS.abs_tol):
    """Complex digamma psi(z) = Gamma'(z)/Gamma(z), vectorised.

    Accurate to about 1e-14 relative away from the poles; raises PoleError
    within ``abs_tol`` of a nonpositive integer.
    """
    scalar = np.ndim(z) == 0
    if scalar and complex(z).real >= 0.5:
        return _digamma_scalar(complex(z))
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    near = np.round(z.real)
    if np.any((near <= 0) & (np.abs(z - near) <= abs_tol)):
        raise PoleError("digamma evaluated at a pole of gamma")
    out = np.empty_like(z)
    left = z.real < 0.5
    if (~left).any():
        out[~left] = _digamma_right(z[~left])
    if left.any():
        zl = z[left]
        # psi(z) = psi(1 - z) - pi cot(pi z)
        out[left] = _digamma_right(1.0 - zl) - math.pi / np.tan(math.pi * zl)
    return out[0] if scalar else out


def gamma_r_logderiv(s, abs_tol: float = DEFAULT_SETTINGS.abs_tol):
    """Gamma_R'/Gamma_R(s) with Gamma_R(s) = pi^(-s/2) Gamma(s/2)."""
    if np.ndim(s) == 0:
        return -0.5 * LOG_PI + 0.5 * digamma(complex(s) / 2, abs_tol)
    return -0.5 * LOG_PI + 0.5 * digamma(np.asarray(s, dtype=complex) / 2, abs_tol)


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod (7/15)
# ---------------------------------------------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])
_EPS = np.finfo(float).eps


def _gk15(f, a: float, b: float):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = np.asarray(f(mid + half * _NODES))
    kron = fx @ _KW * half
    gauss = fx @ _GW * half
    mean = kron / (b - a)
    resasc = np.abs(fx - mean[..., None] if fx.ndim > 1 else fx - mean) @ _KW * abs(half)
    resabs = np.abs(fx) @ _KW * abs(half)
    diff = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        err = np.where(resasc > 0, resasc * np.minimum(1.0, (200 * diff / resasc) ** 1.5), diff)
    err = np.maximum(err, 50 * _EPS * resabs)
    return kron, err


def _adapt(f, a, b, settings: QuadratureSettings, points: Sequence[float] = ()):
    # errors are tracked per component of a vector integrand
    cuts = [a] + sorted({p for p in points if a < p < b}) + [b]
    pieces = [(lo, hi) + _gk15(f, lo, hi) for lo, hi in zip(cuts[:-1], cuts[1:])]
    total = sum(p[2] for p in pieces)
    total_err = sum(p[3] for p in pieces)

    def tol():
        return np.maximum(settings.abs_tol, settings.rel_tol * np.abs(total))

    heap = []
    counter = 0
    t = tol()
    for lo, hi, val, err in pieces:
        heapq.heappush(heap, (-float(np.max(err / t)), counter, lo, hi, val, err))
        counter += 1
    n_sub = len(heap)
    while np.any(total_err > tol()):
        if n_sub >= settings.max_subdivisions:
            raise QuadratureError(
                f"no convergence after {n_sub} subdivisions "
                f"(error {float(np.max(total_err)):.3g})")
        _, _, lo, hi, val, err = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            raise QuadratureError("interval underflow during subdivision")
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total = total - val + v1 + v2
        total_err = total_err - err + e1 + e2
        t = tol()
        heapq.heappush(heap, (-float(np.max(e1 / t)), counter, lo, mid, v1, e1))
        heapq.heappush(heap, (-float(np.max(e2 / t)), counter + 1, mid, hi, v2, e2))
        counter += 2
        n_sub += 1
    # re-sum to limit drift from the running updates
    total = sum(item[4] for item in heap)
    total_err = sum(item[5] for item in heap)
    return total, total_err


def _semi_infinite(f, a, settings, points):
    width = 1.0
    lo = a
    total = 0.0
    total_err = 0.0
    for _ in range(200):
        hi = lo + width
        inner = [p for p in points if lo < p < hi]
        val, err = _adapt(f, lo, hi, settings, inner)
        total = total + val
        total_err = total_err + err
        edge = np.abs(np.asarray(f(np.array([hi])))[..., 0])
        if np.max(np.abs(val)) <= settings.tail_cut * width and np.max(edge) < settings.tail_cut:
            # remaining tail bounded by the last panel under monotone decay
            return total, total_err + np.abs(val) + edge
        lo = hi
        width *= 2.0
    raise QuadratureError("integrand did not decay below tail_cut")


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              settings: QuadratureSettings = DEFAULT_SETTINGS,
              points: Sequence[float] = ()) -> Quad:
    """Adaptive 7/15-point Gauss-Kronrod quadrature of a vectorised ``f``.

    ``f`` maps an array of abscissae to values of the same length (real or
    complex) or to an array of shape ``(m, len(x))`` for vector integrands.
    ``b`` may be ``+inf`` and ``a`` may be ``-inf``: infinite tails are
    marched in doubling panels and cut once the integrand drops below
    ``settings.tail_cut``, with the cut bound added to the error. For vector
    integrands the error is an array with one estimate per component.
    """
    if a == b:
        return Quad(0.0, 0.0)
    if a > b:
        val, err = integrate(f, b, a, settings, points)
        return Quad(-val, err)
    if math.isinf(a) and math.isinf(b):
        right = integrate(f, 0.0, math.inf, settings, [p for p in points if p > 0])
        left = integrate(lambda x: f(-x), 0.0, math.inf, settings, [-p for p in points if p < 0])
        return Quad(right.value + left.value, right.error + left.error)
    if math.isinf(a):
        return integrate(lambda x: f(-x), -b, math.inf, settings, [-p for p in points])
    if math.isinf(b):
        return _pack(*_semi_infinite(f, a, settings, list(points)))
    return _pack(*_adapt(f, a, b, settings, points))


def _pack(val, err) -> Quad:
    err = np.asarray(err, dtype=float)
    return Quad(val, float(err) if err.ndim == 0 else err)


# ---------------------------------------------------------------------------
# K-Bessel of imaginary order
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BesselOrder:
    """Purely imaginary Bessel order i*r."""
    r: float

    def __post_init__(self):
        if not math.isfinite(self.r):
            raise ValueError("Bessel order must be finite")


_BESSEL_SETTINGS = QuadratureSettings(rel_tol=1e-12, abs_tol=1e-13, max_subdivisions=4000)


def _as_order(order) -> float:
    return order.r if isinstance(order, BesselOrder) else float(order)


def _contour_angle(r: float, y: float) -> float:
    # For r > y the real-line integral cancels down to ~exp(-pi r/2 + y);
    # shifting the line to Im u = pi/2 - 3/r leaves a cancellation of ~exp(-3).
    r = abs(r)
    if r <= max(y, 2.0):
        return 0.0
    return math.pi / 2 - 3.0 / r


def bessel_k_im_derivs(order, y: float, max_deriv: int = 3,
                       settings: QuadratureSettings = _BESSEL_SETTINGS) -> Quad:
    """All y-derivatives 0..max_deriv of K_{ir}(y) from a single quadrature.

    K_{ir}(y) = int_0^inf exp(-y cosh u) cos(ru) du
              = 1/2 int_R exp(-y cosh(t + i theta) + i r (t + i theta)) dt,
    differentiated under the integral sign. The line is shifted off the real
    axis (theta > 0) when the real-line integrand would cancel heavily.
    Returns a Quad whose value and error are arrays of length
    ``max_deriv + 1``; the errors are relative, one per derivative.
    """
    r = abs(_as_order(order))  # K_{ir} is even in r
    if not y > 0:
        raise DomainError("bessel_k_im needs y > 0")
    if not 0 <= max_deriv <= 3:
        raise DomainError("derivative order must be in 0..3")
    theta = _contour_angle(r, y)
    cos_t = math.cos(theta)
    yc = y * cos_t
    shift = 1j * theta
    k = np.arange(max_deriv + 1)
    # peak of x^k exp(-yc (x - 1)) over x >= 1, used to put components on O(1)
    peak_x = np.maximum(1.0, k / yc)
    peak = peak_x ** k * np.exp(-yc * (peak_x - 1.0))
    # cut where yc (cosh t - 1) exceeds 70 plus room for (cosh t)^k
    room = 70.0 + max_deriv * math.log(1.0 + 70.0 / yc)
    t_max = math.acosh(1.0 + room / yc)

    def kernel(t):
        ch = np.cosh(t + shift)
        base = np.exp(-y * (ch - cos_t) + 1j * r * t)
        return (-ch) ** k[:, None] * base / peak[:, None]

    turns = (abs(r) * t_max + y * math.sinh(t_max) * math.sin(theta)) / math.pi
    n_break = min(int(turns), 4000)
    pts = list(np.linspace(-t_max, t_max, 2 * n_break + 3)[1:-1])
    val, err = integrate(kernel, -t_max, t_max, settings, pts)
    scale = 0.5 * math.exp(-yc - r * theta) * peak
    vals = np.real(val) * scale
    denom = np.maximum(np.abs(vals), 1e-300)
    rel = (err + np.abs(np.imag(val))) * scale / denom
    return Quad(vals, rel)


def bessel_k_im(order, y: float, deriv: int = 0,
                settings: QuadratureSettings = _BESSEL_SETTINGS,
                strict: bool = True) -> float:
    """d^deriv/dy^deriv K_{ir}(y) for real r and y > 0.

    Raises AccuracyLossError when the propagated relative error estimate
    exceeds ``settings.rel_tol`` (only when ``strict``).
    """
    if not 0 <= deriv <= 3:
        raise DomainError("derivative order must be in 0..3")
    vals, rel = bessel_k_im_derivs(order, y, deriv, settings)
    if strict and rel[deriv] > max(settings.rel_tol, 1e-10):
        raise AccuracyLossError(
            f"K_(i{_as_order(order)})({y}) relative error {rel[deriv]:.2g}")
    return float(vals[deriv])


def bessel_k_im_t_integral(order, y: float,
                           settings: QuadratureSettings = _BESSEL_SETTINGS) -> float:
    """K_{ir}(y) = 1/2 int_0^inf exp(-y(t + 1/t)/2) t^{ir} dt/t, computed in t.

    The ray is rotated to t = s exp(i theta) when needed. Kept as an
    independent check on :func:`bessel_k_im`.
    """
    r = abs(_as_order(order))  # K_{ir} is even in r
    if not y > 0:
        raise DomainError("bessel_k_im needs y > 0")
    theta = _contour_angle(r, y)
    rot = np.exp(1j * theta)
    c = math.cos(theta)

    def f(s):
        t = s * rot
        return 0.5 * np.exp(-y * ((t + 1.0 / t) / 2 - c) + 1j * r * np.log(s)) / s

    # int_0^1 f(s) ds = int_1^inf f(1/s)/s^2 ds
    right = integrate(f, 1.0, math.inf, settings)
    left = integrate(lambda s: f(1.0 / s) / s ** 2, 1.0, math.inf, settings)
    return float(np.real(right.value + left.value)) * math.exp(-y * c - r * theta)
