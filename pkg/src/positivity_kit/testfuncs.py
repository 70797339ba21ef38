"""Compactly supported even test functions g and their Fourier transforms h.

Three kernel families (rescaled self-convolutions of cosine powers) are
available, optionally divided by cosh(sigma x) and optionally "modified" to
(c^2 g + g'')/(c^2 g(0) + g''(0)), whose transform carries a factor
(c^2 - r^2). Derivatives of every order are exact (no finite differences).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_legendre

from .errors import DomainError, StripError

LOG2 = math.log(2.0)
FIRST_ZETA_ORDINATE = 14.13472
PI = math.pi

# (coefficient, kind, frequency multiple of pi/p); "lin" is (1 - x/p) cos(k w x),
# "sin" is sin(k w x), for x >= 0.
_FAMILIES = {
    1: ((1.0, "lin", 1), (1.0 / PI, "sin", 1)),
    2: ((2.0 / 3.0, "lin", 0), (1.0 / 3.0, "lin", 2), (1.0 / (2 * PI), "sin", 2)),
    3: ((0.9, "lin", 1), (0.1, "lin", 3), (27.0 / (60 * PI), "sin", 1),
        (11.0 / (60 * PI), "sin", 3)),
}


@dataclass(frozen=True)
class TestFunction:
    """One member of the test-function library.

    ``sech_scale`` is sigma in the smoothing factor 1/cosh(sigma x). The
    transform of sech(sigma x) is (pi/sigma) sech(pi r / (2 sigma)), positive
    for |Im r| < sigma, so smoothed transforms are positive in that strip;
    sigma = 0.5 gives the standard cosh(x/2) smoothing.
    """
    __test__ = False  # keep pytest from collecting this class

    family: int
    p: float = LOG2
    smoothing: bool = True
    modified: bool = False
    c: float = FIRST_ZETA_ORDINATE
    sech_scale: float = 0.5

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown family {self.family}")
        if not (self.p > 0 and math.isfinite(self.p)):
            raise DomainError("support half-length p must be positive")
        if not self.c > 0:
            raise DomainError("cutoff c must be positive")
        if self.smoothing and not self.sech_scale > 0:
            raise DomainError("sech_scale must be positive")
        if self.modified and not abs(_norm_const(self)) > 1e-12:
            raise DomainError("modified normalisation c^2 + g''(0) vanishes")

    @property
    def strip_halfwidth(self) -> float:
        """Half-width of the horizontal strip where h is guaranteed positive."""
        return self.sech_scale if self.smoothing else 0.0

    def with_(self, **kw) -> "TestFunction":
        return replace(self, **kw)

    def __call__(self, x):
        return g_eval(self, x)


def g1(**kw) -> TestFunction:
    return TestFunction(1, **kw)


def g2(**kw) -> TestFunction:
    return TestFunction(2, **kw)


def g3(**kw) -> TestFunction:
    return TestFunction(3, **kw)


def g1m(**kw) -> TestFunction:
    return TestFunction(1, **{"smoothing": False, "modified": True, **kw})


def g2m(**kw) -> TestFunction:
    return TestFunction(2, **{"smoothing": False, "modified": True, **kw})


def g3m(**kw) -> TestFunction:
    return TestFunction(3, **{"smoothing": False, "modified": True, **kw})


# ---------------------------------------------------------------------------
# exact derivatives on [0, p)
# ---------------------------------------------------------------------------

def _kernel_deriv(family: int, p: float, x: np.ndarray, n: int) -> np.ndarray:
    """n-th derivative of the unsmoothed kernel at 0 <= x < p."""
    w = PI / p
    out = np.zeros_like(x, dtype=float)
    for coef, kind, k in _FAMILIES[family]:
        kap = k * w
        if kind == "lin":
            out += coef * ((1 - x / p) * kap ** n * np.cos(kap * x + n * PI / 2)
                           - (n / p) * kap ** (n - 1) * np.cos(kap * x + (n - 1) * PI / 2)
                           if n > 0 else (1 - x / p) * np.cos(kap * x))
        else:
            out += coef * kap ** n * np.sin(kap * x + n * PI / 2)
    return out


@lru_cache(maxsize=None)
def _sech_poly(k: int) -> np.ndarray:
    # d^k/du^k sech(u) = sech(u) P_k(tanh u),  P_{k+1} = -T P_k + (1 - T^2) P_k'
    poly = np.array([1.0])
    for _ in range(k):
        poly = npoly.polyadd(npoly.polymul([0.0, -1.0], poly),
                             npoly.polymul([1.0, 0.0, -1.0], npoly.polyder(poly)))
    return poly


def _sech_deriv(sigma: float, x: np.ndarray, k: int) -> np.ndarray:
    u = sigma * x
    return sigma ** k / np.cosh(u) * npoly.polyval(np.tanh(u), _sech_poly(k))


def _base_deriv(tf: TestFunction, x: np.ndarray, n: int) -> np.ndarray:
    """n-th derivative of kernel (times sech if smoothed), 0 <= x < p."""
    if not tf.smoothing:
        return _kernel_deriv(tf.family, tf.p, x, n)
    out = np.zeros_like(x, dtype=float)
    for j in range(n + 1):
        out += math.comb(n, j) * _kernel_deriv(tf.family, tf.p, x, j) \
            * _sech_deriv(tf.sech_scale, x, n - j)
    return out


def _norm_const(tf: TestFunction) -> float:
    zero = np.zeros(1)
    return float(tf.c ** 2 * _base_deriv(tf, zero, 0)[0] + _base_deriv(tf, zero, 2)[0])


def g_derivative(tf: TestFunction, x, order: int = 0):
    """Exact ``order``-th derivative of g.

    g is even, so g^(n)(-x) = (-1)^n g^(n)(x). At the kinks x = 0 and
    x = +-p the one-sided value from inside (0, p) is returned.
    """
    if order < 0:
        raise DomainError("derivative order must be >= 0")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ax = np.abs(x)
    inside = ax < tf.p
    edge = ax == tf.p
    # evaluate at the inside point for |x| = p so one-sided limits come out
    xa = np.where(inside | edge, ax, 0.0)
    if tf.modified:
        val = (tf.c ** 2 * _base_deriv(tf, xa, order) + _base_deriv(tf, xa, order + 2)) \
            / _norm_const(tf)
    else:
        val = _base_deriv(tf, xa, order)
    if order == 0:
        val = np.where(inside, val, 0.0)
    else:
        val = np.where(inside | edge, val, 0.0)
    if order % 2:
        val = np.where(x < 0, -val, val)
    return float(val[0]) if scalar else val


def g_eval(tf: TestFunction, x):
    """g(x); exactly 0 for |x| >= p."""
    return g_derivative(tf, x, 0)


def g_second_derivative(tf: TestFunction, x):
    return g_derivative(tf, x, 2)


def modified_denominator(tf: TestFunction) -> float:
    """c^2 g(0) + g''(0) of the underlying (unmodified) function."""
    return _norm_const(tf)


# ---------------------------------------------------------------------------
# Fourier transforms
# ---------------------------------------------------------------------------

class TransformValue(NamedTuple):
    r: complex
    value: complex
    err: float = 0.0


def _sinc_half(u):
    # s(u) = sin(u/2)/(u/2), entire, safe for complex u
    u = np.asarray(u, dtype=complex) / 2
    small = np.abs(u) < 1e-4
    safe = np.where(small, 1.0, u)
    u2 = u * u
    return np.where(small, 1 - u2 / 6 + u2 * u2 / 120, np.sin(safe) / safe)


def closed_form_available(tf: TestFunction) -> bool:
    return tf.modified and not tf.smoothing


def h_closed_form(tf: TestFunction, r):
    """Exact transform of the unsmoothed modified functions.

    The rational-trigonometric closed forms are rewritten as sums of
    s(u) = sin(u/2)/(u/2) so the removable singularities at pr = k pi
    disappear.
    """
    if not closed_form_available(tf):
        raise DomainError("closed form exists only for modified, unsmoothed functions")
    r = np.asarray(r, dtype=complex)
    p, c = tf.p, tf.c
    t = p * r
    s = _sinc_half
    cr = c * c - r * r
    if tf.family == 1:
        P = (s(t - PI) + s(t + PI)) / (4 * PI)
        return -8 * p ** 3 * PI ** 2 * cr * P * P / (PI ** 2 - c * c * p * p)
    if tf.family == 2:
        Q = -s(t) / (8 * PI ** 2) - (s(t - 2 * PI) + s(t + 2 * PI)) / (16 * PI ** 2)
        return 128 * p ** 3 * PI ** 4 * cr * Q * Q / (3 * c * c * p * p - 4 * PI ** 2)
    R = ((s(t - 3 * PI) + s(t + 3 * PI)) / (12 * PI)
         + (s(t - PI) + s(t + PI)) / (4 * PI)) / (8 * PI ** 2)
    return 2304 * p ** 3 * PI ** 6 * cr * R * R / (5 * c * c * p * p - 9 * PI ** 2)


@lru_cache(maxsize=32)
def _gl(n: int):
    return roots_legendre(n)


@lru_cache(maxsize=256)
def _weighted_nodes(tf: TestFunction, n: int):
    x, w = _gl(n)
    x = 0.5 * tf.p * (x + 1)
    return x, 0.5 * tf.p * w * g_eval(tf, x)


def _h_gauss(tf: TestFunction, r: np.ndarray, n: int) -> np.ndarray:
    x, gw = _weighted_nodes(tf, n)
    return 2 * np.cos(np.multiply.outer(r, x)) @ gw


def h_quadrature(tf: TestFunction, r):
    """h(r) = 2 int_0^p g(x) cos(rx) dx by Gauss-Legendre; returns (value, err).

    g is analytic on (0, p), so the error is estimated by comparing two
    rules of different order.
    """
    r = np.asarray(r, dtype=complex)
    big = float(np.max(np.abs(r))) if r.size else 0.0
    n = 48 + int(2 * big * tf.p) + 4 * int(np.max(np.abs(r.imag), initial=0.0) * tf.p)
    n = 8 * (n // 8 + 1)  # coarse bucketing keeps the node cache small
    v1 = _h_gauss(tf, r, n)
    v2 = _h_gauss(tf, r, n + 24)
    err = np.abs(v2 - v1) + 1e-15 * np.abs(v2)
    return v2, err


def _check_strip(tf: TestFunction, r: np.ndarray):
    if tf.smoothing and np.any(np.abs(np.asarray(r).imag) >= tf.sech_scale):
        raise StripError(
            f"smoothed transform requested outside |Im r| < {tf.sech_scale}")


def h_eval(tf: TestFunction, r, method: str = "auto"):
    """Fourier transform h(r) = int g(x) e^{irx} dx (even, so a cosine transform).

    ``method`` is "closed", "quad" or "auto" (closed form when available).
    Scalars return a TransformValue, arrays a (value, err) pair of arrays.
    """
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=complex))
    _check_strip(tf, r)
    if method == "closed" or (method == "auto" and closed_form_available(tf)):
        val = h_closed_form(tf, r)
        err = 1e-14 * (np.abs(val) + 1e-300)
    elif method in ("quad", "auto"):
        val, err = h_quadrature(tf, r)
    else:
        raise ValueError(f"unknown method {method!r}")
    if scalar:
        return TransformValue(complex(r[0]), complex(val[0]), float(err[0]))
    return val, err


def h_real(tf: TestFunction, r):
    """Real-line transform as float array (the imaginary part vanishes there)."""
    val, err = h_eval(tf, np.asarray(r, dtype=float).reshape(-1))
    return val.real, err


class StripCheck(NamedTuple):
    ok: bool
    minimum: float
    at: complex
    min_margin: float


def strip_positivity_check(tf: TestFunction, re_values, im_values) -> StripCheck:
    """Check Re h > quadrature error at every node of a rectangular grid."""
    re_values = np.asarray(re_values, dtype=float)
    im_values = np.asarray(im_values, dtype=float)
    if np.any(np.abs(im_values) > 0.98 * tf.sech_scale):
        raise StripError("grid leaves the positivity strip")
    z = (re_values[None, :] + 1j * im_values[:, None]).ravel()
    val, err = h_eval(tf, z)
    margin = val.real - err
    i = int(np.argmin(margin))
    return StripCheck(bool(margin[i] > 0), float(val.real[np.argmin(val.real)]),
                      complex(z[i]), float(margin[i]))


def sign_grid(tf: TestFunction, re_values, im_values) -> np.ndarray:
    """Sign of Re h(x + iy) on a grid, rows indexed by y. Strip checks apply."""
    re_values = np.asarray(re_values, dtype=float)
    im_values = np.asarray(im_values, dtype=float)
    z = re_values[None, :] + 1j * im_values[:, None]
    val, _ = h_eval(tf, z.ravel())
    return np.sign(val.real).reshape(z.shape).astype(int)


def pole_integral(tf: TestFunction, nodes: int = 64) -> TransformValue:
    """int_R g(x) (e^{x/2} + e^{-x/2}) dx, i.e. 2 h(i/2).

    g is smooth on (0, p), so Gauss-Legendre on [0, p] converges fast; the
    error is the difference against a rule with 32 more nodes.
    """
    def rule(n):
        t, w = leggauss(n)
        x = 0.5 * tf.p * (t + 1)
        return 2.0 * tf.p * float(np.dot(w, g_eval(tf, x) * np.cosh(x / 2)))

    coarse, fine = rule(nodes), rule(nodes + 32)
    return TransformValue(0.5j, fine, abs(fine - coarse) + 1e-15 * abs(fine))
