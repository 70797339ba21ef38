"""The archimedean functional l(eta) and the derived s(r) curve.

l(eta) = (1/2 pi) int_R h(r) Gamma_R'/Gamma_R(1/2 + eta + ir) dr is computed
two independent ways:

* the exponential route, an integral of g itself over [0, 2p] with the
  x -> 0 cancellation removed analytically;
* the digamma route, an integral of h against the digamma function, with
  the oscillatory tail handled by the asymptotic expansion of h.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as sp_integrate
from scipy.interpolate import CubicSpline
from scipy.special import exp1

from .errors import DomainError
from .specfun import LOG_PI, QuadratureSettings, gamma_r_logderiv, integrate
from .testfuncs import TestFunction, g_derivative, g_eval, h_eval

SIGMA_RANGE = (-0.5, 1.5)
# family 1 with support 1/2, smoothed by 1/cosh(x)
S_TEST_FUNCTION = TestFunction(1, p=0.5, smoothing=True, sech_scale=1.0)


class LValue(NamedTuple):
    eta: complex | np.ndarray
    value: complex | np.ndarray
    err: float | np.ndarray


def _check_eta(eta: np.ndarray, strict: bool):
    bad = eta.real < -0.5 if not strict else eta.real <= -0.5
    if np.any(bad):
        raise DomainError("l(eta) needs Re eta > -1/2")


# ---------------------------------------------------------------------------
# exponential route
# ---------------------------------------------------------------------------

_SMALL_X = 1e-3


def _b_term(x: np.ndarray) -> np.ndarray:
    # 1/(1 - e^-x) - e^-x/x, O(1) at 0
    small = x < _SMALL_X
    xs = np.where(small, 1.0, x)
    direct = 1.0 / -np.expm1(-xs) - np.exp(-xs) / xs
    series = 1.5 - 5 * x / 12 + x * x / 6 - 31 * x ** 3 / 720
    return np.where(small, series, direct)


@lru_cache(maxsize=64)
def _gl(n: int):
    return leggauss(n)


def _panels(a_max: float, two_p: float) -> list[float]:
    # geometric grading towards 0 where exp(-a x) varies on the scale 1/|a|
    scale = max(a_max, 1.0)
    edges = [0.0]
    k = -4
    while 2.0 ** k / scale < two_p:
        edges.append(2.0 ** k / scale)
        k += 1
    edges.append(two_p)
    return edges


def _panel_sum(tf: TestFunction, a: np.ndarray, lo: float, hi: float, n: int, g0: float):
    t, w = _gl(n)
    x = 0.5 * (hi - lo) * (t + 1) + lo
    w = 0.5 * (hi - lo) * w
    gx = g_eval(tf, x / 2)
    ax = a[..., None] * x
    num = (gx - g0) * np.exp(-ax) + g0 * np.expm1(-ax)
    f = num / -np.expm1(-x) + g0 * _b_term(x)
    return f @ w


def l_exp_route(tf: TestFunction, eta, strict: bool = True) -> LValue:
    """l(eta) from the exponential integral of g; vectorised over ``eta``.

    l = -(log pi)/2 g(0) - 1/2 int_0^2p F(x) dx + 1/2 g(0) E1(2p), with
    F = (g(x/2) e^{-ax} - g(0))/(1 - e^{-x}) + g(0) (1/(1 - e^{-x}) - e^{-x}/x)
    and a = 1/4 + eta/2. ``strict=False`` admits Re eta = -1/2 (l is entire).
    """
    scalar = np.ndim(eta) == 0
    eta = np.atleast_1d(np.asarray(eta, dtype=complex))
    _check_eta(eta, strict)
    a = 0.25 + eta / 2
    g0 = float(g_eval(tf, 0.0))
    two_p = 2 * tf.p
    edges = _panels(float(np.max(np.abs(a))), two_p)
    im_a = float(np.max(np.abs(a.imag)))
    total = np.zeros(eta.shape, dtype=complex)
    err = np.zeros(eta.shape)
    for lo, hi in zip(edges[:-1], edges[1:]):
        n = 20 + int(math.ceil(im_a * (hi - lo)))
        coarse = _panel_sum(tf, a, lo, hi, n, g0)
        fine = _panel_sum(tf, a, lo, hi, n + 12, g0)
        total += fine
        err += np.abs(fine - coarse)
    value = -0.5 * LOG_PI * g0 - 0.5 * total + 0.5 * g0 * exp1(two_p)
    err = 0.5 * err + 1e-15 * (np.abs(value) + 1.0)
    if scalar:
        return LValue(complex(eta[0]), complex(value[0]), float(err[0]))
    return LValue(eta, value, err)


# ---------------------------------------------------------------------------
# digamma route
# ---------------------------------------------------------------------------

def _psi_sym(s0: complex, r):
    # (psi_R(s0 + ir) + psi_R(s0 - ir)) / 2, the even part in r
    if np.ndim(r) == 0:
        r = float(r)
        return 0.5 * (gamma_r_logderiv(s0 + 1j * r) + gamma_r_logderiv(s0 - 1j * r))
    r = np.asarray(r, dtype=float)
    return 0.5 * (gamma_r_logderiv(s0 + 1j * r) + gamma_r_logderiv(s0 - 1j * r))


def _qawf(func, start: float, p: float, weight: str):
    with warnings.catch_warnings():
        # QUADPACK warns when the requested 1e-15 is not reached; the
        # achieved error estimate is returned and propagated instead
        warnings.simplefilter("ignore", sp_integrate.IntegrationWarning)
        re = sp_integrate.quad(lambda r: func(r).real, start, np.inf, weight=weight, wvar=p,
                               limlst=200, limit=400, epsabs=1e-15)
        im = sp_integrate.quad(lambda r: func(r).imag, start, np.inf, weight=weight, wvar=p,
                               limlst=200, limit=400, epsabs=1e-15)
    return re[0] + 1j * im[0], re[1] + im[1]


def _plain_tail(func, start: float):
    re = sp_integrate.quad(lambda r: func(r).real, start, np.inf, limit=400,
                           epsabs=1e-15, epsrel=1e-12)
    im = sp_integrate.quad(lambda r: func(r).imag, start, np.inf, limit=400,
                           epsabs=1e-15, epsrel=1e-12)
    return re[0] + 1j * im[0], re[1] + im[1]


def _tail(tf: TestFunction, s0: complex, cut: float, terms: int):
    """int_cut^inf h(r) Psi(r) dr from the integration-by-parts expansion of h.

    h(r) = 2 sum_k (-1)^k [g^(2k)(p-) sin(rp)/r^(2k+1)
                          + (g^(2k+1)(p-) cos(rp) - g^(2k+1)(0+)) / r^(2k+2)] + ...
    """
    p = tf.p
    inner = p * (1 - 1e-15)
    total = 0.0 + 0.0j
    err = 0.0
    for k in range(terms):
        sign = 2.0 * (-1) ** k
        ge = float(g_derivative(tf, inner, 2 * k))
        go = float(g_derivative(tf, inner, 2 * k + 1))
        g0 = float(g_derivative(tf, 0.0, 2 * k + 1))
        j1, j2 = 2 * k + 1, 2 * k + 2
        if ge != 0.0:
            v, e = _qawf(lambda r, j=j1: _psi_sym(s0, r) / r ** j, cut, p, "sin")
            total += sign * ge * v
            err += abs(sign * ge) * e
        if go != 0.0:
            v, e = _qawf(lambda r, j=j2: _psi_sym(s0, r) / r ** j, cut, p, "cos")
            total += sign * go * v
            err += abs(sign * go) * e
        if g0 != 0.0:
            v, e = _plain_tail(lambda r, j=j2: _psi_sym(s0, r) / r ** j, cut)
            total -= sign * g0 * v
            err += abs(sign * g0) * e
    # size of the first omitted term bounds the truncation
    k = terms
    nxt = max(abs(float(g_derivative(tf, inner, 2 * k))),
              abs(float(g_derivative(tf, inner, 2 * k + 1))) / cut,
              abs(float(g_derivative(tf, 0.0, 2 * k + 1))) / cut)
    psi_max = float(np.abs(_psi_sym(s0, np.array([cut]))).max()) + math.log(2.0)
    err += 2 * nxt * psi_max * cut ** (-2 * k) / (2 * k) * 4
    return total, err


_DIGAMMA_SETTINGS = QuadratureSettings(rel_tol=1e-13, abs_tol=1e-14, max_subdivisions=4000)


def l_digamma_route(tf: TestFunction, eta: complex, cut: float = 200.0, terms: int = 4,
                    settings: QuadratureSettings = _DIGAMMA_SETTINGS) -> LValue:
    """l(eta) = (1/pi) int_0^inf h(r) Psi(r) dr with Psi the even part of
    Gamma_R'/Gamma_R(1/2 + eta + ir); [0, cut] adaptively, the rest by the
    asymptotic expansion of h against oscillatory-weight quadrature."""
    eta = complex(eta)
    _check_eta(np.array([eta]), True)
    s0 = 0.5 + eta

    def f(r):
        h, _ = h_eval(tf, np.asarray(r, dtype=float))
        return h.real * _psi_sym(s0, r)

    pts = [abs(eta.imag)] + [x for x in (1.0, 5.0, 20.0, 50.0) if x < cut]
    body = integrate(f, 0.0, cut, settings, pts)
    tail, tail_err = _tail(tf, s0, cut, terms)
    value = (body.value + tail) / math.pi
    err = (float(body.error) + tail_err) / math.pi + 1e-14 * abs(value)
    return LValue(eta, complex(value), float(err))


def l_value(tf: TestFunction, eta, strict: bool = True) -> LValue:
    """Default evaluator (exponential route)."""
    return l_exp_route(tf, eta, strict)


# ---------------------------------------------------------------------------
# s(r) = max over sigma of Re l(ir + sigma)
# ---------------------------------------------------------------------------

class SFunctionSample(NamedTuple):
    r: float | np.ndarray
    s_value: float | np.ndarray
    argmax_sigma: float | np.ndarray
    err: float | np.ndarray


_GOLDEN = (math.sqrt(5) - 1) / 2


def _re_l(tf, r, sigma):
    lv = l_exp_route(tf, 1j * r + sigma, strict=False)
    return lv.value.real, lv.err


def s_function(r, tf: TestFunction = S_TEST_FUNCTION, sigma_step: float = 1 / 64,
               sigma_tol: float = 1e-8) -> SFunctionSample:
    """Coarse sigma grid, then golden-section refinement around the best node."""
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    lo_s, hi_s = SIGMA_RANGE
    sig = np.linspace(lo_s, hi_s, int(round((hi_s - lo_s) / sigma_step)) + 1)
    vals, _ = _re_l(tf, r[:, None], sig[None, :])
    i = np.argmax(vals, axis=1)
    a = sig[np.maximum(i - 1, 0)]
    b = sig[np.minimum(i + 1, len(sig) - 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, _ = _re_l(tf, r, c)
    fd, _ = _re_l(tf, r, d)
    while np.max(b - a) > sigma_tol:
        left = fc > fd
        # keep [a, d] when the max is left of d, else [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        keep = np.where(left, c, d)
        f_keep = np.where(left, fc, fd)
        new = np.where(left, b - _GOLDEN * (b - a), a + _GOLDEN * (b - a))
        f_new, _ = _re_l(tf, r, new)
        c = np.where(left, new, keep)
        d = np.where(left, keep, new)
        fc = np.where(left, f_new, f_keep)
        fd = np.where(left, f_keep, f_new)
    grid_best = vals[np.arange(len(r)), i]
    mid = 0.5 * (a + b)
    fm, em = _re_l(tf, r, mid)
    use_mid = fm >= grid_best
    sigma = np.where(use_mid, mid, sig[i])
    best = np.where(use_mid, fm, grid_best)
    _, err = _re_l(tf, r, sigma)
    if scalar:
        return SFunctionSample(float(r[0]), float(best[0]), float(sigma[0]), float(err[0]))
    return SFunctionSample(r, best, sigma, err)


def s_derivative(r: float, tf: TestFunction = S_TEST_FUNCTION, step: float = 1e-4) -> float:
    """Central difference of s, Richardson-extrapolated once."""
    def central(hh):
        v = s_function(np.array([r + hh, r - hh]), tf).s_value
        return (v[0] - v[1]) / (2 * hh)
    return float((4 * central(step / 2) - central(step)) / 3)


@dataclass(frozen=True)
class SGrid:
    """s sampled on [0, r_max] with step ``step``, even extension, cubic spline.

    ``max_err`` bounds the pointwise quadrature error of the samples and
    ``interp_err`` estimates the spline error from a half-step comparison.
    """
    step: float
    r_max: float
    r: np.ndarray
    s: np.ndarray
    max_err: float
    interp_err: float
    spline: CubicSpline

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        if np.any(r > self.r_max):
            raise DomainError(f"s-grid covers |r| <= {self.r_max}")
        return self.spline(r)

    def derivative(self, r, order: int = 1):
        sign = np.sign(r) ** order
        return sign * self.spline(np.abs(np.asarray(r, dtype=float)), order)


@lru_cache(maxsize=8)
def s_grid(step: float = 0.01, r_max: float = 30.0, tf: TestFunction = S_TEST_FUNCTION,
           chunk: int = 2000) -> SGrid:
    """Memoised s-grid (built once per parameter set)."""
    n = int(round(r_max / step))
    rs = np.arange(n + 1) * step
    svals = np.empty_like(rs)
    errs = np.empty_like(rs)
    for start in range(0, len(rs), chunk):
        smp = s_function(rs[start:start + chunk], tf)
        svals[start:start + chunk] = smp.s_value
        errs[start:start + chunk] = smp.err
    full_r = np.concatenate([-rs[:0:-1], rs])
    full_s = np.concatenate([svals[:0:-1], svals])
    spline = CubicSpline(full_r, full_s)
    # spline error: compare against exact values at a sample of midpoints
    probe = (np.arange(0, n, max(1, n // 400)) + 0.5) * step
    exact = s_function(probe, tf).s_value
    interp_err = float(np.max(np.abs(spline(probe) - exact)))
    return SGrid(step, float(rs[-1]), rs, svals, float(np.max(errs)), interp_err, spline)
