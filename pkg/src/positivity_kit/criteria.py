"""Positivity criteria and the grid certificates built on them.

For an L-function with gamma factors prod Gamma_R(s + eta_j) and conductor D,
a plain test function g (h >= 0 on the critical strip) gives

    sum over zeros h(gamma) = 2 sum Re l(eta_j) + g(0) log D,

so a negative right side rules the L-function out. A modified function
g_m has h_m <= 0 on real r > c, so a positive right side forces a zero of
height at most c. All certificates here reduce to sign checks of such sums
on grids, with the between-node variation bounded by a sampled
second-derivative bound (doubled).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .lterm import l_exp_route
from .testfuncs import LOG2, TestFunction, g1, g1m, g2m, g3, g3m, g_eval, pole_integral

NON_EXISTENCE = "NonExistence"
LOW_ZERO = "LowZero"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ArchimedeanData:
    """Gamma-factor shifts and conductor of a (hypothetical) L-function."""
    degree: int
    conductor: float
    shifts: tuple[complex, ...]

    def __post_init__(self):
        shifts = tuple(complex(s) for s in self.shifts)
        object.__setattr__(self, "shifts", shifts)
        if self.degree < 1 or len(shifts) != self.degree:
            raise DomainError("need exactly `degree` shifts")
        if not self.conductor >= 1:
            raise DomainError("conductor must be >= 1")
        if any(s.real <= -0.5 for s in shifts):
            raise DomainError("shifts must satisfy Re eta > -1/2")


class CriterionVerdict(NamedTuple):
    existence_sum: float
    existence_err: float
    lowzero_sum: float
    lowzero_err: float
    verdict: str
    lowzero_flag: bool


def _sum_with_error(tf: TestFunction, data: ArchimedeanData, polar: bool):
    lv = l_exp_route(tf, np.array(data.shifts))
    g0 = float(g_eval(tf, 0.0))
    total = 2 * float(np.sum(lv.value.real)) + g0 * math.log(data.conductor)
    err = 2 * float(np.sum(lv.err))
    if polar:
        pole = pole_integral(tf)
        total += pole.value
        err += pole.err
    return total, err


def evaluate_criteria(data: ArchimedeanData, plain: TestFunction, modified: TestFunction,
                      polar: bool = False, max_support: float = LOG2) -> CriterionVerdict:
    """Apply both positivity criteria to ``data``.

    ``polar=True`` adds the pole contribution int g (e^{x/2} + e^{-x/2}) for
    L-functions with a simple pole at s = 1 (zeta, Rankin-Selberg squares).
    Both test functions must be supported in [-max_support, max_support] so
    that no prime coefficient enters.
    """
    for tf, name in ((plain, "plain"), (modified, "modified")):
        if tf.p > max_support + 1e-12:
            raise DomainError(f"{name} test function support {tf.p} exceeds {max_support}")
        if abs(float(g_eval(tf, 0.0)) - 1.0) > 1e-12:
            raise DomainError(f"{name} test function is not normalised to g(0) = 1")
    if plain.modified or not modified.modified:
        raise DomainError("expected a plain and a modified test function")
    e_sum, e_err = _sum_with_error(plain, data, polar)
    z_sum, z_err = _sum_with_error(modified, data, polar)
    low = z_sum - z_err > 0
    if e_sum + e_err < 0:
        verdict = NON_EXISTENCE
    elif low:
        verdict = LOW_ZERO
    else:
        verdict = INCONCLUSIVE
    return CriterionVerdict(e_sum, e_err, z_sum, z_err, verdict, low)


# ---------------------------------------------------------------------------
# margin-certified grid scans
# ---------------------------------------------------------------------------

class GridCheck(NamedTuple):
    """Certification of ``values > 0`` on a grid, extended to the whole interval."""
    name: str
    ok: bool
    lo: float
    hi: float
    step: float
    min_margin: float
    at: float
    max_err: float
    curvature: float
    failures: tuple


def certify_positive(name: str, nodes: np.ndarray, values: np.ndarray,
                      err: np.ndarray) -> GridCheck:
    """Positivity of a sampled function over [nodes[0], nodes[-1]].

    Inside a cell of width h the function lies above its chord minus
    M h^2 / 8, where M bounds |f''|; M is twice the largest sampled second
    difference in the cell's neighbourhood. The cell passes when this lower
    bound beats 3x the node error.
    """
    h = np.diff(nodes)
    slopes = np.diff(values) / h
    if values.size >= 3:
        curv = np.abs(np.diff(slopes)) / (0.5 * (h[:-1] + h[1:]))
        curv = np.concatenate([[curv[0]], curv, [curv[-1]]])
    else:
        curv = np.zeros(h.size + 1)
    # cell k touches second differences k-1, k, k+1 (indices into the padded array)
    padded = np.concatenate([[curv[0]], curv, [curv[-1]]])
    local = 2 * np.maximum(np.maximum(padded[:-3], padded[1:-2]),
                           np.maximum(padded[2:-1], padded[3:]))
    margin = np.minimum(values[:-1], values[1:]) - local * h * h / 8
    cell_err = np.maximum(err[:-1], err[1:])
    bad = margin <= 3 * cell_err
    i = int(np.argmin(margin))
    failures = tuple(float(x) for x in nodes[:-1][bad][:20])
    return GridCheck(name, not bool(bad.any()), float(nodes[0]), float(nodes[-1]),
                     float(h.max()), float(margin[i]), float(nodes[i]),
                     float(err.max()), float(local.max()), failures)


def _re_l(tf: TestFunction, eta: np.ndarray):
    lv = l_exp_route(tf, eta, strict=False)
    return lv.value.real, lv.err


# ---------------------------------------------------------------------------
# real shifts: l_1 < l_3m
# ---------------------------------------------------------------------------

@dataclass
class RealArchReport:
    grid: GridCheck
    tail: GridCheck
    tail_l1_min: float
    tail_l3m_min: float
    fallback_ok: bool

    @property
    def ok(self) -> bool:
        return self.grid.ok and self.tail.ok and self.fallback_ok


def realarch_grid_proof(eta_max: float = 100.0, step: float = 0.01,
                        plain: TestFunction | None = None,
                        modified: TestFunction | None = None,
                        tail_max: float = 1e6) -> RealArchReport:
    """Certify l_1(eta) < l_3m(eta) for real eta in [-0.499, eta_max].

    Beyond ``eta_max`` both functions are positive (Stirling growth), so any
    shift there only helps the low-zero sum; this is checked on a geometric
    grid up to ``tail_max`` together with the difference itself.
    """
    if step <= 0:
        raise DomainError("step must be positive")
    plain = plain or g1()
    modified = modified or g3m()
    eta = np.arange(-0.499, eta_max + step / 2, step)
    a, ea = _re_l(plain, eta)
    b, eb = _re_l(modified, eta)
    grid = certify_positive("l3m - l1 on real axis", eta, b - a, ea + eb)
    far = np.geomspace(eta_max, tail_max, 400)
    fa, fea = _re_l(plain, far)
    fb, feb = _re_l(modified, far)
    tail = certify_positive("l3m - l1 tail", far, fb - fa, fea + feb)
    fallback = bool(np.all(fa - fea > 0) and np.all(fb - feb > 0))
    return RealArchReport(grid, tail, float(fa.min()), float(fb.min()), fallback)


# ---------------------------------------------------------------------------
# real shifts: the N / S / P partition argument with l_2m
# ---------------------------------------------------------------------------

def _bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-9) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise DomainError("no sign change in bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm * flo > 0:
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _extremum(f: Callable[[float], float], lo: float, hi: float, sign: float,
              samples: int = 400) -> tuple[float, float]:
    """Global min (sign=+1) or max (sign=-1) of f on [lo, hi]: grid, then Brent."""
    xs = np.linspace(lo, hi, samples)
    vals = np.array([sign * f(x) for x in xs])
    k = int(np.argmin(vals))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, samples - 1)]
    best_x, best = xs[k], vals[k]
    if b > a:
        res = minimize_scalar(lambda x: sign * f(x), bounds=(a, b), method="bounded",
                              options={"xatol": 1e-10})
        if res.fun < best:
            best_x, best = float(res.x), float(res.fun)
    return float(best_x), float(sign * best)


@dataclass
class PartitionConstants:
    """Interval boundaries and extremal values of the partition argument.

    N = (-1/2, n_end]: l_2m <= 0 and l_1 - l_2m <= 0,
    S = (n_end, p_start]: l_2m > 0 and l_1 - l_2m <= 0,
    P = (p_start, inf): both positive.
    """
    n_end: float
    p_start: float
    sign_pattern_ok: bool
    min_l1_n: float
    min_l2m_n: float
    max_diff_n: float
    min_l1_p: float
    min_l2m_p: float
    max_diff_p: float
    max_diff_p_at: float
    # ratios as the published argument forms them
    ratio_from_sum: float = field(init=False)
    ratio_from_diff: float = field(init=False)

    def __post_init__(self):
        self.ratio_from_sum = self.min_l1_p / abs(self.min_l1_n)
        self.ratio_from_diff = self.max_diff_p / abs(self.max_diff_n)


@dataclass
class PartitionReport:
    """Outcome of the partition argument.

    Interval form: sum l_2m < 0 forces |N|/|P| > ``lower`` and
    sum (l_1 - l_2m) > 0 forces |N|/|P| < ``upper``; these only clash if
    upper < lower. Pointwise form: with kappa_n = min over N and
    kappa_p = max over P of (l_1 - l_2m)/l_2m, the two sums are incompatible
    whenever kappa_p < kappa_n.
    """
    constants: PartitionConstants
    lower: float
    upper: float
    interval_contradiction: bool
    published_order_reproduced: bool
    kappa_n: float
    kappa_n_at: float
    kappa_p: float
    kappa_p_at: float

    @property
    def contradiction(self) -> bool:
        return self.kappa_p < self.kappa_n


def realarch_partition_proof(plain: TestFunction | None = None,
                             modified: TestFunction | None = None) -> PartitionReport:
    """Recompute the N/S/P partition constants and test the ratio argument.

    The argument assumes both criteria fail, i.e. sum l_2m < 0 and
    sum (l_1 - l_2m) > 0; shifts in S only strengthen both inequalities
    once dropped. Interval bounds on |N|/|P| are derived in their valid
    direction, the published pairing of the same constants is reported
    alongside, and the pointwise ratio test decides the contradiction.
    """
    plain = plain or g1(sech_scale=1.0)
    modified = modified or g2m()

    def l1(e):
        return float(l_exp_route(plain, e, strict=False).value.real)

    def l2m(e):
        return float(l_exp_route(modified, e, strict=False).value.real)

    def diff(e):
        return l1(e) - l2m(e)

    n_end = _bisect(l2m, 4.0, 7.0)
    p_start = _bisect(diff, 7.0, 12.0)
    # sign pattern on a grid, both sides of each boundary
    grid = np.concatenate([np.linspace(-0.4999, 40, 2000), np.geomspace(40, 1e5, 200)])
    a = l_exp_route(plain, grid, strict=False).value.real
    b = l_exp_route(modified, grid, strict=False).value.real
    in_n, in_p = grid <= n_end, grid > p_start
    in_s = ~in_n & ~in_p
    pattern = (np.all(b[in_n] <= 0) and np.all(a[in_n] - b[in_n] <= 0)
               and np.all(b[in_s] > 0) and np.all(a[in_s] - b[in_s] <= 0)
               and np.all(b[in_p] > 0) and np.all(a[in_p] - b[in_p] > 0))
    edge = -0.5
    min_l1_n = min(l1(edge), _extremum(l1, edge, n_end, 1.0)[1])
    min_l2m_n = min(l2m(edge), _extremum(l2m, edge, n_end, 1.0)[1])
    max_diff_n = _extremum(diff, edge, n_end, -1.0)[1]
    # l_1 and l_2m increase on P; the minimum sits at the left end
    min_l1_p = min(l1(p_start), float(a[in_p].min()))
    min_l2m_p = min(l2m(p_start), float(b[in_p].min()))
    at, max_diff_p = _extremum(diff, p_start, 60.0, -1.0)
    far = float((a - b)[grid > 60].max())
    if far > max_diff_p:
        raise DomainError("difference l1 - l2m peaks beyond the search window")
    c = PartitionConstants(n_end, p_start, bool(pattern), min_l1_n, min_l2m_n, max_diff_n,
                           min_l1_p, min_l2m_p, max_diff_p, at)
    lower = c.min_l2m_p / abs(c.min_l2m_n)
    upper = c.max_diff_p / abs(c.max_diff_n)

    def ratio(e):
        return diff(e) / l2m(e)

    kn_at, kn = _extremum(ratio, edge, n_end - 1e-3, 1.0)
    kp_at, kp = _extremum(ratio, p_start + 1e-6, 60.0, -1.0)
    far_ratio = float(((a - b) / b)[grid > 60].max())
    if far_ratio > kp:
        raise DomainError("ratio on P peaks beyond the search window")
    return PartitionReport(c, lower, upper, upper < lower,
                           c.ratio_from_sum < c.ratio_from_diff, kn, kn_at, kp, kp_at)


# ---------------------------------------------------------------------------
# imaginary shifts: GL(2) certificates
# ---------------------------------------------------------------------------

@dataclass
class Gl2Report:
    checks: list[GridCheck]
    crossings: dict[str, float]
    crossing_ok: dict[str, bool]
    window_checks: list[GridCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and all(self.crossing_ok.values())


def _crossing(tf: TestFunction, sigma: float, level: float, lo: float, hi: float) -> float:
    return _bisect(lambda r: float(l_exp_route(tf, sigma + 1j * r).value.real) - level,
                   lo, hi, 1e-9)


def _implication(name: str, r: np.ndarray, sigma: float, weaker: TestFunction,
                 stronger: TestFunction) -> GridCheck:
    """Re l_stronger(sigma + ir) < 0 wherever Re l_weaker(sigma + ir) <= 0.

    Certified as positivity of -l_stronger on the sub-interval where the
    weaker function is not certifiably positive, extended one node.
    """
    w, ew = _re_l(weaker, sigma + 1j * r)
    s, es = _re_l(stronger, sigma + 1j * r)
    live = ~(w - 3 * ew > 0)
    last = int(np.nonzero(live)[0].max()) if live.any() else 0
    first_pos = np.nonzero(~live)[0]
    if first_pos.size and first_pos[0] <= last:
        raise DomainError(f"{name}: weaker function changes sign more than once")
    k = min(last + 2, r.size)
    return certify_positive(name, r[:k], -s[:k], es[:k])


def gl2_figure_checks(step: float = 0.005, r_max: float = 30.0,
                      sech_scale: float = 0.5) -> Gl2Report:
    """The four sign certificates used for tempered GL(2) Maass forms.

    1. even, conductor >= 3: Re(l_3m - l_1)(ir) > 0 on [0, 5.1] and
       Re l_3m(ir) > -log(3)/4 on [5.1, r_max];
    2. odd, conductor >= 2: the same at 1 + ir with window 5.5 and -log(2)/4;
    3. level 2 gap: Re l_1(ir) < -log(2)/4 on [0, 6.07] and
       Re l_1m(ir) > -log(2)/4 on [6.135, r_max], with both crossings located;
    4. full level: Re l_3 < 0 wherever Re l_1m <= 0, at ir and at 1 + ir.

    Symmetry in r reduces each window to r >= 0. The stronger window variants
    (Re l_1 below the threshold across the whole window) are reported in
    ``window_checks`` without entering ``ok``.
    """
    p1, p3 = g1(sech_scale=sech_scale), g3(sech_scale=sech_scale)
    m1, m3 = g1m(), g3m()
    q3, q2 = math.log(3) / 4, LOG2 / 4

    def grid(lo, hi):
        n = int(round((hi - lo) / step))
        return np.linspace(lo, hi, n + 1)

    def re_l(tf, sigma, r):
        return _re_l(tf, sigma + 1j * r)

    checks, windows = [], []
    for sigma, window, level, tag in ((0.0, 5.1, q3, "even"), (1.0, 5.5, q2, "odd")):
        r = grid(0.0, window)
        a, ea = re_l(p1, sigma, r)
        b, eb = re_l(m3, sigma, r)
        checks.append(certify_positive(f"{tag}: l3m - l1 on [0, {window}]", r, b - a, ea + eb))
        windows.append(certify_positive(f"{tag}: -(l1 + {level:.6f}) on [0, {window}]",
                                         r, -(a + level), ea))
        r = grid(window, r_max)
        b, eb = re_l(m3, sigma, r)
        checks.append(certify_positive(f"{tag}: l3m + {level:.6f} on [{window}, {r_max}]",
                                        r, b + level, eb))
    r = grid(0.0, 6.07)
    a, ea = re_l(p1, 0.0, r)
    checks.append(certify_positive("level 2: -(l1 + log2/4) on [0, 6.07]", r, -(a + q2), ea))
    r = grid(6.135, r_max)
    b, eb = re_l(m1, 0.0, r)
    checks.append(certify_positive("level 2: l1m + log2/4 on [6.135, r_max]", r, b + q2, eb))
    crossings = {"l1": _crossing(p1, 0.0, -q2, 5.5, 7.0),
                 "l1m": _crossing(m1, 0.0, -q2, 5.5, 7.0)}
    crossing_ok = {"l1": abs(crossings["l1"] - 6.07) <= 0.005,
                   "l1m": abs(crossings["l1m"] - 6.135) <= 0.005}
    r = grid(0.0, r_max)
    for sigma in (0.0, 1.0):
        checks.append(_implication(f"full level: l3 < 0 where l1m <= 0 at {sigma:g} + ir",
                                   r, sigma, m1, p3))
    return Gl2Report(checks, crossings, crossing_ok, windows)

