"""Laplace eigenvalue bounds on SL_n(Z)\\SL_n(R)/SO_n(R).

Cusp forms: if sum_j s(Im mu_j) < 0 no cusp form has those parameters, so
the largest d for which every trace-zero (r_j) with sum r_j^2 = d gives a
negative sum yields lambda > d/2 + (n^3 - 4n)/24. Extremal configurations
take at most three distinct values, which reduces the search to a one
parameter scan per partition (A, B, C) of n.

Residues of Eisenstein series: explicit parameter shifts and the resulting
eigenvalues, and the table ruling out small eigenvalues for n < 68.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .lterm import S_TEST_FUNCTION, SGrid, s_function, s_grid

# radius below which s < 0 (squared: 51.84)
TRIVIAL_RADIUS = 7.2
HEJHAL_MU = 9.534
HEJHAL_SUM_SQ_ROUNDED = 181.8
LUBOTZKY_N = 68


@dataclass(frozen=True)
class LanglandsParams:
    """Langlands parameters mu_1..mu_n of an eigenfunction.

    ``cuspidal`` enforces the trivial bound |Re mu_j| < 1/2; residues of
    Eisenstein series violate it by construction.
    """
    n: int
    mu: tuple
    cuspidal: bool = True

    def __post_init__(self):
        mu = tuple(complex(m) for m in self.mu)
        object.__setattr__(self, "mu", mu)
        if len(mu) != self.n:
            raise DomainError(f"expected {self.n} parameters, got {len(mu)}")
        if self.cuspidal and any(abs(m.real) >= 0.5 for m in mu):
            raise DomainError("cuspidal parameters need |Re mu| < 1/2")

    @property
    def imaginary_parts(self) -> np.ndarray:
        return np.array([m.imag for m in self.mu])


def laplace_eigenvalue(params: LanglandsParams) -> float:
    """lambda = (n^3 - n)/24 - (mu_1^2 + ... + mu_n^2)/2, which must be real."""
    n = params.n
    lam = (n ** 3 - n) / 24 - sum(m * m for m in params.mu) / 2
    if abs(lam.imag) > 1e-12 * max(1.0, abs(lam.real)):
        raise DomainError(f"eigenvalue is not real: {lam}")
    return float(lam.real)


def eigenvalue_from_d(n: int, d: float) -> float:
    """Lower bound lambda > d/2 + (n^3 - 4n)/24 when sum (Im mu)^2 > d."""
    return d / 2 + (n ** 3 - 4 * n) / 24


class TrivialBound(NamedTuple):
    n: int
    sum_sq: float
    eigenvalue: float
    minus_sum_mu_sq: float


def trivial_bound(n: int, radius: float = TRIVIAL_RADIUS) -> TrivialBound:
    """sum r_j^2 > radius^2 (1 + 1/(n-1)): one |r_j| >= radius, the rest
    balancing the trace at the least cost."""
    if n < 2:
        raise DomainError("trivial bound needs n >= 2")
    d = radius ** 2 * (1 + 1 / (n - 1))
    return TrivialBound(n, d, eigenvalue_from_d(n, d), d - n / 4)


def negative_radius(grid: SGrid | None = None) -> float:
    """First r > 0 where s(r) >= 0 (grid resolution)."""
    grid = grid or s_grid()
    idx = int(np.argmax(grid.s >= 0))
    if grid.s[idx] < 0:
        return math.inf
    return float(grid.r[idx - 1])


# ---------------------------------------------------------------------------
# three-value extremal scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThreeValueConfig:
    n: int
    d: float
    A: int
    B: int
    C: int
    resolution: int = 20000

    def __post_init__(self):
        if not (self.A >= self.B >= self.C > 0 and self.A + self.B + self.C == self.n):
            raise DomainError("need A >= B >= C > 0 with A + B + C = n")
        if not self.d > 0:
            raise DomainError("d must be positive")

    @property
    def r3_range(self) -> float:
        A, B, C = self.A, self.B, self.C
        return math.sqrt((A + B) * self.d / (C * (A + B + C)))


def partitions(n: int):
    """All (A, B, C) with A >= B >= C > 0 and A + B + C = n."""
    out = []
    for C in range(1, n // 3 + 1):
        for B in range(C, (n - C) // 2 + 1):
            A = n - B - C
            if A >= B:
                out.append((A, B, C))
    return out


def three_value_points(cfg: ThreeValueConfig, phi):
    """(r1, r2, r3) on the constraint circle, parametrised by angle phi.

    r3 = R sin(phi) and the square root of the discriminant is carried as
    R cos(phi) times a constant, so phi in [-pi/2, 3pi/2] runs over both
    solution branches continuously.
    """
    A, B, C, n = cfg.A, cfg.B, cfg.C, cfg.n
    R = cfg.r3_range
    phi = np.asarray(phi, dtype=float)
    r3 = R * np.sin(phi)
    root = math.sqrt(A * B * C * n) * R * np.cos(phi)
    r1 = -(A * C * r3 + root) / (A * (A + B))
    r2 = (-B * C * r3 + root) / (B * (A + B))
    return r1, r2, r3


def _objective(cfg, s, phi):
    r1, r2, r3 = three_value_points(cfg, phi)
    return cfg.A * s(r1) + cfg.B * s(r2) + cfg.C * s(r3)


class ThreeValueResult(NamedTuple):
    config: ThreeValueConfig
    maximum: float
    argmax: tuple
    bound: float      # certified upper bound for the maximum
    pad: float        # curvature + interpolation + quadrature allowance


def three_value_max(cfg: ThreeValueConfig, grid: SGrid | None = None,
                    exact_check: bool = True) -> ThreeValueResult:
    """Maximum of A s(r1) + B s(r2) + C s(r3) over the feasible circle.

    Local maxima of the sampled objective are refined with a bounded scalar
    search; the sampled maximum is padded by h^2/8 max|F''| so the bound
    also holds between samples.
    """
    grid = grid or s_grid()
    if math.sqrt(cfg.d) > grid.r_max:
        raise DomainError(f"d = {cfg.d} exceeds the s-grid range")
    M = cfg.resolution
    phi = np.linspace(-math.pi / 2, 3 * math.pi / 2, M + 1)
    vals = _objective(cfg, grid, phi)
    # second derivative in phi for the curvature pad
    A, B, C = cfg.A, cfg.B, cfg.C
    r1, r2, r3 = three_value_points(cfg, phi)
    d1 = three_value_points(cfg, phi + math.pi / 2)  # derivative of sin/cos pair
    dd = tuple(-x for x in (r1, r2, r3))              # second derivative
    f2 = 0.0
    for w, r, dr, ddr in zip((A, B, C), (r1, r2, r3), d1, dd):
        f2 = f2 + w * (grid.derivative(r, 2) * dr * dr + grid.derivative(r, 1) * ddr)
    h = phi[1] - phi[0]
    curvature_pad = 2.0 * h * h / 8 * float(np.max(np.abs(f2)))

    best, best_phi = -math.inf, None
    peaks = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    top = peaks[np.argsort(vals[peaks])[::-1][:8]]
    for i in top:
        lo, hi = phi[i] - h, phi[i] + h
        res = minimize_scalar(lambda t: -float(_objective(cfg, grid, t)), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12})
        v = max(-res.fun, float(vals[i]))
        if v > best:
            best, best_phi = v, (res.x if -res.fun >= vals[i] else phi[i])
    r1b, r2b, r3b = (float(x) for x in three_value_points(cfg, best_phi))
    err = cfg.n * (grid.interp_err + grid.max_err)
    if exact_check:
        # replace the spline value by direct evaluation at the maximiser
        exact = s_function(np.array([r1b, r2b, r3b]), S_TEST_FUNCTION)
        direct = float(A * exact.s_value[0] + B * exact.s_value[1] + C * exact.s_value[2])
        err = max(err, abs(direct - best))
        best = max(best, direct)
    pad = curvature_pad + err
    return ThreeValueResult(cfg, best, (r1b, r2b, r3b), best + pad, pad)


class PartitionScan(NamedTuple):
    n: int
    d: float
    worst: ThreeValueResult
    certified: bool


def scan_partitions(n: int, d: float, grid: SGrid | None = None,
                    resolution: int = 20000) -> PartitionScan:
    """Worst partition for (n, d); certified iff its maximum is negative with
    the pad, and the margin exceeds three times the pad."""
    grid = grid or s_grid()
    worst = None
    for A, B, C in partitions(n):
        res = three_value_max(ThreeValueConfig(n, d, A, B, C, resolution), grid)
        if worst is None or res.bound > worst.bound:
            worst = res
    ok = worst.bound < 0 and -worst.maximum > 3 * worst.pad
    return PartitionScan(n, d, worst, ok)


class EigenRow(NamedTuple):
    n: int
    d: int
    eigenvalue: float
    margin_at_d: float
    max_at_d_plus_1: float


def certified_d(n: int, grid: SGrid | None = None, lo: int = 1, hi: int | None = None,
                resolution: int = 20000) -> EigenRow:
    """Largest integer d (bisection) for which the scan is certified negative."""
    grid = grid or s_grid()
    hi = hi or int(grid.r_max ** 2)
    if not scan_partitions(n, lo, grid, resolution).certified:
        raise DomainError(f"no certifiable d for n = {n}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if scan_partitions(n, mid, grid, resolution).certified:
            lo = mid
        else:
            hi = mid
    at = scan_partitions(n, lo, grid, resolution)
    above = scan_partitions(n, lo + 1, grid, resolution)
    return EigenRow(n, lo, eigenvalue_from_d(n, lo), float(at.worst.maximum),
                    float(above.worst.maximum))


def eigenvalue_bound_table(n_values: Sequence[int] = range(3, 9),
                           grid: SGrid | None = None) -> list[EigenRow]:
    grid = grid or s_grid()
    return [certified_d(n, grid) for n in n_values]


def monte_carlo_excess(n: int, d: float, samples: int = 100_000, seed: int = 0,
                       grid: SGrid | None = None) -> tuple[float, float]:
    """(largest random sum s, three-value maximum) over the feasible sphere."""
    grid = grid or s_grid()
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, n))
    x -= x.mean(axis=1, keepdims=True)
    x *= math.sqrt(d) / np.linalg.norm(x, axis=1, keepdims=True)
    sums = grid(x.ravel()).reshape(x.shape).sum(axis=1)
    best = max(three_value_max(ThreeValueConfig(n, d, *abc), grid, exact_check=False).maximum
               for abc in partitions(n))
    return float(sums.max()), float(best)


# ---------------------------------------------------------------------------
# residues of Eisenstein series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueSpec:
    a: int
    r: int
    mu_cusp: tuple = field(default=())

    def __post_init__(self):
        if self.a < 1 or self.r < 1:
            raise DomainError("need a >= 1 and r >= 1")
        mu = tuple(complex(m) for m in self.mu_cusp) or (0j,) * self.a
        if len(mu) != self.a:
            raise DomainError("mu_cusp must have a entries")
        object.__setattr__(self, "mu_cusp", mu)

    @property
    def n(self) -> int:
        return self.a * self.r


def residue_shifts(r: int) -> np.ndarray:
    """h = ((r-1)/2, (r-3)/2, ..., -(r-1)/2)."""
    return (r - 1) / 2 - np.arange(r)


def residue_params(spec: ResidueSpec) -> LanglandsParams:
    mu = [m + h for h in residue_shifts(spec.r) for m in spec.mu_cusp]
    return LanglandsParams(spec.n, tuple(mu), cuspidal=False)


def residue_identity_rhs(spec: ResidueSpec) -> float:
    """-r sum mu_j^2 - a (r^3 - r)/12, which equals 2 lambda - (n^3 - n)/12."""
    s2 = sum(m * m for m in spec.mu_cusp)
    return float((-spec.r * s2 - spec.a * (spec.r ** 3 - spec.r) / 12).real)


def hejhal_threshold(sum_sq: float = HEJHAL_SUM_SQ_ROUNDED) -> float:
    """r below which r * sum_sq - 2 (r^3 - r)/12 stays positive (a = 2)."""
    return math.sqrt(6 * sum_sq + 1)


def hejhal_residue_eigenvalue(r: int = 34, mu: float = HEJHAL_MU,
                              sum_sq: float | None = None) -> float:
    """lambda of the residue built from the first SL_2 Maass form, n = 2r."""
    n = 2 * r
    s2 = 2 * mu * mu if sum_sq is None else sum_sq
    two_lam = (n ** 3 - n) / 12 + r * s2 - 2 * (r ** 3 - r) / 12
    return two_lam / 2


class LubotzkyRow(NamedTuple):
    a: int
    r_max: int
    lower: float
    upper: float
    contradiction: bool


def lubotzky_rows(d_small: dict[int, float] | None = None,
                  radius: float = TRIVIAL_RADIUS) -> list[LubotzkyRow]:
    """Rows a = 3..34. ``d_small`` maps a in 3..8 to its certified d; other
    rows use the trivial bound."""
    d_small = d_small or {}
    rows = []
    for a in range(3, 35):
        r = LUBOTZKY_N // a
        if a in d_small:
            lower = d_small[a] - a / 4
        else:
            lower = trivial_bound(a, radius).minus_sum_mu_sq
        upper = a * (r * r - 1) / 12
        rows.append(LubotzkyRow(a, r, lower, upper, lower > upper))
    return rows


class LubotzkyReport(NamedTuple):
    threshold: float
    threshold_exact: float
    eigenvalue_68: float
    eigenvalue_68_rounded: float
    bound_68: float
    rows: list


def lubotzky_table(d_small: dict[int, float] | None = None) -> LubotzkyReport:
    n = LUBOTZKY_N
    return LubotzkyReport(
        threshold=hejhal_threshold(),
        threshold_exact=hejhal_threshold(2 * HEJHAL_MU ** 2),
        eigenvalue_68=hejhal_residue_eigenvalue(),
        eigenvalue_68_rounded=hejhal_residue_eigenvalue(sum_sq=HEJHAL_SUM_SQ_ROUNDED),
        bound_68=(n ** 3 - n) / 24,
        rows=lubotzky_rows(d_small),
    )
