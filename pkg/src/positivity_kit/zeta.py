"""End-to-end check of the explicit formula for the Riemann zeta function.

For an even test function g with transform h,

    2 sum_{gamma > 0} h(gamma)
        = int g(x) (e^{x/2} + e^{-x/2}) dx + 2 Re l(0) - 2 sum_n Lambda(n)/sqrt(n) g(log n),

summing over ordinates of the nontrivial zeros. The zero side is truncated
at the last ingested ordinate and the remainder is bounded with the zero
density log(r / 2 pi) / (2 pi) and an integration-by-parts envelope of h.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError
from .lterm import l_exp_route
from .testfuncs import TestFunction, g_derivative, g_eval, h_eval, pole_integral

FIRST_ORDINATE = 14.134725141734693


@dataclass(frozen=True)
class ZeroList:
    gammas: tuple[float, ...]
    source: str

    def __len__(self) -> int:
        return len(self.gammas)

    def head(self, count: int) -> "ZeroList":
        return ZeroList(self.gammas[:count], self.source)


def load_zeros(path) -> ZeroList:
    """Read one positive ordinate per line; '#' starts a comment."""
    path = Path(path)
    gammas: list[float] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                value = float(line)
            except ValueError:
                raise DomainError(f"{path}:{lineno}: cannot parse {line!r}") from None
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{path}:{lineno}: ordinate must be positive")
            if gammas and value <= gammas[-1]:
                raise DomainError(f"{path}:{lineno}: ordinates must be strictly increasing")
            gammas.append(value)
    return ZeroList(tuple(gammas), str(path))


def bundled_zeros(count: int = 100) -> ZeroList:
    """The packaged tables of the first 100 or 1000 ordinates."""
    if count not in (100, 1000):
        raise DomainError("bundled tables hold 100 or 1000 zeros")
    ref = resources.files("positivity_kit") / "data" / f"zeta_zeros_{count}.txt"
    with resources.as_file(ref) as path:
        return load_zeros(path)


def von_mangoldt(n: int) -> float:
    if n < 1:
        raise DomainError("n must be positive")
    if n == 1:
        return 0.0
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return math.log(p) if n == 1 else 0.0
        p += 1
    return math.log(n)


class CoefficientSum(NamedTuple):
    n_max: int
    value: float


def prime_sum(tf: TestFunction) -> CoefficientSum:
    """sum_{n < e^p} Lambda(n) / sqrt(n) g(log n)."""
    n_max = int(math.floor(math.exp(tf.p)))
    total = 0.0
    for n in range(2, n_max + 1):
        lam = von_mangoldt(n)
        if lam:
            total += lam / math.sqrt(n) * float(g_eval(tf, math.log(n)))
    return CoefficientSum(n_max, total)


def transform_envelope(tf: TestFunction, nodes: int = 200) -> dict[int, float]:
    """Constants A_k with |h(r)| <= sum_k A_k / r^k (k = 1..4), for r > 0.

    Integrating by parts four times, the boundary terms are the jumps of
    g^(k-1) at 0 and +-p, and the remainder is bounded by the L1 norm of g''''.
    """
    p = tf.p
    edge = np.array([p * (1 - 1e-12)])
    zero = np.array([0.0])
    env = {}
    for k in range(1, 5):
        d = k - 1
        jump = 2 * abs(float(g_derivative(tf, edge, d)[0]))
        if d % 2 == 1:  # odd derivatives of an even function jump at 0
            jump += 2 * abs(float(g_derivative(tf, zero, d)[0]))
        env[k] = jump
    t, w = leggauss(nodes)
    x = 0.5 * p * (t + 1)
    env[4] += p * float(np.dot(w, np.abs(g_derivative(tf, x, 4))))
    return env


def _log_moment(k: int, start: float) -> float:
    """int_start^inf r^-k log(r / 2 pi) dr for k >= 2."""
    a = k - 1
    return start ** -a * (math.log(start / (2 * math.pi)) / a + 1 / a ** 2)


def zero_tail_bound(tf: TestFunction, start: float, safety: float = 2.0) -> float:
    """Bound on 2 sum_{gamma > start} |h(gamma)| using the zero density."""
    env = transform_envelope(tf)
    if env[1] > 1e-12:
        return math.inf
    integral = sum(a * _log_moment(k, start) for k, a in env.items() if k >= 2)
    return 2 * safety * integral / (2 * math.pi)


class ExplicitFormulaResult(NamedTuple):
    lhs: float
    rhs: float
    residual: float
    tail_bound: float
    quad_err: float
    zeros_used: int

    @property
    def ok(self) -> bool:
        return abs(self.residual) <= self.tail_bound + self.quad_err


def explicit_formula_residual(zeros: ZeroList, tf: TestFunction) -> ExplicitFormulaResult:
    """Both sides of the explicit formula for zeta with a plain smoothed g."""
    if len(zeros) == 0:
        raise DomainError("need at least one zero")
    if tf.modified or not tf.smoothing:
        raise DomainError("use a plain smoothed test function")
    if abs(zeros.gammas[0] - FIRST_ORDINATE) > 1e-4:
        raise DomainError("the zero list must start at the first zero")
    gam = np.array(zeros.gammas)
    vals, errs = h_eval(tf, gam)
    lhs = 2 * float(np.sum(vals.real))
    lhs_err = 2 * float(np.sum(errs))
    pole = pole_integral(tf)
    l0 = l_exp_route(tf, 0.0)
    rhs = pole.value + 2 * l0.value.real - 2 * prime_sum(tf).value
    quad_err = lhs_err + pole.err + 2 * l0.err + 1e-14 * abs(rhs)
    tail = zero_tail_bound(tf, float(gam[-1]))
    return ExplicitFormulaResult(lhs, rhs, lhs - rhs, tail, quad_err, len(zeros))
