"""Rankin-Selberg positivity for cohomological cusp forms on SL_n(Z).

A cusp form contributing to cuspidal cohomology with constant coefficients
has a fixed archimedean type, so L(s, pi x pi~) has known integer gamma
shifts mu_jk. Its pole at s = 1 gives the positivity condition

    int g(x) (e^{x/2} + e^{-x/2}) dx + 2 sum Re l(mu_jk) >= 0

for any g whose transform is nonnegative on the critical strip (prime
coefficients are nonnegative and dropped, the conductor is 1). A negative
left side shows no such form exists.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError
from .lterm import l_exp_route
from .testfuncs import TestFunction, g1, pole_integral


@dataclass(frozen=True)
class CohomClass:
    n: int
    mu_multiset: tuple[int, ...]

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def t(self) -> int:
        return self.n % 2


def build_multiset(n: int) -> CohomClass:
    """Gamma shifts of L(s, pi x pi~) for the cohomological type of SL_n.

    With m = n // 2 and t = n % 2 the multiset is
    {t+j+k, t-1+j+k, |k-j|, 1+|k-j| : 1 <= j, k <= m}, plus
    {0, j, j, j+1, j+1 : 1 <= j <= m} when n is odd; n^2 entries in all.
    """
    if n < 2:
        raise DomainError("n must be at least 2")
    m, t = divmod(n, 2)
    mu = []
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            mu += [t + j + k, t - 1 + j + k, abs(k - j), 1 + abs(k - j)]
    if t:
        mu.append(0)
        for j in range(1, m + 1):
            mu += [j, j, j + 1, j + 1]
    assert len(mu) == n * n
    return CohomClass(n, tuple(sorted(mu)))


def polar_closed_form(p: float) -> float:
    """Pole term for g_{1,p} smoothed by 1/cosh(x/2): 2 int of the kernel = 16p/pi^2."""
    return 16.0 * p / math.pi ** 2


class RSValue(NamedTuple):
    n: int
    p: float
    value: float
    err: float


@lru_cache(maxsize=None)
def _l_at_integers(p: float, sech_scale: float, top: int) -> tuple[np.ndarray, np.ndarray]:
    lv = l_exp_route(g1(p=p, sech_scale=sech_scale), np.arange(top + 1, dtype=float))
    return lv.value.real, lv.err


def rs_positivity_lhs(cls: CohomClass, p: float, sech_scale: float = 0.5) -> RSValue:
    """Left side of the Rankin-Selberg positivity condition with g = g_{1,p}.

    l is evaluated once per integer shift and reused across classes.
    """
    if not p > 0:
        raise DomainError("p must be positive")
    tf = g1(p=p, sech_scale=sech_scale)
    top = max(cls.mu_multiset)
    vals, errs = _l_at_integers(float(p), float(sech_scale), top)
    counts = np.bincount(np.array(cls.mu_multiset), minlength=top + 1)
    pole = pole_integral(tf)
    value = pole.value + 2 * float(counts @ vals)
    err = pole.err + 2 * float(counts @ errs)
    return RSValue(cls.n, float(p), value, err)


def default_p(n: int) -> float:
    """Support parameter used for each n in the published table."""
    return 3.0 if n == 2 else 6.0


class VanishingRow(NamedTuple):
    n: int
    best_p: float
    value: float
    err: float
    verdict: str


def vanishing_scan(n_range: Iterable[int], p_candidates: Sequence[float],
                   sech_scale: float = 0.5) -> list[VanishingRow]:
    """Most negative left side over ``p_candidates`` for each n.

    The verdict is "vanishes" when that value is negative beyond its error.
    """
    rows = []
    for n in n_range:
        cls = build_multiset(n)
        best = min((rs_positivity_lhs(cls, p, sech_scale) for p in p_candidates),
                   key=lambda v: v.value)
        verdict = "vanishes" if best.value + best.err < 0 else "inconclusive"
        rows.append(VanishingRow(n, best.p, best.value, best.err, verdict))
    return rows
