"""Excluding level-2 Maass forms with spectral parameter r in [6.07, 6.14].

A Maass form on Gamma_0(2) even under both x -> -x and the Fricke
involution gives an even function

    f(t) = sum_n a_n / sqrt(n) W_ir((n / sqrt 2) e^t),  W_ir(y) = sqrt(y) K_ir(2 pi y),

so f'(0) = f'''(0) = 0. Truncating both relations after three terms and
bounding the rest with |a_n| <= tau(n) n^(5/28) forces a_2 / sqrt 2 to be
large from the first relation and small from the second.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .criteria import GridCheck, certify_positive
from .errors import DomainError
from .specfun import bessel_k_im_derivs

SQRT2 = math.sqrt(2.0)
RAMANUJAN_EXPONENT = 5.0 / 28.0
R_INTERVAL = (6.07, 6.14)
# |a_3| / sqrt 3 <= tau(3) 3^(5/28) / sqrt 3
A3_BOUND = 2.0 * 3.0 ** RAMANUJAN_EXPONENT / math.sqrt(3.0)


class WhittakerEval(NamedTuple):
    r: float
    y: float
    W: float
    dW: float
    d2W: float
    d3W: float
    rel_err: float


@lru_cache(maxsize=8192)
def whittaker(r: float, y: float) -> WhittakerEval:
    """W_ir(y) = sqrt(y) K_ir(2 pi y) and its first three y-derivatives (Leibniz)."""
    if not y > 0:
        raise DomainError("y must be positive")
    k, rel = bessel_k_im_derivs(r, 2 * math.pi * y, 3)
    scale = (2 * math.pi) ** np.arange(4) * k  # d^i/dy^i of K(2 pi y)
    root = [math.sqrt(y), 0.5 / math.sqrt(y), -0.25 * y ** -1.5, 0.375 * y ** -2.5]
    out = []
    for j in range(4):
        out.append(sum(math.comb(j, i) * root[j - i] * scale[i] for i in range(j + 1)))
    return WhittakerEval(r, y, *(float(v) for v in out), float(np.max(rel)))


def fprime_kernel(r: float, n: int) -> float:
    """W'_ir(n / sqrt 2) n / sqrt 2: the n-th term of f'(0) without a_n / sqrt n."""
    y = n / SQRT2
    return float(whittaker(float(r), y).dW * y)


def v_kernel(r: float, n: int) -> float:
    """n-th term of f'''(0): y^3 W''' + 3 y^2 W'' + y W' at y = n / sqrt 2."""
    y = n / SQRT2
    w = whittaker(float(r), y)
    return float(w.d3W * y ** 3 + 3 * w.d2W * y ** 2 + w.dW * y)


def divisor_count(n: int) -> int:
    count, d = 0, 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count


def coefficient_weight(n: int, crude: bool = False) -> float:
    """Bound on |a_n| / sqrt n; ``crude`` replaces tau(n) by 2 sqrt n."""
    if crude:
        return 2.0 * n ** RAMANUJAN_EXPONENT
    return divisor_count(n) * n ** RAMANUJAN_EXPONENT / math.sqrt(n)


class TailBound(NamedTuple):
    series: str
    start: int
    bound: float
    direct: float
    remainder: float
    max_ratio: float
    first_term: float
    crude: bool


def _sup_over_interval(kernel, rs: np.ndarray, n: int) -> float:
    vals = np.abs([kernel(r, n) for r in rs])
    # between nodes: largest node value plus twice the largest node-to-node jump
    return float(vals.max() + 2 * np.abs(np.diff(vals)).max())


def tail_bounds(r_interval: tuple[float, float] = R_INTERVAL, start: int = 4,
                stop: int = 50, step: float = 0.01, crude: bool = False,
                safety: float = 2.0) -> tuple[TailBound, TailBound]:
    """Bounds on sum_{n >= start} |a_n| / sqrt n |kernel(n)| uniformly in r.

    Terms start..stop are summed from sampled suprema over the r interval;
    beyond ``stop`` a geometric envelope is used, with the term ratio on
    n = 20..stop required to stay below 1/2, and inflated by ``safety``.
    By default |a_n| <= tau(n) n^(5/28); ``crude=True`` uses tau(n) <= 2 sqrt n.
    """
    lo, hi = r_interval
    rs = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    out = []
    for name, kernel in (("f'", fprime_kernel), ("f'''", v_kernel)):
        terms = np.array([coefficient_weight(n, crude) * _sup_over_interval(kernel, rs, n)
                          for n in range(start, stop + 1)])
        envelope = np.array([coefficient_weight(n, True) * _sup_over_interval(kernel, rs, n)
                             for n in range(20, stop + 1)])
        q = float(np.max(envelope[1:] / envelope[:-1]))
        if not q < 0.5:
            raise DomainError(f"{name} terms do not decay geometrically (ratio {q:.3g})")
        remainder = float(safety * envelope[-1] * q / (1 - q))
        direct = float(terms.sum())
        out.append(TailBound(name, start, direct + remainder, direct, remainder,
                             q, float(terms[0]), crude))
    return out[0], out[1]


class ExclusionNode(NamedTuple):
    r: float
    w3_prime: float
    lead1: float
    lead2: float
    ratio: float
    a2_lower: float
    slack: float
    displayed_slack: float
    err: float


class ExclusionReport(NamedTuple):
    nodes: list[ExclusionNode]
    tails: tuple[TailBound, TailBound]
    max_w3_prime: float
    min_lead: float
    min_lead_undifferentiated: float
    min_ratio: float
    min_ratio_at: float
    slack_check: GridCheck
    displayed_check: GridCheck
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def exclusion_node(r: float, t1: float, t3: float) -> ExclusionNode:
    """All quantities of the argument at one spectral parameter.

    From f'(0) = 0: |a_2 / sqrt 2| >= (|k1| - A3 |k3| - T1) / |k2| =: A.
    From f'''(0) = 0: |a_2 / sqrt 2| |V2| <= |V1| + A3 |V3| + T3.
    The slack A |V2| - |V1| - A3 |V3| - T3 > 0 is the contradiction.
    """
    k = [fprime_kernel(r, n) for n in (1, 2, 3)]
    v = [v_kernel(r, n) for n in (1, 2, 3)]
    a2 = (abs(k[0]) - A3_BOUND * abs(k[2]) - t1) / abs(k[1])
    rhs = abs(v[0]) + A3_BOUND * abs(v[2]) + t3
    slack = a2 * abs(v[1]) - rhs
    displayed = abs(v[1]) - abs(v[0]) - A3_BOUND * abs(v[2])
    rel = max(whittaker(float(r), n / SQRT2).rel_err for n in (1, 2, 3))
    err = 10 * rel * (a2 * abs(v[1]) + rhs)
    w3 = whittaker(float(r), 3 / SQRT2).dW
    return ExclusionNode(float(r), float(w3), float(k[0]), float(k[1]), float(abs(k[0] / k[1])),
                         float(a2), float(slack), float(displayed), float(err))


def exclusion_proof(r_grid=None, tails: tuple[TailBound, TailBound] | None = None,
                    w3_cap: float = 2.5e-6, lead_floor: float = 5.7e-5) -> ExclusionReport:
    """Run the coefficient contradiction over a grid of step <= 0.001."""
    if r_grid is None:
        r_grid = np.linspace(R_INTERVAL[0], R_INTERVAL[1], 71)
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size > 1 and np.max(np.diff(r_grid)) > 0.001 + 1e-12:
        raise DomainError("grid step must be at most 0.001")
    tails = tails or tail_bounds()
    t1, t3 = tails[0].bound, tails[1].bound
    nodes = [exclusion_node(r, t1, t3) for r in r_grid]
    failures = []
    w3 = max(abs(n.w3_prime) for n in nodes)
    if w3 > w3_cap:
        failures.append(f"|W'(3/sqrt2)| = {w3:.3g} exceeds {w3_cap}")
    lead = min(min(abs(n.lead1), abs(n.lead2)) for n in nodes)
    if lead < lead_floor:
        failures.append(f"lead f' kernel {lead:.3g} below {lead_floor}")
    undiff = min(min(abs(whittaker(float(r), 1 / SQRT2).W),
                     abs(whittaker(float(r), 2 / SQRT2).W) * 2 / SQRT2) for r in r_grid)
    ratios = np.array([n.ratio for n in nodes])
    i = int(np.argmin(ratios))
    if not ratios[i] > 1:
        failures.append(f"kernel ratio {ratios[i]:.4g} <= 1 at r = {r_grid[i]}")
    if not min(n.a2_lower for n in nodes) > 1:
        failures.append("lower bound on a_2/sqrt2 does not exceed 1")
    errs = np.array([n.err for n in nodes])
    slack = certify_positive("f''' contradiction slack", r_grid,
                             np.array([n.slack for n in nodes]), errs)
    shown = certify_positive("|V2| - |V1| - A3 |V3|", r_grid,
                             np.array([n.displayed_slack for n in nodes]), errs)
    if not slack.ok:
        failures.append(f"contradiction slack fails at {slack.failures[:3]}")
    return ExclusionReport(nodes, tails, w3, lead, undiff, float(ratios[i]),
                           float(r_grid[i]), slack, shown, failures)
