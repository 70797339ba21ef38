import math

import numpy as np
import pytest

from positivity_kit.errors import DomainError
from positivity_kit.maass import (A3_BOUND, SQRT2, coefficient_weight, divisor_count,
                                  exclusion_node, exclusion_proof, fprime_kernel, tail_bounds,
                                  v_kernel, whittaker)
from positivity_kit.specfun import bessel_k_im


@pytest.fixture(scope="module")
def tails():
    return tail_bounds()


@pytest.fixture(scope="module")
def report(tails):
    return exclusion_proof(tails=tails)


@pytest.mark.parametrize("r", [0.0, 3.0, 6.07, 6.14, 9.5])
@pytest.mark.parametrize("y", [0.3, 1 / SQRT2, 2.1, 5.0])
def test_whittaker_definition(r, y):
    w = whittaker(r, y)
    assert w.W == pytest.approx(math.sqrt(y) * bessel_k_im(r, 2 * math.pi * y), rel=1e-10)


@pytest.mark.parametrize("r", [6.07, 6.1])
@pytest.mark.parametrize("y", [0.7, 1.4])
def test_whittaker_derivatives(r, y):
    h = 1e-4
    w = whittaker(r, y)
    up, down = whittaker(r, y + h), whittaker(r, y - h)
    assert w.dW == pytest.approx((up.W - down.W) / (2 * h), rel=1e-6, abs=1e-12)
    assert w.d2W == pytest.approx((up.dW - down.dW) / (2 * h), rel=1e-6, abs=1e-12)
    assert w.d3W == pytest.approx((up.d2W - down.d2W) / (2 * h), rel=1e-6, abs=1e-12)


@pytest.mark.parametrize("r", [6.07, 6.14])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_kernels_are_t_derivatives(r, n):
    # n-th term of f(t) is W((n / sqrt 2) e^t); differentiate in t at 0
    y0 = n / SQRT2
    F = lambda t: math.sqrt(y0 * math.exp(t)) * bessel_k_im(r, 2 * math.pi * y0 * math.exp(t))
    h = 1e-3
    first = (F(-2 * h) - 8 * F(-h) + 8 * F(h) - F(2 * h)) / (12 * h)
    # the third difference amplifies Bessel rounding by h^-3, so it gets a wider step
    h = 5e-3
    third = (-F(-2 * h) + 2 * F(-h) - 2 * F(h) + F(2 * h)) / (2 * h ** 3)
    third_fine = (-F(-h) + 2 * F(-h / 2) - 2 * F(h / 2) + F(h)) / (2 * (h / 2) ** 3)
    third = (4 * third_fine - third) / 3
    assert fprime_kernel(r, n) == pytest.approx(first, rel=1e-6)
    assert v_kernel(r, n) == pytest.approx(third, rel=1e-6)


def test_whittaker_domain():
    with pytest.raises(DomainError):
        whittaker(6.1, 0.0)


def test_divisor_count_and_weights():
    assert [divisor_count(n) for n in range(1, 13)] == [1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6]
    assert coefficient_weight(3) == pytest.approx(A3_BOUND)
    for n in range(1, 200):
        assert divisor_count(n) <= 2 * math.sqrt(n)
        assert coefficient_weight(n) <= coefficient_weight(n, crude=True) + 1e-15


def test_displayed_inequality_at_6_07():
    v = [abs(v_kernel(6.07, n)) for n in (1, 2, 3)]
    assert v[1] > v[0] + A3_BOUND * v[2]


def test_v_kernel_decays_into_tail():
    v = [abs(v_kernel(6.14, n)) for n in (2, 3, 4)]
    assert v[1] < 0.5 * v[0]
    assert v[2] < 0.1 * v[1]


def test_tail_bounds(tails):
    f1, f3 = tails
    assert f1.series == "f'" and f3.series == "f'''"
    assert f1.start == 4 and f3.start == 4
    assert f1.bound <= 1.2e-7
    assert f3.bound <= 2.8e-5
    for t in tails:
        assert t.first_term < t.bound
        assert t.max_ratio < 0.5
        assert t.bound == pytest.approx(t.direct + t.remainder)


@pytest.mark.xfail(strict=True, reason="with tau(n) replaced by 2 sqrt(n) the third-derivative "
                   "tail exceeds 2.8e-5")
def test_tail_bounds_crude_weights():
    f1, f3 = tail_bounds(crude=True)
    assert f1.bound <= 1.2e-7 and f3.bound <= 2.8e-5


def test_exclusion_anchors(report):
    assert report.ok, report.failures
    assert abs(report.nodes[0].ratio - 1.475) <= 0.01
    assert report.min_ratio_at == pytest.approx(6.07)
    assert report.max_w3_prime <= 2.5e-6
    assert report.min_lead >= 5.7e-5
    assert len(report.nodes) == 71


def test_exclusion_margins(report):
    for check in (report.slack_check, report.displayed_check):
        assert check.ok
        assert check.min_margin > 3 * check.max_err
    for node in report.nodes:
        assert node.a2_lower > 1
        assert node.slack > 3 * node.err


def test_lead_floor_reading(report):
    # the floor is met by the derivative kernels, not by W itself
    assert report.min_lead >= 5.7e-5 > report.min_lead_undifferentiated


def test_exclusion_node_matches_report(report, tails):
    node = exclusion_node(6.1, tails[0].bound, tails[1].bound)
    assert node == report.nodes[30]


def test_exclusion_grid_step():
    with pytest.raises(DomainError):
        exclusion_proof(r_grid=np.linspace(6.07, 6.14, 11))
