import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.interpolate import CubicSpline

from positivity_kit.errors import DomainError
from positivity_kit.lterm import (S_TEST_FUNCTION, l_digamma_route, l_exp_route, l_value,
                                  s_derivative, s_function)
from positivity_kit.testfuncs import g1, g3m
from oracles import ROUTE_FUNCTIONS, l_mpmath, route_gaps

QUARTER_LOG2 = math.log(2) / 4


@pytest.mark.parametrize("name", list(ROUTE_FUNCTIONS))
@pytest.mark.parametrize("eta", [0, 6.07j, -0.45 + 3j, 1.0, 12 - 15j, 0.3 + 2j])
def test_exp_route_matches_mpmath(name, eta):
    tf = ROUTE_FUNCTIONS[name]
    lv = l_exp_route(tf, eta)
    assert abs(lv.value - l_mpmath(tf, eta)) <= 1e-12
    assert lv.err < 1e-12


@pytest.mark.parametrize("name", list(ROUTE_FUNCTIONS))
def test_routes_agree_on_random_points(name):
    gap, digamma_err, exp_err = route_gaps(name)
    assert gap <= 1e-8
    assert digamma_err < 1e-8 and exp_err < 1e-10


def test_routes_agree_at_zero():
    assert abs(l_exp_route(g1(), 0).value - l_digamma_route(g1(), 0).value) <= 1e-9


def test_vectorised_matches_scalar():
    etas = np.array([0.1, 2 + 3j, -0.3 - 1j])
    vec = l_exp_route(g1(), etas)
    for eta, v in zip(etas, vec.value):
        assert abs(v - l_exp_route(g1(), complex(eta)).value) < 1e-14
    assert l_value(g1(), 2 + 3j).value == l_exp_route(g1(), 2 + 3j).value


def test_conjugate_symmetry():
    a = l_exp_route(g1(), 0.3 + 2j).value
    b = l_exp_route(g1(), 0.3 - 2j).value
    assert abs(a - b.conjugate()) < 1e-15
    c = l_digamma_route(g1(), 0.3 - 2j).value
    assert abs(a - c.conjugate()) < 1e-9


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 40), st.floats(-0.49, 1.5))
def test_real_part_even_in_r(r, sigma):
    a = l_exp_route(g1(), complex(sigma, r))
    b = l_exp_route(g1(), complex(sigma, -r))
    assert abs(a.value.real - b.value.real) <= a.err + b.err


def test_large_real_eta_positive():
    eta = np.geomspace(50, 1e4, 200)
    lv = l_exp_route(g1(), eta)
    assert np.all(lv.value.real > lv.err)


def test_gl2_threshold_anchors():
    lv = l_exp_route(g1(), 6.07j)
    assert lv.value.real + QUARTER_LOG2 < -lv.err
    lv = l_digamma_route(g3m(), 1.0)
    assert lv.value.real + QUARTER_LOG2 < -lv.err


@pytest.mark.parametrize("eta", [-0.5 + 0j, -0.7 + 2j, -3.0 + 0j])
def test_domain(eta):
    with pytest.raises(DomainError):
        l_exp_route(g1(), eta)
    with pytest.raises(DomainError):
        l_digamma_route(g1(), eta)
    if eta.real < -0.5:
        with pytest.raises(DomainError):
            l_exp_route(g1(), eta, strict=False)


def test_relaxed_check_admits_boundary():
    # the integral still converges on Re eta = -1/2
    lv = l_exp_route(g1(), -0.5 + 7j, strict=False)
    near = l_exp_route(g1(), -0.5 + 1e-9 + 7j)
    assert abs(lv.value - near.value) < 1e-7


def test_s_function_examples():
    assert S_TEST_FUNCTION.p == 0.5 and S_TEST_FUNCTION.family == 1
    assert s_function(0.0).s_value == pytest.approx(-0.2293275, abs=1e-6)
    assert s_function(7.0).s_value == pytest.approx(-0.0148822, abs=1e-6)
    assert s_function(10.0).s_value == pytest.approx(0.1469024, abs=1e-6)


@pytest.mark.parametrize("r", [0.0, 3.3, 7.0, 12.0, 25.0])
def test_s_is_maximum_over_sigma(r):
    smp = s_function(r)
    sig = np.linspace(-0.5, 1.5, 257)
    vals = l_exp_route(S_TEST_FUNCTION, 1j * r + sig, strict=False).value.real
    assert smp.s_value >= vals.max() - smp.err
    assert -0.5 <= smp.argmax_sigma <= 1.5


def test_s_negative_up_to_7_2(sgrid):
    inside = sgrid.r <= 7.2 + 1e-9
    assert np.all(sgrid.s[inside] < -sgrid.max_err)


def test_s_derivative_examples():
    assert abs(s_derivative(0.0)) < 1e-10
    assert s_derivative(7.2) > 0.01


def test_line_meets_derivative_graph_at_most_three_times():
    step = 0.1
    r = np.arange(0, 100 + step / 2, step)
    s = s_function(r).s_value
    spline = CubicSpline(np.concatenate([-r[:0:-1], r]), np.concatenate([s[:0:-1], s]))
    ds = spline.derivative()
    a, b = s_derivative(5.0), s_derivative(40.0)
    assert ds(5.0) == pytest.approx(a, abs=1e-6)
    x = np.linspace(-100, 100, 200_001)
    gap = ds(x) - (a + (b - a) * (x - 5.0) / 35.0)
    crossings = np.count_nonzero(np.diff(np.sign(gap)))
    assert 2 <= crossings <= 3
