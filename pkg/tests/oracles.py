"""Independent reference computations shared by several test modules."""
import math
from functools import lru_cache

import mpmath as mp
import numpy as np

from positivity_kit.lterm import l_digamma_route, l_exp_route
from positivity_kit.testfuncs import g1, g1m, g2, g2m, g3, g3m, g_eval

ROUTE_FUNCTIONS = {"g1": g1(), "g2": g2(), "g3": g3(), "g1m": g1m(), "g2m": g2m(), "g3m": g3m()}


def l_mpmath(tf, eta, dps=30):
    """l(eta) from the exponential integral, evaluated with mpmath Gauss-Legendre."""
    with mp.workdps(dps):
        eta = mp.mpc(eta)
        g0 = mp.mpf(float(g_eval(tf, 0.0)))

        def f(x):
            g = mp.mpf(float(g_eval(tf, float(x / 2))))
            return g * mp.exp(-(mp.mpf(1) / 4 + eta / 2) * x) / -mp.expm1(-x) - g0 * mp.exp(-x) / x

        two_p = 2 * mp.mpf(tf.p)
        pts = mp.linspace(0, two_p, 9)
        body = mp.quad(f, pts, method="gauss-legendre")
        value = -mp.log(mp.pi) / 2 * g0 - body / 2 + g0 * mp.e1(two_p) / 2
        return complex(value)


def route_points(count=200, seed=2024):
    rng = np.random.default_rng(seed)
    re = rng.uniform(-0.49, 20, count)
    im = rng.uniform(-20, 20, count)
    return re + 1j * im


@lru_cache(maxsize=None)
def route_gaps(name, count=200):
    """Largest |exp route - digamma route| and the largest reported error."""
    tf = ROUTE_FUNCTIONS[name]
    etas = route_points(count)
    fast = l_exp_route(tf, etas)
    gap, err = 0.0, 0.0
    for eta, v in zip(etas, fast.value):
        slow = l_digamma_route(tf, complex(eta))
        gap = max(gap, abs(slow.value - v))
        err = max(err, slow.err)
    return gap, err, float(np.max(fast.err))
