"""Positivity of test-function transforms as a tool for L-function questions.

Submodules:

* ``specfun``: digamma, adaptive quadrature, K-Bessel of imaginary order
* ``testfuncs``: compactly supported test functions and their transforms
* ``lterm``: the archimedean functional l(eta) and the curve s(r)
* ``criteria``: existence / low-zero criteria and grid certificates
* ``spectral``: Laplace eigenvalue bounds on SL_n(Z) and residual spectrum
* ``cohomology``: Rankin-Selberg positivity for cohomological forms
* ``maass``: coefficient argument excluding level-2 Maass forms
* ``zeta``: explicit formula check against zeta zeros
"""
from .errors import (AccuracyLossError, DomainError, PoleError, PositivityError,
                     QuadratureError, StripError)
from .lterm import l_digamma_route, l_exp_route, l_value
from .testfuncs import TestFunction, g1, g1m, g2, g2m, g3, g3m, h_eval

__all__ = [
    "AccuracyLossError", "DomainError", "PoleError", "PositivityError",
    "QuadratureError", "StripError", "TestFunction", "g1", "g1m", "g2", "g2m",
    "g3", "g3m", "h_eval", "l_digamma_route", "l_exp_route", "l_value",
]

__version__ = "0.1.0"
