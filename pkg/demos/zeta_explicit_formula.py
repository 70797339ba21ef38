"""Check the explicit formula for zeta against the bundled zero tables.

The zero side is a finite sum over ordinates; the other side is the pole
term, the archimedean term 2 Re l(0) and a short prime sum. The residual
should sit inside the tail bound and shrink as more zeros are used.
"""
from positivity_kit.testfuncs import g1, g2
from positivity_kit.zeta import bundled_zeros, explicit_formula_residual

for name, tf in (("g1", g1()), ("g2", g2())):
    for count in (100, 1000):
        res = explicit_formula_residual(bundled_zeros(count), tf)
        print(f"{name} with {count:4d} zeros: lhs {res.lhs:.10f}  rhs {res.rhs:.10f}  "
              f"residual {res.residual:+.3e}  tail bound {res.tail_bound:.3e}  ok={res.ok}")
