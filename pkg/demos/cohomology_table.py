"""Rankin-Selberg positivity rules out cuspidal cohomology of SL_n(Z), small n.

For each n the archimedean shifts are fixed integers, so the positivity
condition is a short sum of l values; a negative total means no form.
"""
from positivity_kit.cohomology import build_multiset, default_p, rs_positivity_lhs, vanishing_scan

for n in range(2, 27):
    v = rs_positivity_lhs(build_multiset(n), default_p(n))
    print(f"n = {n:2d}  p = {v.p:g}  value {v.value:10.4f}  {'no form' if v.value + v.err < 0 else '?'}")

(row,) = vanishing_scan([27], [6.0, 7.0, 8.0, 9.0])
print(f"n = 27: best p {row.best_p:g} gives {row.value:+.2f}, {row.verdict}")
