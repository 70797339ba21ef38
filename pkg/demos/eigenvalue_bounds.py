"""Lower bounds for Laplace eigenvalues of cusp forms on SL_n(Z), n = 3..8.

The s-function is tabulated once; for each n the smallest d for which every
three-value configuration stays below zero gives the bound
n^3/24 - n/6 + d/2. The same constants then drive the residual spectrum
table, where each row is a contradiction with the trivial bound.
"""
import time

from positivity_kit.lterm import s_grid
from positivity_kit.spectral import eigenvalue_bound_table, lubotzky_table

t0 = time.time()
grid = s_grid()
print(f"s-grid built in {time.time() - t0:.1f} s")

rows = eigenvalue_bound_table(range(3, 9), grid)
for row in rows:
    print(f"n = {row.n}: d = {row.d:g}, lambda >= {row.eigenvalue:g}")

rep = lubotzky_table({row.n: row.d for row in rows})
for row in rep.rows[:6]:
    print(f"a = {row.a:2d}, r <= {row.r_max}: {row.lower:.2f} vs {row.upper:.2f}")
print(f"... {len(rep.rows)} rows; threshold {rep.threshold:.4f}; "
      f"lambda at n = 68: {rep.eigenvalue_68:.2f} < {rep.bound_68:.2f}")
