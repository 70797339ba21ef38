"""Apply the two positivity criteria to a few Dirichlet-type archimedean data.

A negative existence sum rules the L-function out. A positive low-zero sum
forces a zero below the cutoff of the modified test function.
"""
from positivity_kit.criteria import ArchimedeanData, evaluate_criteria
from positivity_kit.testfuncs import g1, g3m

plain, modified = g1(), g3m()
cases = [
    ("conductor 3, odd", ArchimedeanData(1, 3, (1,)), False),
    ("conductor 5, even", ArchimedeanData(1, 5, (0,)), False),
    ("conductor 3, even", ArchimedeanData(1, 3, (0,)), False),
    ("conductor 1 with pole", ArchimedeanData(1, 1, (0,)), True),
]
for label, data, polar in cases:
    v = evaluate_criteria(data, plain, modified, polar=polar)
    print(f"{label:24s} existence {v.existence_sum:+.5f}  low zero {v.lowzero_sum:+.5f}  "
          f"-> {v.verdict} (low-zero flag {v.lowzero_flag})")

# moving the cutoff above the first zeta zero lets the low-zero criterion fire
v = evaluate_criteria(ArchimedeanData(1, 1, (0,)), plain, g3m(c=15.0), polar=True)
print(f"conductor 1, cutoff 15     low zero {v.lowzero_sum:+.5f}  flag {v.lowzero_flag}")
