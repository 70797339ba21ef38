"""Sign certificates that rule out tempered GL(2) Maass forms in windows.

Each certificate is a grid check of a sum of archimedean terms with a
rigorous bound on the variation between nodes.
"""
from positivity_kit.criteria import gl2_figure_checks

rep = gl2_figure_checks()
for ch in rep.checks:
    print(f"{'ok ' if ch.ok else 'BAD'} {ch.name:45s} min margin {ch.min_margin:.4g}")
for name, r in rep.crossings.items():
    print(f"crossing of {name}: r = {r:.5f}")
print("all certificates hold" if rep.ok else "some certificate failed")
