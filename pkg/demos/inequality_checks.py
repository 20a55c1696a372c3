"""
Randomized checks of the supporting inequalities
================================================

Each check draws thousands of random instances and reports the number of
violations and the smallest slack seen.  The brute-force check minimizes
energy over a fine grid of Schmidt weights without any thermal reasoning.
"""
from entbounds.oracle import (
    check_brute_min,
    check_curve_shape,
    check_lemma1,
    check_lemma2,
    check_lemma34,
    check_theorem1,
)

fig1 = ([0, 2, 4], [0, 1, 6, 9])
reports = [
    check_lemma1(5000, seed=1),
    check_lemma2(5000, seed=1),
    check_lemma34(5000, seed=1),
    check_theorem1(5000, seed=1),
    check_curve_shape(*fig1, n_points=500),
    check_brute_min(*fig1, n_values=5),
]
for r in reports:
    print(f"{r.name:<12} trials={r.trials:<6} violations={r.violations}  worst margin {r.worst_margin:.3e}")

print("\nbrute-force details:", reports[-1].details)
print("curve details:", reports[-2].details)
