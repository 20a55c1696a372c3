"""
Mixtures stay inside too
========================

A mixture of pure states has the average energy of its components and at
most their average entanglement, so it sits on a horizontal segment that
starts at zero entanglement.  Convexity of the lower curve and concavity of
the upper one keep that segment between them.
"""
import numpy as np

from entbounds import e_max, e_min, ensemble_point, random_ensemble
from entbounds.oracle import check_mixed_segment

a = b = [0.0, 1.0]

ens = random_ensemble(2, 2, 4, seed=3)
energy, upper = ensemble_point(ens, a, b)
print("weights:", np.round(ens.weights, 4))
print(f"energy {energy:.4f}, entanglement at most {upper:.4f}")
for x in np.linspace(0, upper, 5):
    print(f"  ent {x:.3f}: {e_min(a, b, x)[0]:.4f} <= {energy:.4f} <= {e_max(a, b, x)[0]:.4f}")

for spectra in (([0, 1], [0, 1]), ([0, 2, 4], [0, 1, 6, 9])):
    r = check_mixed_segment(1000, seed=0, a=spectra[0], b=spectra[1])
    print(f"{spectra}: {r.violations} violations in {r.trials} ensembles")
