"""
Energy bounds at fixed entanglement
===================================

Local spectra {0, 2, 4} and {0, 1, 6, 9}: the lowest and highest local
energy reachable at each entanglement, and the states that reach them.
"""
import math

import numpy as np

from entbounds import (
    align_max,
    align_min,
    bound_curve,
    e_max,
    e_min,
    entanglement_entropy,
    local_energy,
    max_state,
    min_state,
    schmidt,
)

a, b = [0, 2, 4], [0, 1, 6, 9]

# paired levels used by each bound
print("min pairing:", align_min(a, b).levels)
print("max pairing:", align_max(a, b).levels, "offset", align_max(a, b).offset)

print(f"\n{'ent':>6} {'E_min':>9} {'beta':>9} {'E_max':>9} {'beta_p':>9}")
for ent in np.linspace(0, math.log(3), 7):
    lo, beta = e_min(a, b, ent)
    hi, beta_p = e_max(a, b, ent)
    fmt = lambda x: "-" if x is None else f"{x:.4f}"
    print(f"{ent:6.3f} {lo:9.4f} {fmt(beta):>9} {hi:9.4f} {fmt(beta_p):>9}")

# the extremal states reproduce the bounds
ent = 0.8
s = min_state(a, b, ent)
print("\nmin state at 0.8 nats")
print("  Schmidt weights:", np.round(schmidt(s).lambdas, 6))
print("  entanglement:", round(entanglement_entropy(s), 12))
print("  energy:", local_energy(s, a, b), "bound:", e_min(a, b, ent)[0])

s = max_state(a, b, math.log(3))
print("\nmax state at ln 3, nonzero amplitudes:")
for i, j in zip(*np.nonzero(s.amplitudes)):
    print(f"  ({i}, {j}) {s.amplitudes[i, j].real:.6f}")

# whole curves, ready for plotting elsewhere
curve = bound_curve(a, b, "min", 5)
print("\n" + curve.to_csv())
