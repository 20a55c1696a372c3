"""
Two qubits in closed form
=========================

For two-level systems the bounds are linear in the largest Schmidt weight,
which follows from the purity of either reduced state.
"""
import numpy as np

from entbounds import closed_bounds, e_max, e_min, entropy_from_purity

a = b = [0.0, 0.5]

print(f"{'P':>5} {'lambda':>8} {'beta':>8} {'ent':>7} {'E_min':>8} {'E_max':>8} {'solver gap':>11}")
for P in np.linspace(0.5, 1.0, 6):
    r = closed_bounds(a, b, P)
    ent = entropy_from_purity(P)
    gap = max(abs(e_min(a, b, ent)[0] - r.e_min), abs(e_max(a, b, ent)[0] - r.e_max))
    beta = "-" if r.beta is None else f"{r.beta:.4f}"
    print(f"{P:5.2f} {r.lam:8.5f} {beta:>8} {ent:7.4f} {r.e_min:8.5f} {r.e_max:8.5f} {gap:11.1e}")

# both bounds share one inverse temperature
_, beta = e_min(a, b, 0.4)
_, beta_p = e_max(a, b, 0.4)
print("\nbeta, beta' at 0.4 nats:", beta, beta_p)
