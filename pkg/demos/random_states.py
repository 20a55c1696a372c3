"""
Random pure states against the bounds
=====================================

Haar-random states on 3 x 4 all fall between the two bound curves, and
their averages match the known Haar values.
"""
from entbounds import scan

a, b = [0, 2, 4], [0, 1, 6, 9]

hist = scan(a, b, 200_000, bins=(40, 40), seed=7)
s = hist.summary()
print(f"samples            {s['n_samples']}")
print(f"bound violations   {s['bound_violations']}")
print(f"closest approach   {s['worst_margin']:.4f} (energy units)")
print(f"near-bound share   {s['near_bound_fraction']:.2e}")
print(f"mean energy        {s['mean_energy']:.5f} +- {s['sem_energy']:.5f}  (Haar {s['haar_mean_energy']})")
print(f"mean entanglement  {s['mean_entanglement']:.5f} +- {s['sem_entanglement']:.5f}"
      f"  (Haar {s['page_entanglement']:.5f})")

# coarse picture: rows are energy (top = high), columns entanglement
counts = hist.counts.T[::-1]
shades = " .:-=+*#%@"
peak = counts.max()
for row in counts[::2]:
    print("".join(shades[min(9, int(9 * c / peak + 0.999))] for c in row))
