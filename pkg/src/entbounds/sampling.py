"""Haar-random pure states, random mixtures and the energy-entanglement scan.

Random streams are derived per block of samples from ``(seed, block_index)``
through ``SeedSequence`` spawn keys feeding a Philox generator, so a scan
gives bit-identical results however the blocks are scheduled.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidParameter
from .spectra import LocalSpectrum, _as_spectrum
from .states import (
    PureState,
    entanglement_entropy,
    local_energies,
    local_energy,
    schmidt_coefficients,
    shannon_entropy,
)
from .thermal import bound_energies, format_value

DEFAULT_BLOCK = 1 << 16
BOUND_TOL = 1e-9
NEAR_DISTANCE = 0.01


def block_rng(seed: int, index: int) -> np.random.Generator:
    """Independent counter-based stream for block ``index`` of ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


def haar_grids(rng: np.random.Generator, n: int, nA: int, nB: int) -> np.ndarray:
    """``n`` Haar-random amplitude grids of shape ``(nA, nB)``.

    Each amplitude is a standard complex Gaussian; normalizing the whole grid
    gives the uniform measure on the unit sphere.
    """
    z = rng.standard_normal((n, nA, nB, 2))
    psi = z[..., 0] + 1j * z[..., 1]
    norms = np.sqrt(np.sum(np.abs(psi) ** 2, axis=(-2, -1), keepdims=True))
    return psi / norms


def haar_pure(nA: int, nB: int, seed: int) -> PureState:
    if nA < 1 or nB < 1:
        raise InvalidParameter("dimensions must be positive")
    return PureState(haar_grids(np.random.default_rng(seed), 1, nA, nB)[0])


def page_entropy(nA: int, nB: int) -> float:
    """Mean entanglement entropy (nats) of Haar-random states on ``nA x nB``.

    ``sum_{k=n+1}^{mn} 1/k - (m - 1) / (2n)`` with ``m <= n``.
    """
    m, n = sorted((int(nA), int(nB)))
    return math.fsum(1.0 / k for k in range(n + 1, m * n + 1)) - (m - 1) / (2 * n)


def haar_mean_energy(a, b) -> float:
    """Haar average of the local energy: reduced states are maximally mixed
    on average, so it is the mean of each spectrum summed."""
    a, b = _as_spectrum(a), _as_spectrum(b)
    return float(np.mean(a.as_array()) + np.mean(b.as_array()))


@dataclass
class ScanStats:
    below_min: int = 0
    above_max: int = 0
    outside_unit_square: int = 0
    worst_margin: float = math.inf
    near_min: int = 0
    near_max: int = 0
    near_either: int = 0
    sum_energy: float = 0.0
    sum_energy_sq: float = 0.0
    sum_entanglement: float = 0.0
    sum_entanglement_sq: float = 0.0

    def merge(self, other: "ScanStats") -> None:
        for name in ("below_min", "above_max", "outside_unit_square", "near_min",
                     "near_max", "near_either", "sum_energy", "sum_energy_sq",
                     "sum_entanglement", "sum_entanglement_sq"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.worst_margin = min(self.worst_margin, other.worst_margin)

    @property
    def violations(self) -> int:
        return self.below_min + self.above_max


def _mean_sem(total: float, total_sq: float, n: int) -> tuple[float, Optional[float]]:
    mean = total / n
    if n < 2:
        return mean, None
    var = max(total_sq / n - mean * mean, 0.0) * n / (n - 1)
    return mean, math.sqrt(var / n)


@dataclass
class Histogram2D:
    """Counts over (normalized entanglement, normalized energy) bins.

    Bin ``(i, j)`` covers ``[i/n, (i+1)/n) x [j/m, (j+1)/m)``, with the upper
    edge 1 folded into the last bin.
    """

    counts: np.ndarray
    total: int
    spectrum_a: tuple[float, ...] = ()
    spectrum_b: tuple[float, ...] = ()
    seed: Optional[int] = None
    stats: ScanStats = field(default_factory=ScanStats)

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def summary(self) -> dict:
        s = self.stats
        n = self.total
        mean_e, sem_e = _mean_sem(s.sum_energy, s.sum_energy_sq, n)
        mean_s, sem_s = _mean_sem(s.sum_entanglement, s.sum_entanglement_sq, n)
        na, nb = len(self.spectrum_a), len(self.spectrum_b)
        return {
            "n_samples": n,
            "bound_violations": s.violations,
            "below_min": s.below_min,
            "above_max": s.above_max,
            "outside_unit_square": s.outside_unit_square,
            "worst_margin": s.worst_margin,
            "near_min": s.near_min,
            "near_max": s.near_max,
            "near_bound_fraction": s.near_either / n,
            "mean_energy": mean_e,
            "sem_energy": sem_e,
            "mean_entanglement": mean_s,
            "sem_entanglement": sem_s,
            "haar_mean_energy": haar_mean_energy(self.spectrum_a, self.spectrum_b),
            "page_entanglement": page_entropy(na, nb),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["bin_x", "bin_y", "count"])
        n, m = self.shape
        for i in range(n):
            for j in range(m):
                writer.writerow([i, j, int(self.counts[i, j])])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "spectrum_a": list(self.spectrum_a),
            "spectrum_b": list(self.spectrum_b),
            "seed": self.seed,
            "bins": list(self.shape),
            "total": self.total,
            "summary": self.summary(),
            "counts": self.counts.tolist(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _scan_block(sa: LocalSpectrum, sb: LocalSpectrum, seed: int, index: int, size: int,
                bins: tuple[int, int], near: float):
    n_bins, m_bins = bins
    psi = haar_grids(block_rng(seed, index), size, sa.dimension, sb.dimension)
    lam = schmidt_coefficients(psi)
    n_small = min(sa.dimension, sb.dimension)
    ln_n = math.log(n_small)
    ent = np.clip(shannon_entropy(lam), 0.0, ln_n)
    energy = local_energies(psi, sa, sb)

    lo_bound, _ = bound_energies(sa, sb, ent, "min")
    hi_bound, _ = bound_energies(sa, sb, ent, "max")
    e_lo = sa.levels[0] + sb.levels[0]
    e_hi = sa.levels[-1] + sb.levels[-1]
    span = e_hi - e_lo

    slack_lo = energy - lo_bound
    slack_hi = hi_bound - energy
    stats = ScanStats(
        below_min=int(np.count_nonzero(slack_lo < -BOUND_TOL)),
        above_max=int(np.count_nonzero(slack_hi < -BOUND_TOL)),
        worst_margin=float(min(slack_lo.min(), slack_hi.min())),
        sum_energy=float(energy.sum()),
        sum_energy_sq=float((energy**2).sum()),
        sum_entanglement=float(ent.sum()),
        sum_entanglement_sq=float((ent**2).sum()),
    )
    x = ent / ln_n if ln_n > 0 else np.zeros_like(ent)
    y = (energy - e_lo) / span if span > 0 else np.zeros_like(energy)
    if span > 0:
        close_lo = slack_lo / span <= near
        close_hi = slack_hi / span <= near
        stats.near_min = int(np.count_nonzero(close_lo))
        stats.near_max = int(np.count_nonzero(close_hi))
        stats.near_either = int(np.count_nonzero(close_lo | close_hi))
    outside = (x < -BOUND_TOL) | (x > 1 + BOUND_TOL) | (y < -BOUND_TOL) | (y > 1 + BOUND_TOL)
    stats.outside_unit_square = int(np.count_nonzero(outside))
    ix = np.clip((x * n_bins).astype(np.int64), 0, n_bins - 1)
    iy = np.clip((y * m_bins).astype(np.int64), 0, m_bins - 1)
    counts = np.bincount(ix * m_bins + iy, minlength=n_bins * m_bins)
    return counts.reshape(n_bins, m_bins), stats


def scan(a, b, n_samples: int, bins: tuple[int, int] = (200, 200), seed: int = 0,
         block_size: int = DEFAULT_BLOCK, workers: int = 1,
         near_distance: float = NEAR_DISTANCE) -> Histogram2D:
    """Bin Haar-random states by normalized entanglement and energy.

    Alongside the histogram, every sample is compared with the minimum and
    maximum energy at its own entanglement; violations beyond ``1e-9`` and
    samples within ``near_distance`` (normalized energy) of a bound are
    counted in ``stats``.
    """
    sa, sb = _as_spectrum(a), _as_spectrum(b)
    if n_samples < 1:
        raise InvalidParameter("n_samples must be at least 1")
    if len(bins) != 2 or min(bins) < 1:
        raise InvalidParameter("bins must be two positive integers")
    if block_size < 1:
        raise InvalidParameter("block_size must be positive")
    bins = (int(bins[0]), int(bins[1]))
    sizes = [min(block_size, n_samples - start) for start in range(0, n_samples, block_size)]

    def run(k: int):
        return _scan_block(sa, sb, seed, k, sizes[k], bins, near_distance)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(len(sizes))))
    else:
        results = [run(k) for k in range(len(sizes))]

    counts = np.zeros(bins, dtype=np.int64)
    stats = ScanStats()
    for c, st in results:
        counts += c
        stats.merge(st)
    return Histogram2D(counts, n_samples, sa.levels, sb.levels, seed, stats)


@dataclass(frozen=True)
class MixedEnsemble:
    weights: tuple[float, ...]
    states: tuple[PureState, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.states) or not self.states:
            raise InvalidParameter("need one weight per state and at least one state")
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise InvalidParameter("weights must be non-negative and sum to 1")
        dims = {s.dims for s in self.states}
        if len(dims) != 1:
            raise InvalidParameter("all states must share dimensions")

    @property
    def dims(self) -> tuple[int, int]:
        return self.states[0].dims

    def density_matrix(self) -> np.ndarray:
        vecs = np.stack([s.amplitudes.ravel() for s in self.states])
        return np.einsum("k,ki,kj->ij", np.asarray(self.weights), vecs, vecs.conj())


def random_ensemble(nA: int, nB: int, k: int, seed: int) -> MixedEnsemble:
    """``k`` Haar states with flat-Dirichlet weights (normalized exponentials)."""
    if k < 1:
        raise InvalidParameter("k must be at least 1")
    rng = np.random.default_rng(seed)
    w = rng.exponential(size=k)
    w = w / w.sum()
    grids = haar_grids(rng, k, nA, nB)
    return MixedEnsemble(tuple(float(x) for x in w), tuple(PureState(g) for g in grids))


def ensemble_point(e: MixedEnsemble, a, b) -> tuple[float, float]:
    """(mean energy, weighted mean entanglement of the components).

    The second value upper-bounds any convex entanglement measure of the
    mixture, so the mixture lies somewhere on the segment from
    ``(0, E)`` to ``(that value, E)``.
    """
    energy = math.fsum(p * local_energy(s, a, b) for p, s in zip(e.weights, e.states))
    ent = math.fsum(p * entanglement_entropy(s) for p, s in zip(e.weights, e.states))
    return energy, ent
