"""Randomized and brute-force verification of the energy bounds.

Each ``check_*`` function draws seeded random instances, evaluates the slack
of the inequality it exercises and returns a :class:`CheckReport`.  A check
passes when no trial violates its inequality by more than ``tol``.

``brute_min`` is an optimizer-free oracle for the minimum energy: it scans
the probability simplex of Schmidt weights on a regular grid and never
touches the inverse-temperature solver.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidParameter
from .sampling import ensemble_point, random_ensemble
from .spectra import _as_spectrum, align_min
from .states import PureState, local_energy, shannon_entropy
from .thermal import bound_curve, bound_energies

DEFAULT_TOL = 1e-9
STRICT_MARGIN = 1e-12


@dataclass
class CheckReport:
    name: str
    trials: int
    violations: int
    worst_margin: float
    seed: Optional[int]
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def merge(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(
            self.name,
            self.trials + other.trials,
            self.violations + other.violations,
            min(self.worst_margin, other.worst_margin),
            self.seed,
            {**self.details, **other.details},
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


class _Tally:
    def __init__(self, tol: float):
        self.tol = tol
        self.trials = 0
        self.violations = 0
        self.worst = math.inf

    def at_least(self, slack: float) -> bool:
        """Record ``slack >= -tol``."""
        self.worst = min(self.worst, slack)
        return slack >= -self.tol

    def report(self, name, seed, **details) -> CheckReport:
        return CheckReport(name, self.trials, self.violations, float(self.worst), seed, details)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


# -- rearrangement with capped weights (lemma1) ------------------------------

def lemma1_terms(p, E, A: float, M: int) -> tuple[float, float, float]:
    """``(sum p E, sum p_desc E_asc, A * sum of the M lowest E)``."""
    p = np.asarray(p, dtype=float)
    E = np.asarray(E, dtype=float)
    e_up = np.sort(E)
    p_down = np.sort(p)[::-1]
    return float(p @ E), float(p_down @ e_up), float(A * e_up[:M].sum())


def _capped_weights(rng, N: int, A: float, M: int) -> np.ndarray:
    """Random ``0 <= p_i <= A`` with ``sum p = M A``."""
    p = rng.uniform(0, A, N)
    if rng.random() < 0.2:
        p[rng.random(N) < 0.5] = 0.0
    target = M * A
    total = p.sum()
    if total > target:
        p *= target / total
    elif total < target:
        t = (target - total) / (N * A - total)
        p = p + t * (A - p)
    return np.clip(p, 0.0, A)


def check_lemma1(trials: int = 10_000, seed: int = 0, tol: float = DEFAULT_TOL) -> CheckReport:
    rng = np.random.default_rng(seed)
    tally = _Tally(tol)
    strict_probes = 0
    for _ in range(trials):
        N = int(rng.integers(1, 9))
        M = int(rng.integers(1, N + 1))
        A = float(rng.uniform(0.1, 3.0))
        E = rng.normal(0, 2, N)
        p = _capped_weights(rng, N, A, M)
        lhs, mid, rhs = lemma1_terms(p, E, A, M)
        ok = tally.at_least(lhs - mid) & tally.at_least(mid - rhs)
        # strict branch: weight on any level above the M lowest
        order = np.argsort(E)
        if N > M and p[order[M:]].max() > 1e-6:
            strict_probes += 1
            ok &= lhs - rhs > STRICT_MARGIN
        tally.trials += 1
        tally.violations += not ok
    return tally.report("lemma1", seed, strict_probes=strict_probes)


# -- sum of expectations over an orthonormal set (lemma2) --------------------

def lemma2_terms(E, vectors) -> tuple[float, float]:
    """``(sum_i <a_i|H|a_i>, sum of the M lowest E)`` for columns ``vectors``."""
    E = np.sort(np.asarray(E, dtype=float))
    v = np.asarray(vectors)
    M = v.shape[1]
    expect = float(np.sum(np.abs(v) ** 2, axis=1) @ E)
    return expect, float(E[:M].sum())


def check_lemma2(trials: int = 10_000, seed: int = 0, tol: float = DEFAULT_TOL) -> CheckReport:
    rng = np.random.default_rng(seed)
    tally = _Tally(tol)
    for _ in range(trials):
        N = int(rng.integers(1, 9))
        M = int(rng.integers(1, N + 1))
        E = np.sort(rng.normal(0, 2, N))
        vecs = haar_unitary(N, rng)[:, :M]
        lhs, rhs = lemma2_terms(E, vecs)
        ok = tally.at_least(lhs - rhs)
        if M < N:
            ok &= lhs - rhs > STRICT_MARGIN
        # a frame of the bottom-M eigenspace reaches equality
        bottom = np.zeros((N, M), dtype=complex)
        bottom[:M] = haar_unitary(M, rng)
        lhs_eq, _ = lemma2_terms(E, bottom)
        ok &= tally.at_least(-abs(lhs_eq - rhs))
        tally.trials += 1
        tally.violations += not ok
    return tally.report("lemma2", seed)


# -- weighting sequences with non-negative partial sums (lemma34) ------------

def lemma3_partial_sums(lambdas, deltas) -> np.ndarray:
    """``sum_{i<N} lam_i delta_i`` for every ``N = 1..D``."""
    return np.cumsum(np.asarray(lambdas, dtype=float) * np.asarray(deltas, dtype=float))


def _nonneg_prefix_deltas(rng, D: int) -> np.ndarray:
    prefix = rng.uniform(0, 1, D)
    if rng.random() < 0.3:
        prefix[: int(rng.integers(0, D + 1))] = 0.0
    if rng.random() < 0.2:
        prefix[rng.random(D) < 0.3] = 0.0
    return np.diff(prefix, prepend=0.0)


def check_lemma34(trials: int = 10_000, seed: int = 0, tol: float = DEFAULT_TOL) -> CheckReport:
    rng = np.random.default_rng(seed)
    tally = _Tally(tol)
    strict_probes = 0
    for _ in range(trials):
        D = int(rng.integers(1, 9))
        delta = _nonneg_prefix_deltas(rng, D)
        lam = np.sort(rng.uniform(0, 1, D))[::-1]
        if rng.random() < 0.2:
            lam = np.sort(rng.integers(0, 3, D).astype(float))[::-1]
        ok = tally.at_least(float(lemma3_partial_sums(lam, delta).min()))

        lam_strict = np.sort(rng.uniform(0, 1, D))[::-1]
        if np.all(np.diff(lam_strict) < 0) and lam_strict[-1] > 0:
            positive = np.flatnonzero(delta > 0)
            if positive.size:
                i0 = int(positive[0])
                sums = lemma3_partial_sums(lam_strict, delta)
                strict_probes += 1
                ok &= bool(np.all(sums[i0:] > STRICT_MARGIN))
            ok &= tally.at_least(float(lemma3_partial_sums(lam_strict, delta).min()))
        tally.trials += 1
        tally.violations += not ok
    return tally.report("lemma34", seed, strict_probes=strict_probes)


# -- aligned Schmidt state minimizes energy for fixed weights (theorem1) -----

def aligned_state(a, b, lambdas) -> PureState:
    """``sum_i sqrt(lam_i) |A_i B_i>`` on a ``len(a) x len(b)`` grid (``len(a) <= len(b)``)."""
    a, b = _as_spectrum(a), _as_spectrum(b)
    grid = np.zeros((a.dimension, b.dimension), dtype=complex)
    idx = np.arange(len(lambdas))
    grid[idx, idx] = np.sqrt(lambdas)
    return PureState(grid)


def schmidt_state(lambdas, frame_a: np.ndarray, frame_b: np.ndarray) -> PureState:
    """``sum_i sqrt(lam_i) |a_i b_i>`` with kets given as frame columns."""
    n = len(lambdas)
    grid = frame_a[:, :n] @ np.diag(np.sqrt(lambdas)) @ frame_b[:, :n].T
    return PureState(grid)


def _random_spectrum(rng, n: int) -> list[float]:
    if rng.random() < 0.25:
        return sorted(float(x) for x in rng.integers(0, 3, n))
    return sorted(float(x) for x in rng.normal(0, 2, n))


def _random_schmidt(rng, n: int) -> np.ndarray:
    if rng.random() < 0.1:
        lam = np.zeros(n)
        lam[0] = 1.0
        return lam
    lam = np.sort(rng.dirichlet(np.ones(n)))[::-1]
    return lam


def check_theorem1(trials: int = 10_000, seed: int = 0, tol: float = DEFAULT_TOL) -> CheckReport:
    rng = np.random.default_rng(seed)
    tally = _Tally(tol)
    for _ in range(trials):
        nA, nB = sorted(int(x) for x in rng.integers(1, 6, 2))
        a, b = _random_spectrum(rng, nA), _random_spectrum(rng, nB)
        lam = _random_schmidt(rng, nA)
        base = local_energy(aligned_state(a, b, lam), a, b)
        rival = schmidt_state(lam, haar_unitary(nA, rng), haar_unitary(nB, rng))
        ok = tally.at_least(local_energy(rival, a, b) - base)
        same = schmidt_state(lam, np.eye(nA), np.eye(nB))
        ok &= tally.at_least(-abs(local_energy(same, a, b) - base))
        tally.trials += 1
        tally.violations += not ok
    return tally.report("theorem1", seed)


# -- brute-force minimum over the simplex -----------------------------------

def _row_crossings(S: np.ndarray, E: np.ndarray, target: float) -> np.ndarray:
    """Energies linearly interpolated where ``S`` crosses ``target`` between
    neighbours along the last axis."""
    above = S >= target
    r, c = np.nonzero(above[..., :-1] != above[..., 1:])
    if r.size == 0:
        return np.empty(0)
    s0, s1 = S[r, c], S[r, c + 1]
    t = (target - s0) / (s1 - s0)
    return E[r, c] + t * (E[r, c + 1] - E[r, c])


def _simplex_rows(K: int, rows: np.ndarray) -> np.ndarray:
    """Weights ``(i, j, K - i - j) / K`` for rows ``i``; columns past the
    simplex edge repeat the edge point so they add no crossings."""
    i = rows[:, None]
    j = np.minimum(np.arange(K + 1)[None, :], K - i)
    i = np.broadcast_to(i, j.shape)
    return np.stack([i, j, K - i - j], axis=-1) / K


def brute_min_many(a, b, entanglements, resolution: float = 1e-4,
                   chunk_rows: int = 256) -> np.ndarray:
    """Minimum of ``sum lam_i E_i`` over grid weights with entropy on target.

    The simplex of Schmidt weights (N_A = 2 or 3) is laid out in rows of
    constant ``lam_0`` with spacing ``resolution``.  Along each row the
    energy is linearly interpolated at every crossing of the target entropy
    and the smallest such energy wins.  A target no row reaches (the
    maximal entropy, attained only at the uniform point) falls back to the
    grid point of nearest entropy.
    """
    a, b = _as_spectrum(a), _as_spectrum(b)
    E = align_min(a, b).as_array()
    n = E.size
    if n not in (2, 3):
        raise InvalidParameter(f"brute_min supports N_A in {{2, 3}}, got {n}")
    targets = np.atleast_1d(np.asarray(entanglements, dtype=float))
    K = int(round(1.0 / resolution))
    if n == 2:
        j = np.arange(K + 1)
        blocks = [np.stack([j, K - j], axis=-1)[None] / K]
    else:
        blocks = (_simplex_rows(K, np.arange(s, min(s + chunk_rows, K + 1)))
                  for s in range(0, K + 1, chunk_rows))

    best = np.full(targets.shape, np.inf)
    nearest_gap = np.full(targets.shape, np.inf)
    nearest_e = np.full(targets.shape, np.nan)
    for lam in blocks:
        S = shannon_entropy(lam)
        En = lam @ E
        for k, t in enumerate(targets):
            cands = _row_crossings(S, En, t)
            if cands.size:
                best[k] = min(best[k], cands.min())
            elif not np.isfinite(best[k]):
                i = np.argmin(np.abs(S - t))
                gap = abs(S.flat[i] - t)
                if gap < nearest_gap[k]:
                    nearest_gap[k], nearest_e[k] = gap, En.flat[i]
    return np.where(np.isfinite(best), best, nearest_e)


def brute_min(a, b, entanglement: float, grid_resolution: float = 1e-4) -> float:
    return float(brute_min_many(a, b, [entanglement], grid_resolution)[0])


# -- curve shape --------------------------------------------------------------

def _local_slopes(a, b, x: np.ndarray, kind: str, h_grid: float, lo: float, hi: float) -> np.ndarray:
    """Five-point central differences with a step that shrinks near the
    curve ends, where the slope ``1/beta`` is singular."""
    h = np.minimum(h_grid, 0.01 * np.minimum(x - lo, hi - x))
    f = lambda s: bound_energies(a, b, x + s * h, kind)[0]
    return (8 * (f(1) - f(-1)) - (f(2) - f(-2))) / (12 * h)


def check_curve_shape(a, b, n_points: int = 1000, tol: float = DEFAULT_TOL,
                      slope_tol: float = 1e-4) -> CheckReport:
    """Monotonicity, convexity/concavity and ``dE/d ent = ±1/beta``.

    On the solvable part of each curve: the minimum curve must rise strictly
    with second differences ``>= -tol``; the maximum curve must fall strictly
    with second differences ``<= tol``.  At interior samples the numerical
    slope must match ``1/beta`` (``-1/beta'`` for the maximum) to
    ``slope_tol``.
    """
    if n_points < 5:
        raise InvalidParameter("n_points must be at least 5")
    tally = _Tally(tol)
    details = {}
    for kind, sign in (("min", 1.0), ("max", -1.0)):
        curve = bound_curve(a, b, kind, n_points)
        betas = curve.betas
        solved = np.isfinite(betas)
        x = curve.entanglements[solved]
        e = sign * curve.energies[solved]
        if x.size < 5:
            continue
        d1 = np.diff(e)
        d2 = np.diff(e, 2)
        d = curve.joint.ground_degeneracy if kind == "min" else curve.joint.top_degeneracy
        lo = math.log(d)
        hi = math.log(curve.joint.size)
        inner = x[1:-1]
        slopes = sign * _local_slopes(a, b, inner, kind, x[1] - x[0], lo, hi)
        err = np.abs(slopes - 1.0 / betas[solved][1:-1])

        mono_bad = d1 <= 0
        conv_bad = d2 < -tol
        slope_bad = err > slope_tol
        tally.trials += d1.size + d2.size + err.size
        tally.violations += int(mono_bad.sum() + conv_bad.sum() + slope_bad.sum())
        tally.worst = min(tally.worst, float(d2.min()), float(slope_tol - err.max()))
        details[kind] = {
            "min_first_difference": float(d1.min()),
            "min_second_difference": float(d2.min()),
            "max_slope_error": float(err.max()),
        }
    return tally.report("curve_shape", None, **details)


# -- mixed states -------------------------------------------------------------

def check_mixed_segment(trials: int = 1000, seed: int = 0, a=(0.0, 1.0), b=(0.0, 1.0),
                        tol: float = DEFAULT_TOL, k_max: int = 6, n_along: int = 9) -> CheckReport:
    """Mixtures of up to ``k_max`` Haar states stay between the bounds at
    every entanglement from 0 to the weighted mean of their components."""
    a, b = _as_spectrum(a), _as_spectrum(b)
    rng = np.random.default_rng(seed)
    energies, xs = [], []
    for _ in range(trials):
        k = int(rng.integers(1, k_max + 1))
        ens = random_ensemble(a.dimension, b.dimension, k, int(rng.integers(2**63)))
        energy, upper = ensemble_point(ens, a, b)
        energies.append(np.full(n_along, energy))
        xs.append(np.linspace(0.0, upper, n_along))
    E = np.concatenate(energies)
    x = np.concatenate(xs)
    lo, _ = bound_energies(a, b, x, "min")
    hi, _ = bound_energies(a, b, x, "max")
    slack = np.minimum(E - lo, hi - E).reshape(trials, n_along).min(axis=1)
    tally = _Tally(tol)
    tally.trials = trials
    tally.violations = int(np.count_nonzero(slack < -tol))
    tally.worst = float(slack.min())
    return tally.report("mixed_segment", seed)


def check_brute_min(a, b, n_values: int = 20, resolution: float = 1e-4,
                    tol: float = 1e-4) -> CheckReport:
    """Compare ``brute_min`` with the thermal solution at ``n_values``
    entanglements spread over the open solvable range."""
    a, b = _as_spectrum(a), _as_spectrum(b)
    joint = align_min(a, b)
    if joint.size not in (2, 3):
        return CheckReport("brute_min", 0, 0, math.inf, None, {"skipped": f"N_A={joint.size}"})
    lo = math.log(joint.ground_degeneracy)
    hi = math.log(joint.size)
    x = np.linspace(lo, hi, n_values + 2)[1:-1]
    brute = brute_min_many(a, b, x, resolution)
    exact, _ = bound_energies(a, b, x, "min")
    err = np.abs(brute - exact)
    return CheckReport("brute_min", int(x.size), int(np.count_nonzero(err > tol)),
                       float(tol - err.max()), None,
                       {"max_abs_error": float(err.max()), "resolution": resolution})
