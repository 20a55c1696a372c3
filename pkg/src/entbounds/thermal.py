"""Extremal local energy at fixed entanglement via a fictitious thermal state.

Minimizing ``sum_i lam_i E_i`` over Schmidt weights of fixed entropy is solved
by Boltzmann weights ``lam_i = exp(-beta E_i) / Z`` on the aligned levels,
where ``beta >= 0`` is fixed by requiring the Gibbs entropy to equal the
target entanglement.  The maximum is the same problem for ``-H``.

Entropy is strictly decreasing in ``beta`` from ``ln N_A`` (``beta = 0``) to
``ln d`` (``beta -> inf``, ``d`` the ground degeneracy), so the root is found
by bracketing and bisection.  All weights are computed relative to the lowest
level to avoid overflow at large ``beta``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateRegime,
    EntanglementOutOfRange,
    InvalidParameter,
    SolverFailure,
)
from .spectra import Alignment, JointLevels, _as_spectrum, align_max, align_min
from .states import PureState

DEFAULT_TOL = 1e-12
MAX_BISECTIONS = 200
MAX_DOUBLINGS = 1100
# slack allowed above ln N_A before a request counts as out of range
RANGE_SLACK = 1e-12
CURVE_OFFSET = 1e-9

Kind = Literal["min", "max"]


@dataclass(frozen=True)
class ThermalPoint:
    beta: float
    lnZ: float
    mean_energy: float
    entropy: float
    weights: tuple[float, ...]


@dataclass(frozen=True)
class BoundPoint:
    entanglement: float
    beta: Optional[float]
    energy: float


@dataclass(frozen=True)
class BoundCurve:
    points: tuple[BoundPoint, ...]
    kind: Kind
    joint: JointLevels
    # (A_0 + B_0, A_top + B_top), used for normalized columns
    energy_range: tuple[float, float]

    @property
    def entanglements(self) -> np.ndarray:
        return np.array([p.entanglement for p in self.points])

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.energy for p in self.points])

    @property
    def betas(self) -> np.ndarray:
        return np.array([np.nan if p.beta is None else p.beta for p in self.points])

    def rows(self) -> list[dict]:
        ln_n = math.log(self.joint.size)
        lo, hi = self.energy_range
        span = hi - lo
        out = []
        for p in self.points:
            out.append(
                {
                    "entanglement_nats": p.entanglement,
                    "entanglement_normalized": p.entanglement / ln_n if ln_n > 0 else 0.0,
                    "beta": p.beta,
                    "energy": p.energy,
                    "energy_normalized": (p.energy - lo) / span if span > 0 else 0.0,
                }
            )
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CURVE_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow({k: format_value(v) for k, v in row.items()})
        return buf.getvalue()


CURVE_COLUMNS = [
    "entanglement_nats",
    "entanglement_normalized",
    "beta",
    "energy",
    "energy_normalized",
]


def format_value(v) -> str:
    """Shortest round-trip repr; absent values become an empty field."""
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _stats(shifted: np.ndarray, beta: np.ndarray):
    """Shifted log-partition, shifted mean energy and entropy for each beta.

    ``shifted`` are levels minus the lowest level (all >= 0).
    """
    beta = np.asarray(beta, dtype=float)
    boltz = np.exp(-np.multiply.outer(beta, shifted))
    z = boltz.sum(axis=-1)
    mean = (boltz @ shifted) / z
    lnz = np.log(z)
    entropy = beta * mean + lnz
    return lnz, mean, entropy


def evaluate_thermal(j: JointLevels, beta: float) -> ThermalPoint:
    """Gibbs state of the joint levels at inverse temperature ``beta``."""
    beta = float(beta)
    if not math.isfinite(beta) or beta < 0:
        raise InvalidParameter(f"beta must be finite and non-negative, got {beta}")
    levels = j.as_array()
    e0 = levels[0]
    shifted = levels - e0
    boltz = np.exp(-beta * shifted)
    z = boltz.sum()
    weights = boltz / z
    mean_shift = float(weights @ shifted)
    lnz_shift = float(np.log(z))
    return ThermalPoint(
        beta=beta,
        lnZ=float(lnz_shift - beta * e0),
        mean_energy=float(mean_shift + e0),
        entropy=max(beta * mean_shift + lnz_shift, 0.0),
        weights=tuple(float(w) for w in weights),
    )


def _solve_betas(levels: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Vectorized root of ``entropy(beta) = target`` on ascending ``levels``.

    Targets must lie in ``(ln d, ln N]``.  The bracket starts at ``[0, 1]``
    and its upper end doubles until the entropy there drops below the target;
    bisection then runs until the bracket cannot be split further.
    """
    shifted = levels - levels[0]
    targets = np.asarray(targets, dtype=float)
    n = targets.shape[0]
    lo = np.zeros(n)
    hi = np.ones(n)
    s0 = _stats(shifted, np.zeros(1))[2][0]
    done = targets >= s0
    for _ in range(MAX_DOUBLINGS):
        _, _, s_hi = _stats(shifted, hi)
        grow = (s_hi >= targets) & ~done
        if not grow.any():
            break
        lo = np.where(grow, hi, lo)
        hi = np.where(grow, 2.0 * hi, hi)
    else:
        raise SolverFailure("could not bracket inverse temperature")
    if not np.all(np.isfinite(hi)):
        raise SolverFailure("inverse temperature bracket overflowed")

    active = ~done
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        active &= (mid > lo) & (mid < hi)
        if not active.any():
            break
        _, _, s_mid = _stats(shifted, mid)
        above = s_mid >= targets
        lo = np.where(active & above, mid, lo)
        hi = np.where(active & ~above, mid, hi)
    _, _, s_lo = _stats(shifted, lo)
    _, _, s_hi = _stats(shifted, hi)
    beta = np.where(np.abs(s_lo - targets) <= np.abs(s_hi - targets), lo, hi)
    return np.where(done, 0.0, beta)


def _check_range(entanglement: np.ndarray, n: int) -> None:
    ln_n = math.log(n)
    if np.any(~np.isfinite(entanglement)):
        raise EntanglementOutOfRange("entanglement must be finite")
    bad = (entanglement < -RANGE_SLACK) | (entanglement > ln_n + RANGE_SLACK)
    if bad.any():
        raise EntanglementOutOfRange(
            f"entanglement {float(entanglement[bad][0])!r} outside [0, ln {n} = {ln_n!r}]"
        )


def solve_beta(j: JointLevels, entanglement: float, tol: float = DEFAULT_TOL) -> ThermalPoint:
    """Thermal point whose entropy matches ``entanglement`` within ``tol``."""
    if not tol > 0:
        raise InvalidParameter("tol must be positive")
    ent = float(entanglement)
    _check_range(np.array([ent]), j.size)
    if ent <= math.log(j.ground_degeneracy):
        raise DegenerateRegime(
            f"entanglement {ent!r} <= ln d_g = ln {j.ground_degeneracy}; the bound is flat"
        )
    beta = float(_solve_betas(j.as_array(), np.array([ent]))[0])
    point = evaluate_thermal(j, beta)
    if beta > 0 and abs(point.entropy - ent) > tol:
        raise SolverFailure(
            f"entropy residual {abs(point.entropy - ent):.3e} exceeds tol {tol:.1e}"
        )
    return point


def _joint_for(a, b, kind: Kind) -> tuple[JointLevels, JointLevels]:
    """(aligned levels, levels of the equivalent minimization problem)."""
    if kind == "min":
        j = align_min(a, b)
        return j, j
    if kind == "max":
        j = align_max(a, b)
        return j, j.negated()
    raise InvalidParameter(f"kind must be 'min' or 'max', got {kind!r}")


def _extremum(a, b, entanglement: float, kind: Kind, tol: float):
    joint, problem = _joint_for(a, b, kind)
    sign = 1.0 if kind == "min" else -1.0
    ent = float(entanglement)
    _check_range(np.array([ent]), joint.size)
    if ent <= math.log(problem.ground_degeneracy):
        return float(sign * problem.levels[0]), None
    point = solve_beta(problem, ent, tol)
    return float(sign * point.mean_energy), point.beta


def e_min(a, b, entanglement: float, tol: float = DEFAULT_TOL) -> tuple[float, Optional[float]]:
    """Minimum local energy at the given entanglement, with its ``beta``.

    ``beta`` is None on the flat segment ``entanglement <= ln d_g``.
    """
    return _extremum(a, b, entanglement, "min", tol)


def e_max(a, b, entanglement: float, tol: float = DEFAULT_TOL) -> tuple[float, Optional[float]]:
    """Maximum local energy and ``beta'`` (None on the flat segment)."""
    return _extremum(a, b, entanglement, "max", tol)


def bound_energies(a, b, entanglements: Iterable[float], kind: Kind = "min"):
    """Vectorized ``e_min``/``e_max`` over many entanglement values.

    Returns ``(energies, betas)`` with NaN betas on the flat segment.
    """
    joint, problem = _joint_for(a, b, kind)
    ent = np.atleast_1d(np.asarray(entanglements, dtype=float))
    _check_range(ent, joint.size)
    levels = problem.as_array()
    shifted = levels - levels[0]
    sign = 1.0 if kind == "min" else -1.0
    flat = ent <= math.log(problem.ground_degeneracy)
    betas = np.full(ent.shape, np.nan)
    energies = np.full(ent.shape, sign * levels[0])
    if (~flat).any():
        b_solved = _solve_betas(levels, ent[~flat])
        _, mean, _ = _stats(shifted, b_solved)
        betas[~flat] = b_solved
        energies[~flat] = sign * (mean + levels[0])
    return energies, betas


def _flat_weights(d: int, entanglement: float) -> np.ndarray:
    """Weights on ``d`` degenerate pairs with the requested entropy."""
    w = np.zeros(d)
    if d == 1 or entanglement <= 0:
        w[0] = 1.0
        return w
    aux = JointLevels(tuple(float(i) for i in range(d)), Alignment.MIN)
    beta = float(_solve_betas(aux.as_array(), np.array([entanglement]))[0])
    return np.asarray(evaluate_thermal(aux, beta).weights)


def _schmidt_weights(problem: JointLevels, entanglement: float, tol: float) -> tuple[np.ndarray, Optional[float]]:
    d = problem.ground_degeneracy
    if entanglement <= math.log(d):
        w = np.zeros(problem.size)
        w[:d] = _flat_weights(d, entanglement)
        return w, None
    point = solve_beta(problem, entanglement, tol)
    return np.asarray(point.weights), point.beta


def _phase_factors(phases: Optional[Sequence[float]], n: int) -> np.ndarray:
    if phases is None:
        return np.ones(n, dtype=complex)
    phases = np.asarray(list(phases), dtype=float)
    if phases.shape != (n,):
        raise InvalidParameter(f"expected {n} phases, got {phases.size}")
    if not np.all(np.isfinite(phases)):
        raise InvalidParameter("phases must be finite")
    return np.exp(1j * phases)


def _build_state(a, b, entanglement: float, kind: Kind, phases, tol: float) -> PureState:
    sa, sb = _as_spectrum(a), _as_spectrum(b)
    joint, problem = _joint_for(sa, sb, kind)
    ent = float(entanglement)
    _check_range(np.array([ent]), joint.size)
    n = joint.size
    w, _ = _schmidt_weights(problem, ent, tol)
    if kind == "max":
        # problem index k corresponds to aligned index n - 1 - k
        w = w[::-1]
    coeffs = np.sqrt(w) * _phase_factors(phases, n)
    n_small = n
    n_large = max(sa.dimension, sb.dimension)
    grid = np.zeros((n_small, n_large), dtype=complex)
    rows = np.arange(n)
    grid[rows, rows + joint.offset] = coeffs
    if joint.swapped:
        grid = grid.T
    return PureState(grid)


def min_state(a, b, entanglement: float, phases: Optional[Sequence[float]] = None,
              tol: float = DEFAULT_TOL) -> PureState:
    """A minimum-energy pure state at the given entanglement.

    Amplitude ``exp(-beta E_i / 2) exp(i alpha_i) / sqrt(Z)`` sits on
    ``|A_i B_i>``.  On the flat segment the state lives on the degenerate
    ground pairs.  The grid has shape ``(len(a), len(b))``.
    """
    return _build_state(a, b, entanglement, "min", phases, tol)


def max_state(a, b, entanglement: float, phases: Optional[Sequence[float]] = None,
              tol: float = DEFAULT_TOL) -> PureState:
    """A maximum-energy pure state; amplitudes sit on ``|A_i B_{i+Δ}>``."""
    return _build_state(a, b, entanglement, "max", phases, tol)


def bound_curve(a, b, kind: Kind = "min", n_points: int = 200) -> BoundCurve:
    """Sample ``E_min(ent)`` or ``E_max(ent)``.

    The solvable part ``(ln d, ln N_A]`` gets ``n_points`` uniform samples
    starting ``CURVE_OFFSET`` above ``ln d``; when ``d > 1`` the flat segment
    ``[0, ln d]`` is prepended.
    """
    if n_points < 2:
        raise InvalidParameter("n_points must be at least 2")
    sa, sb = _as_spectrum(a), _as_spectrum(b)
    joint, problem = _joint_for(sa, sb, kind)
    sign = 1.0 if kind == "min" else -1.0
    flat_energy = sign * problem.levels[0]
    ln_n = math.log(joint.size)
    d = problem.ground_degeneracy
    ln_d = math.log(d)
    energy_range = (
        sa.levels[0] + sb.levels[0],
        sa.levels[-1] + sb.levels[-1],
    )

    points: list[BoundPoint] = []
    if d == joint.size:
        grid = np.linspace(0.0, ln_n, n_points) if ln_n > 0 else np.zeros(1)
        points = [BoundPoint(float(x), None, flat_energy) for x in grid]
        return BoundCurve(tuple(points), kind, joint, energy_range)

    if d > 1:
        n_flat = max(2, int(round(n_points * ln_d / ln_n)))
        points += [BoundPoint(float(x), None, flat_energy) for x in np.linspace(0.0, ln_d, n_flat)]
    grid = np.linspace(ln_d + CURVE_OFFSET, ln_n, n_points)
    energies, betas = bound_energies(sa, sb, grid, kind)
    points += [BoundPoint(float(x), float(bt), float(e)) for x, bt, e in zip(grid, betas, energies)]
    return BoundCurve(tuple(points), kind, joint, energy_range)
