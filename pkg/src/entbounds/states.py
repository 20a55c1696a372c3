"""Bipartite pure states in the product eigenbasis of ``H_A`` and ``H_B``.

Amplitudes are stored as an ``N_A x N_B`` grid ``psi[i, j]`` multiplying
``|A_i B_j>``.  Because the basis diagonalises both local Hamiltonians the
local energy is a weighted sum of level sums and never needs a matrix
exponential.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidParameter, InvalidState
from .spectra import LocalSpectrum, _as_spectrum

NORM_TOL = 1e-10
SINGULAR_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.ndim != 2 or 0 in amp.shape:
            raise InvalidState(f"amplitudes must be a non-empty 2-D grid, got shape {amp.shape}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dims(self) -> tuple[int, int]:
        return self.amplitudes.shape

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared - 1.0) <= tol

    @classmethod
    def product(cls, dims: tuple[int, int], i: int, j: int) -> "PureState":
        amp = np.zeros(dims, dtype=complex)
        amp[i, j] = 1.0
        return cls(amp)

    def to_dict(self) -> dict:
        flat = self.amplitudes.ravel()
        return {
            "dims": list(self.dims),
            "amplitudes": [[float(z.real), float(z.imag)] for z in flat],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "PureState":
        dims = tuple(int(d) for d in data["dims"])
        pairs = np.asarray(data["amplitudes"], dtype=float)
        if pairs.shape != (dims[0] * dims[1], 2):
            raise InvalidState("amplitude list does not match dims")
        return cls((pairs[:, 0] + 1j * pairs[:, 1]).reshape(dims))

    @classmethod
    def from_json(cls, text: str) -> "PureState":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SchmidtVector:
    """Squared Schmidt coefficients, non-increasing, length ``min(N_A, N_B)``."""

    lambdas: tuple[float, ...]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.lambdas, dtype=float)


@dataclass(frozen=True, eq=False)
class ReducedState:
    matrix: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def _require_normalized(s: PureState) -> None:
    if not s.is_normalized():
        raise InvalidState(f"state is not normalized (|psi|^2 = {s.norm_squared!r})")


def schmidt_coefficients(amplitudes: np.ndarray) -> np.ndarray:
    """Squared singular values of one grid or a stack of grids, descending.

    Works on arrays of shape ``(..., N_A, N_B)``; no normalization check.
    """
    sv = np.linalg.svd(amplitudes, compute_uv=False)
    sv = np.where(sv < SINGULAR_FLOOR, 0.0, sv)
    return sv**2


def shannon_entropy(p: np.ndarray, axis: int = -1) -> np.ndarray:
    """``-sum p ln p`` along ``axis`` with ``0 ln 0 = 0``."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log(np.where(p > 0, p, 1.0)), 0.0)
    return terms.sum(axis=axis)


def schmidt(s: PureState) -> SchmidtVector:
    _require_normalized(s)
    lam = schmidt_coefficients(s.amplitudes)
    return SchmidtVector(tuple(float(x) for x in lam))


def entanglement_entropy(s: PureState) -> float:
    """Entropy of entanglement in nats."""
    lam = schmidt(s).as_array()
    return float(max(shannon_entropy(lam), 0.0))


def purity(s: PureState) -> float:
    lam = schmidt(s).as_array()
    return float(np.sum(lam**2))


def _check_dims(s: PureState, a: LocalSpectrum, b: LocalSpectrum) -> None:
    if s.dims != (a.dimension, b.dimension):
        raise InvalidParameter(
            f"state dims {s.dims} do not match spectra dims ({a.dimension}, {b.dimension})"
        )


def local_energy(s: PureState, a, b) -> float:
    """``<psi| H_A + H_B |psi>`` for amplitudes in the product eigenbasis."""
    a, b = _as_spectrum(a), _as_spectrum(b)
    _check_dims(s, a, b)
    probs = np.abs(s.amplitudes) ** 2
    return float(probs.sum(axis=1) @ a.as_array() + probs.sum(axis=0) @ b.as_array())


def local_energies(amplitudes: np.ndarray, a, b) -> np.ndarray:
    """Vectorized local energy for a stack of grids ``(..., N_A, N_B)``."""
    a, b = _as_spectrum(a), _as_spectrum(b)
    probs = np.abs(amplitudes) ** 2
    return probs.sum(axis=-1) @ a.as_array() + probs.sum(axis=-2) @ b.as_array()


def reduced(s: PureState, which: Literal["A", "B"]) -> ReducedState:
    """Partial trace over the other subsystem."""
    _require_normalized(s)
    psi = s.amplitudes
    if which == "A":
        rho = psi @ psi.conj().T
    elif which == "B":
        rho = psi.T @ psi.conj()
    else:
        raise InvalidParameter(f"which must be 'A' or 'B', got {which!r}")
    rho = 0.5 * (rho + rho.conj().T)
    return ReducedState(rho)
