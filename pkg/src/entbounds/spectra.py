"""Local spectra and the aligned joint level lists built from them.

A bipartite system with local Hamiltonian ``H = H_A + H_B`` is described here
only through the sorted eigenvalues of ``H_A`` and ``H_B``.  The extremal
states pair the i-th level of the smaller subsystem with either the i-th
(minimum) or the ``i + N_B - N_A``-th (maximum) level of the larger one.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InvalidParameter, InvalidSpectrum


class Alignment(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class LocalSpectrum:
    """Ascending eigenvalues of one subsystem's Hamiltonian."""

    levels: tuple[float, ...]

    def __post_init__(self):
        if len(self.levels) == 0:
            raise InvalidSpectrum("spectrum must contain at least one level")
        if any(b < a for a, b in zip(self.levels, self.levels[1:])):
            raise InvalidSpectrum("levels must be non-decreasing; use make_spectrum")

    @property
    def dimension(self) -> int:
        return len(self.levels)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.levels, dtype=float)

    def negated(self) -> "LocalSpectrum":
        return LocalSpectrum(tuple(-x for x in reversed(self.levels)))

    def shifted(self, c: float) -> "LocalSpectrum":
        return LocalSpectrum(tuple(x + c for x in self.levels))


def make_spectrum(values: Iterable[float]) -> LocalSpectrum:
    """Validate and sort raw eigenvalues.

    >>> make_spectrum([4, 0, 2]).levels
    (0.0, 2.0, 4.0)
    """
    vals = [float(v) for v in values]
    if not vals:
        raise InvalidSpectrum("spectrum must contain at least one level")
    if not all(math.isfinite(v) for v in vals):
        raise InvalidSpectrum(f"spectrum contains non-finite values: {vals}")
    return LocalSpectrum(tuple(sorted(vals)))


def _as_spectrum(x) -> LocalSpectrum:
    return x if isinstance(x, LocalSpectrum) else make_spectrum(x)


def _count_within(values: np.ndarray, ref: float, tol: float) -> int:
    return int(np.count_nonzero(np.abs(values - ref) <= tol))


@dataclass(frozen=True)
class JointLevels:
    """Fictitious Hamiltonian levels ``E_i`` of length ``N_A``.

    ``levels`` is ascending for both alignments.  ``swapped`` records that the
    caller's first spectrum was the larger one and played the role of B.
    """

    levels: tuple[float, ...]
    alignment: Alignment
    offset: int = 0
    swapped: bool = False
    tol: float = 0.0
    ground_degeneracy: int = field(init=False)
    top_degeneracy: int = field(init=False)

    def __post_init__(self):
        if self.tol < 0:
            raise InvalidParameter("degeneracy tolerance must be non-negative")
        arr = np.asarray(self.levels, dtype=float)
        object.__setattr__(self, "ground_degeneracy", _count_within(arr, arr[0], self.tol))
        object.__setattr__(self, "top_degeneracy", _count_within(arr, arr[-1], self.tol))

    @property
    def size(self) -> int:
        return len(self.levels)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.levels, dtype=float)

    def negated(self) -> "JointLevels":
        """Levels of ``-H~`` in ascending order (reversed index order)."""
        return JointLevels(
            tuple(-x for x in reversed(self.levels)),
            self.alignment,
            self.offset,
            self.swapped,
            self.tol,
        )


def _ordered(a, b) -> tuple[LocalSpectrum, LocalSpectrum, bool]:
    a, b = _as_spectrum(a), _as_spectrum(b)
    if a.dimension > b.dimension:
        return b, a, True
    return a, b, False


def align_min(a, b, tol: float = 0.0) -> JointLevels:
    """Pair the i-th levels of both subsystems: ``E_i = A_i + B_i``."""
    sa, sb, swapped = _ordered(a, b)
    n = sa.dimension
    levels = tuple(sa.levels[i] + sb.levels[i] for i in range(n))
    return JointLevels(levels, Alignment.MIN, 0, swapped, tol)


def align_max(a, b, tol: float = 0.0) -> JointLevels:
    """Pair level i of the small subsystem with level ``i + Δ`` of the large
    one, ``Δ = N_B - N_A``, so the top levels are matched."""
    sa, sb, swapped = _ordered(a, b)
    n = sa.dimension
    delta = sb.dimension - n
    levels = tuple(sa.levels[i] + sb.levels[i + delta] for i in range(n))
    return JointLevels(levels, Alignment.MAX, delta, swapped, tol)


def ground_degeneracy(j: JointLevels, tol: float = 0.0) -> int:
    if tol < 0:
        raise InvalidParameter("tol must be non-negative")
    arr = j.as_array()
    return _count_within(arr, arr[0], tol)


def top_degeneracy(j: JointLevels, tol: float = 0.0) -> int:
    if tol < 0:
        raise InvalidParameter("tol must be non-negative")
    arr = j.as_array()
    return _count_within(arr, arr[-1], tol)
