"""Closed-form bounds for two qubits, parameterized by reduced-state purity."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DegenerateRegime, InvalidParameter
from .spectra import _as_spectrum


@dataclass(frozen=True)
class TwoQubitBounds:
    purity: float
    lam: float
    beta: Optional[float]
    e_min: float
    e_max: float
    E0: float
    E1: float


def _check_purity(P: float) -> float:
    P = float(P)
    if not (0.5 <= P <= 1.0):
        raise InvalidParameter(f"purity must lie in [1/2, 1], got {P}")
    return P


def lambda_from_purity(P: float) -> float:
    """Largest squared Schmidt coefficient, ``(1 + sqrt(2P - 1)) / 2``."""
    P = _check_purity(P)
    return 0.5 * (1.0 + math.sqrt(2.0 * P - 1.0))


def entropy_from_purity(P: float) -> float:
    lam = lambda_from_purity(P)
    out = 0.0
    for p in (lam, 1.0 - lam):
        if p > 0:
            out -= p * math.log(p)
    return out


def closed_bounds(a, b, P: float) -> TwoQubitBounds:
    """Energy bounds and ``beta = beta'`` for a pair of qubits at purity ``P``.

    ``beta`` is None at ``P = 1`` where the extremal states are products.
    """
    a, b = _as_spectrum(a), _as_spectrum(b)
    if a.dimension != 2 or b.dimension != 2:
        raise InvalidParameter("closed forms need two-level spectra")
    lam = lambda_from_purity(P)
    E0 = a.levels[0] + b.levels[0]
    E1 = a.levels[1] + b.levels[1]
    if E1 == E0:
        raise DegenerateRegime("joint levels coincide; bounds collapse to E0")
    beta = None if lam == 1.0 else math.log(lam / (1.0 - lam)) / (E1 - E0)
    return TwoQubitBounds(
        purity=float(P),
        lam=lam,
        beta=beta,
        e_min=lam * E0 + (1.0 - lam) * E1,
        e_max=(1.0 - lam) * E0 + lam * E1,
        E0=E0,
        E1=E1,
    )
