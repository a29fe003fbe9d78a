"""
weight_schemes.py
-----------------
View-weight learning schemes: intrinsic weights (IW), norm regularization
(NR), entropy regularization (ER), exponent flattening (EF) and plain equal
weights, plus the closed-form weight updates each of them uses inside the
alternating driver.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import softmax

from utils.errors import InvalidInputError
from utils.linalg import project_to_simplex

logger = logging.getLogger(__name__)

EPS_PHI = 1e-12

PRESET_GRIDS: Dict[str, List[float]] = {
    "iw": [0.1, 0.4, 0.7, 1.0, 1.3, 1.7],
    "nr": [1, 5, 10, 50, 100, 500, 1000],
    "er": [1, 5, 10, 50, 100, 500, 1000],
    "ef": [1.5, 2.0, 2.5, 3.0, 3.5, 4.0],
    "equal": [0.0],
}


class SchemeKind(str, Enum):
    IW = "iw"
    NR = "nr"
    ER = "er"
    EF = "ef"
    EQUAL = "equal"


class WeightVector(NamedTuple):
    """
    Per-view weights. ``normalized`` tells whether ``values`` lie on the
    simplex; raw IW weights do not. ``degenerate`` is set when a zero loss
    had to be clamped to EPS_PHI.
    """

    values: np.ndarray
    normalized: bool
    degenerate: bool = False

    def as_simplex(self) -> np.ndarray:
        if self.normalized:
            return self.values
        return self.values / self.values.sum()


def _as_phi(phi: Sequence[float]) -> np.ndarray:
    phi = np.asarray(phi, dtype=float).ravel()
    if phi.size == 0:
        raise InvalidInputError("objective vector is empty")
    if not np.all(np.isfinite(phi)):
        raise InvalidInputError(f"objective vector has non-finite entries: {phi}")
    if np.any(phi < 0):
        raise InvalidInputError(f"per-view losses must be non-negative, got {phi}")
    return phi


def _clamp(phi: np.ndarray, eps_phi: float) -> Tuple[np.ndarray, bool]:
    small = phi <= eps_phi
    if not np.any(small):
        return phi, False
    logger.warning(
        "Clamping %d per-view loss(es) at or below %.1e; weights would diverge",
        int(small.sum()),
        eps_phi,
    )
    return np.maximum(phi, eps_phi), True


# ----------------------------------------------------------------------
# Closed-form updates
# ----------------------------------------------------------------------
def iw_update(phi: Sequence[float], p: float, eps_phi: float = EPS_PHI) -> WeightVector:
    """Raw intrinsic weights alpha_v = (p/2) * Phi_v ** ((p - 2) / 2)."""
    if not 0 < p <= 2:
        raise InvalidInputError(f"IW exponent p must lie in (0, 2], got {p}")
    phi = _as_phi(phi)
    if p == 2:
        return WeightVector(np.ones_like(phi), normalized=False)
    phi, degenerate = _clamp(phi, eps_phi)
    values = (p / 2.0) * np.power(phi, (p - 2.0) / 2.0)
    return WeightVector(values, normalized=False, degenerate=degenerate)


def iw_normalized(phi: Sequence[float], p: float, eps_phi: float = EPS_PHI) -> WeightVector:
    """
    IW weights rescaled onto the simplex:
    alpha_v = 1 / sum_u (Phi_v / Phi_u) ** ((2 - p) / 2).
    """
    if not 0 < p <= 2:
        raise InvalidInputError(f"IW exponent p must lie in (0, 2], got {p}")
    phi = _as_phi(phi)
    if p == 2:
        return WeightVector(np.full(phi.size, 1.0 / phi.size), normalized=True)
    phi, degenerate = _clamp(phi, eps_phi)
    values = _ratio_weights(phi, (2.0 - p) / 2.0)
    return WeightVector(values, normalized=True, degenerate=degenerate)


def _ratio_weights(phi: np.ndarray, exponent: float) -> np.ndarray:
    ratios = phi[:, np.newaxis] / phi[np.newaxis, :]
    with np.errstate(over="ignore"):
        return 1.0 / np.power(ratios, exponent).sum(axis=1)


def nr_update(phi: Sequence[float], gamma1: float) -> WeightVector:
    """Norm regularization: project -phi / (2 gamma1) onto the simplex."""
    if gamma1 < 0:
        raise InvalidInputError(f"NR requires gamma1 >= 0, got {gamma1}")
    phi = _as_phi(phi)
    if gamma1 == 0:
        values = np.zeros_like(phi)
        values[int(np.argmin(phi))] = 1.0
        return WeightVector(values, normalized=True)
    return WeightVector(project_to_simplex(-phi / (2.0 * gamma1)), normalized=True)


def er_update(phi: Sequence[float], gamma2: float) -> WeightVector:
    """Entropy regularization: Gibbs distribution alpha_v ~ exp(-Phi_v / gamma2)."""
    if gamma2 <= 0:
        raise InvalidInputError(f"ER requires gamma2 > 0, got {gamma2}")
    phi = _as_phi(phi)
    return WeightVector(softmax(-phi / gamma2), normalized=True)


def ef_update(phi: Sequence[float], gamma3: float, eps_phi: float = EPS_PHI) -> WeightVector:
    """Exponent flattening: alpha_v = 1 / sum_u (Phi_v / Phi_u) ** (1 / (gamma3 - 1))."""
    if gamma3 <= 1:
        raise InvalidInputError(f"EF requires gamma3 > 1, got {gamma3}")
    phi = _as_phi(phi)
    phi, degenerate = _clamp(phi, eps_phi)
    values = _ratio_weights(phi, 1.0 / (gamma3 - 1.0))
    return WeightVector(values, normalized=True, degenerate=degenerate)


def equal_update(phi: Sequence[float]) -> WeightVector:
    phi = _as_phi(phi)
    return WeightVector(np.full(phi.size, 1.0 / phi.size), normalized=True)


def ef_equivalent_p(gamma3: float) -> float:
    """
    IW exponent whose normalized weights coincide with EF(gamma3):
    (2 - p) / 2 = 1 / (gamma3 - 1). Only gamma3 > 2 maps into (0, 2).
    """
    if gamma3 <= 2:
        raise InvalidInputError(f"no IW exponent in (0, 2) matches EF with gamma3={gamma3}")
    return 2.0 - 2.0 / (gamma3 - 1.0)


# ----------------------------------------------------------------------
# Sharpest-p analysis
# ----------------------------------------------------------------------
def _iw_weight(p: float, phi: float) -> float:
    return (p / 2.0) * phi ** ((p - 2.0) / 2.0)


def weight_spread(p: float, phi_min: float) -> float:
    """f(p, phi_min) - f(p, 1): gap between the largest and smallest raw weight."""
    return _iw_weight(p, phi_min) - _iw_weight(p, 1.0)


def sharpest_p(phi_min: float, exact: bool = False) -> float:
    """
    Exponent giving the sharpest single-step IW weight distribution when the
    losses are scaled so that the largest equals one.

    By default returns the stationary point -2 / ln(phi_min) of the smallest
    loss' weight, clipped to (0, 2]. With ``exact=True`` maximises
    weight_spread numerically over (0, 2] instead.
    """
    if not 0 < phi_min < 1:
        raise InvalidInputError(f"phi_min must lie in (0, 1), got {phi_min}")
    if exact:
        res = minimize_scalar(
            lambda p: -weight_spread(p, phi_min),
            bounds=(1e-9, 2.0),
            method="bounded",
            options={"xatol": 1e-10},
        )
        return float(res.x)
    return min(-2.0 / math.log(phi_min), 2.0)


def descent_gap(u: float, v: float, p: float) -> float:
    """
    (v^p - (p/2) v^2 / v^(2-p)) - (u^p - (p/2) u^2 / v^(2-p)); non-negative
    for u, v > 0 and 0 < p <= 2. This is the inequality behind the IW
    descent guarantee.
    """
    scale = v ** (2.0 - p)
    return (v**p - (p / 2.0) * v**2 / scale) - (u**p - (p / 2.0) * u**2 / scale)


def weight_std(alpha: Sequence[float]) -> float:
    """Population standard deviation of the normalized weights."""
    alpha = np.asarray(alpha, dtype=float)
    return float(np.std(alpha / alpha.sum()))


# ----------------------------------------------------------------------
@dataclass(frozen=True)
class WeightScheme:
    """
    A weight-learning scheme with its hyperparameter: p for IW, gamma1 for NR,
    gamma2 for ER, gamma3 for EF. EQUAL ignores the hyperparameter.
    """

    kind: SchemeKind
    hyper: float = 0.0
    eps_phi: float = EPS_PHI
    normalize_phi: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        h = self.hyper
        if self.kind is SchemeKind.IW and not 0 < h <= 2:
            raise InvalidInputError(f"IW requires 0 < p <= 2, got {h}")
        if self.kind is SchemeKind.NR and h < 0:
            raise InvalidInputError(f"NR requires gamma1 >= 0, got {h}")
        if self.kind is SchemeKind.ER and h <= 0:
            raise InvalidInputError(f"ER requires gamma2 > 0, got {h}")
        if self.kind is SchemeKind.EF and h <= 1:
            raise InvalidInputError(f"EF requires gamma3 > 1, got {h}")

    @classmethod
    def iw(cls, p: float = 1.0, **kwargs) -> "WeightScheme":
        return cls(SchemeKind.IW, p, **kwargs)

    @classmethod
    def equal(cls) -> "WeightScheme":
        return cls(SchemeKind.EQUAL, 0.0)

    @property
    def label(self) -> str:
        if self.kind is SchemeKind.EQUAL:
            return "equal"
        return f"{self.kind.value}({self.hyper:g})"

    # ------------------------------------------------------------------
    def update(self, phi: Sequence[float]) -> WeightVector:
        """Weights for the next weighted subproblem given current per-view losses."""
        phi = _as_phi(phi)
        if self.kind is SchemeKind.IW:
            if self.normalize_phi and phi.max() > 0:
                phi = phi / phi.max()
            return iw_update(phi, self.hyper, self.eps_phi)
        if self.kind is SchemeKind.NR:
            return nr_update(phi, self.hyper)
        if self.kind is SchemeKind.ER:
            return er_update(phi, self.hyper)
        if self.kind is SchemeKind.EF:
            return ef_update(phi, self.hyper, self.eps_phi)
        return equal_update(phi)

    def objective(self, phi: Sequence[float], alpha: Optional[Sequence[float]] = None) -> float:
        """
        Full objective of the scheme at losses ``phi`` and weights ``alpha``
        (IW and EQUAL do not need weights).
        """
        phi = _as_phi(phi)
        if self.kind is SchemeKind.IW:
            return float(np.sum(np.power(phi, self.hyper / 2.0)))
        if self.kind is SchemeKind.EQUAL:
            return float(phi.mean())
        if alpha is None:
            raise InvalidInputError(f"{self.label} objective needs the weight vector")
        a = np.asarray(alpha, dtype=float)
        if self.kind is SchemeKind.NR:
            return float(a @ phi + self.hyper * a @ a)
        if self.kind is SchemeKind.ER:
            positive = a > 0
            entropy = float(np.sum(a[positive] * np.log(a[positive])))
            return float(a @ phi) + self.hyper * entropy
        return float(np.power(a, self.hyper) @ phi)

    def grid(self) -> List[float]:
        return list(PRESET_GRIDS[self.kind.value])


def preset_grid(kind: str) -> List[float]:
    try:
        return list(PRESET_GRIDS[SchemeKind(kind).value])
    except ValueError as exc:
        raise InvalidInputError(f"unknown weight scheme '{kind}'") from exc
