"""Projection estimators, unbiased risk estimates, model selection, and aggregation.

The unbiased risk estimate of the projection keeping m coordinates is
    rbar(Y, m) = -sum_{i<=m} Y_i^2 + 2 sigma^2 m,
an unbiased estimate of the true risk up to one additive constant shared by
all m, so every consumer here (argmin selection, softmax weighting,
profile differences) is shift invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sequence_model import ModelIndexSet, NoiseLevel, Observation

__all__ = [
    "RiskProfile",
    "WeightVector",
    "projection_estimate",
    "unbiased_risk",
    "risk_profile",
    "ure_weights",
    "exponential_weights",
    "aggregate",
    "m_epsilon",
]


@dataclass(frozen=True)
class RiskProfile:
    """Unbiased risk estimates aligned with a model index set.

    argmin_index is the smallest model index attaining the minimum value.
    """

    models: ModelIndexSet
    values: np.ndarray
    min_value: float
    argmin_index: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.models.indices.shape:
            raise ValueError("profile values must align with the model index set")
        pos = int(np.argmin(values))
        if self.min_value != values[pos] or self.argmin_index != self.models.indices[pos]:
            raise ValueError("min_value/argmin_index are inconsistent with the values")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, models: ModelIndexSet, values) -> "RiskProfile":
        """Build a profile from raw values; ties in the argmin go to the smallest m."""
        vals = np.asarray(values, dtype=float)
        pos = int(np.argmin(vals))  # first occurrence breaks ties toward smaller m
        return cls(
            models=models,
            values=vals,
            min_value=float(vals[pos]),
            argmin_index=int(models.indices[pos]),
        )

    @property
    def argmin_position(self) -> int:
        """Position of argmin_index within the model index set."""
        return int(np.searchsorted(self.models.indices, self.argmin_index))


@dataclass(frozen=True)
class WeightVector:
    """Point on the probability simplex over a model index set."""

    models: ModelIndexSet
    weights: np.ndarray

    _SUM_TOL = 1e-12

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != self.models.indices.shape:
            raise ValueError("weights must align with the model index set")
        if np.any(w < 0.0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        if abs(float(w.sum()) - 1.0) > self._SUM_TOL:
            raise ValueError(f"weights must sum to 1 within {self._SUM_TOL}")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)


def projection_estimate(Y: Observation, m: int) -> np.ndarray:
    """Keep the first m observed coordinates, zero the rest (output length N)."""
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    keep = min(m, Y.length)
    out = np.zeros(Y.length)
    out[:keep] = Y.values[:keep]
    return out


def unbiased_risk(Y: Observation, m: int) -> float:
    """Unbiased risk estimate -sum_{i<=m} Y_i^2 + 2 sigma^2 m of the m-projection."""
    m = int(m)
    if m < 1:
        raise ValueError("m must be >= 1")
    if m > Y.length:
        raise ValueError(
            f"m={m} exceeds the observation length {Y.length}; "
            "coordinates beyond the support would be silently dropped"
        )
    head = Y.values[:m]
    return float(2.0 * Y.noise.variance * m - np.dot(head, head))


def _profile_values(values: np.ndarray, variance: float, indices: np.ndarray) -> np.ndarray:
    cum2 = np.cumsum(values * values)
    return 2.0 * variance * indices - cum2[indices - 1]


def risk_profile(Y: Observation, M: ModelIndexSet) -> RiskProfile:
    """Unbiased risk estimates over all m in M, with the argmin selection."""
    if M.max_index > Y.length:
        raise ValueError(
            f"max model index {M.max_index} exceeds the observation length {Y.length}"
        )
    values = _profile_values(Y.values, Y.noise.variance, M.indices)
    return RiskProfile.from_values(M, values)


def ure_weights(profile: RiskProfile) -> WeightVector:
    """Atomic weights: all mass on the profile's argmin model."""
    w = np.zeros(len(profile.models))
    w[profile.argmin_position] = 1.0
    return WeightVector(models=profile.models, weights=w)


def _softmax_weights(values: np.ndarray, min_value: float, variance: float) -> np.ndarray:
    # Max-shift before exponentiating: the largest exponent is exactly 0, so the
    # sum is >= 1 and can neither overflow nor vanish.  Extreme spreads underflow
    # to exact zeros, which is the intended saturation.  Normalization runs in
    # extended precision before casting back.
    exponents = -(values - min_value) / (4.0 * variance)
    expd = np.exp(exponents.astype(np.longdouble))
    return np.asarray(expd / expd.sum(), dtype=float)


def exponential_weights(profile: RiskProfile, sigma: NoiseLevel) -> WeightVector:
    """Softmax weights proportional to exp(-rbar / (4 sigma^2))."""
    w = _softmax_weights(profile.values, profile.min_value, sigma.variance)
    return WeightVector(models=profile.models, weights=w)


def _suffix_weight_per_coordinate(
    indices: np.ndarray, weights: np.ndarray, length: int
) -> np.ndarray:
    # Coordinate i of the aggregate is Y_i times the total weight of all models
    # with m >= i; a reversed cumulative sum gives every suffix in O(#M + N).
    suffix = np.concatenate([np.cumsum(weights[::-1])[::-1], [0.0]])
    positions = np.searchsorted(indices, np.arange(1, length + 1), side="left")
    return suffix[positions]


def aggregate(Y: Observation, M: ModelIndexSet, w: WeightVector) -> np.ndarray:
    """Convex combination of projection estimates, computed through suffix sums."""
    if not np.array_equal(w.models.indices, M.indices):
        raise ValueError("weight vector is not aligned with the model index set")
    scale = _suffix_weight_per_coordinate(M.indices, w.weights, Y.length)
    return Y.values * scale


def m_epsilon(
    profile: RiskProfile,
    sigma: NoiseLevel,
    epsilon: float,
    center: float | None = None,
) -> int:
    """Largest model whose risk estimate stays under the linear-in-m envelope.

    Returns max{m in M : rbar(m) - center <= 4 epsilon sigma^2 (m - mhat) + 4 sigma^2}.
    With the default centering at the profile minimum the set always contains
    mhat, so the scan is well defined.  A custom center (for diagnostics that
    compare against an externally computed risk level) may empty the set, in
    which case the argmin model is returned.
    """
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    if center is None:
        center = profile.min_value
    variance = sigma.variance
    envelope = 4.0 * epsilon * variance * (
        profile.models.indices - profile.argmin_index
    ) + 4.0 * variance
    admissible = (profile.values - center) <= envelope
    if not np.any(admissible):
        return profile.argmin_index
    return int(profile.models.indices[admissible][-1])
