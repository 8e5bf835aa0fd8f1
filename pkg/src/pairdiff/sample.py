"""Sample data model: paired observations/predictions, weights and weighted moments."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySample,
    InvariantViolation,
    LengthMismatch,
    NonPositiveWeight,
)

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-12
# Predictions closer than this to 0 or 1 are rejected for unit-interval and probability samples.
BOUNDARY_TOL = 1e-12
QUANTILE_LEVELS = (0.10, 0.25, 0.50, 0.75, 0.90)


class Kind(enum.Enum):
    RESIDUAL = "residual"
    UNIT_INTERVAL = "unit-interval"
    NON_NEGATIVE = "non-negative"
    PROBABILITY = "probability"


def normalize_weights(raw) -> np.ndarray:
    """Scale positive raw weights (exposures, limits, ...) to sum to one.

    Weights that already sum to one within ``WEIGHT_TOL`` are returned unchanged.
    """
    raw = np.asarray(raw, dtype=float).ravel()
    if raw.size == 0:
        raise EmptySample("cannot normalize an empty weight vector")
    if not np.all(np.isfinite(raw)) or np.any(raw <= 0):
        bad = int(np.flatnonzero(~(raw > 0))[0]) if np.any(~(raw > 0)) else 0
        raise NonPositiveWeight(f"weight at position {bad} is not a positive finite number")
    total = math.fsum(raw)
    if abs(total - 1.0) <= WEIGHT_TOL:
        return raw.copy()
    return raw / total


def equal_weights(n: int) -> np.ndarray:
    if n < 1:
        raise EmptySample("sample size must be at least 1")
    return np.full(n, 1.0 / n)


def _check_lengths(x: np.ndarray, w: np.ndarray) -> None:
    if x.shape != w.shape:
        raise LengthMismatch(f"values have length {x.size} but weights have length {w.size}")


def weighted_mean(x, w) -> float:
    x = np.asarray(x, dtype=float).ravel()
    w = np.asarray(w, dtype=float).ravel()
    _check_lengths(x, w)
    return math.fsum(w * x)


def weighted_variance(x, w) -> float:
    """Variance of the discrete distribution putting mass ``w[i]`` on ``x[i]``.

    Computed as the second moment minus the squared mean; round-off that drives
    the result below zero is clamped (and logged).
    """
    x = np.asarray(x, dtype=float).ravel()
    w = np.asarray(w, dtype=float).ravel()
    _check_lengths(x, w)
    mean = math.fsum(w * x)
    var = math.fsum(w * x * x) - mean * mean
    if var < 0.0:
        logger.debug("weighted variance %.3e clamped to zero", var)
        return 0.0
    return var


@dataclass(frozen=True)
class PairedSample:
    """Matched observation/prediction vectors with normalized weights.

    ``kind`` fixes the admissible ranges: unit-interval samples need
    ``0 <= obs <= 1`` and ``0 < pred < 1``, non-negative samples ``obs >= 0`` and
    ``pred > 0``, probability samples ``obs in {0, 1}`` and ``0 < pred < 1``.
    """

    obs: np.ndarray
    pred: np.ndarray
    weights: np.ndarray
    kind: Kind = Kind.RESIDUAL

    def __post_init__(self):
        obs = np.asarray(self.obs, dtype=float).ravel()
        pred = np.asarray(self.pred, dtype=float).ravel()
        w = np.asarray(self.weights, dtype=float).ravel()
        if obs.size == 0:
            raise EmptySample("sample has no observations")
        if pred.size != obs.size or w.size != obs.size:
            raise LengthMismatch(
                f"obs/pred/weights lengths differ: {obs.size}/{pred.size}/{w.size}"
            )
        if np.any(w <= 0):
            raise NonPositiveWeight("weights must be strictly positive")
        if abs(math.fsum(w) - 1.0) > WEIGHT_TOL:
            raise InvariantViolation("weights must sum to one; use normalize_weights")
        if not (np.all(np.isfinite(obs)) and np.all(np.isfinite(pred))):
            raise InvariantViolation("observations and predictions must be finite")
        bad = _range_violation(obs, pred, self.kind)
        if bad is not None:
            i, what = bad
            raise InvariantViolation(f"observation {i}: {what}")
        for name, arr in (("obs", obs), ("pred", pred), ("weights", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_raw(cls, obs, pred, raw_weights=None, kind: Kind = Kind.RESIDUAL) -> "PairedSample":
        obs = np.asarray(obs, dtype=float)
        w = equal_weights(obs.size) if raw_weights is None else normalize_weights(raw_weights)
        return cls(obs, pred, w, kind)

    @property
    def n(self) -> int:
        return self.obs.size

    @property
    def residuals(self) -> np.ndarray:
        return self.obs - self.pred

    @property
    def obs_mean(self) -> float:
        return weighted_mean(self.obs, self.weights)

    @property
    def pred_mean(self) -> float:
        return weighted_mean(self.pred, self.weights)

    @property
    def residual_mean(self) -> float:
        return weighted_mean(self.residuals, self.weights)

    def with_weights(self, weights) -> "PairedSample":
        return PairedSample(self.obs, self.pred, weights, self.kind)

    def equally_weighted(self) -> "PairedSample":
        return self.with_weights(equal_weights(self.n))

    @property
    def has_equal_weights(self) -> bool:
        return bool(np.all(np.abs(self.weights - 1.0 / self.n) <= WEIGHT_TOL))


def _range_violation(obs, pred, kind):
    if kind is Kind.RESIDUAL:
        return None
    if kind is Kind.UNIT_INTERVAL:
        checks = (
            (~((obs >= 0) & (obs <= 1)), "observation must lie in [0, 1]"),
            (~((pred > BOUNDARY_TOL) & (pred < 1 - BOUNDARY_TOL)), "prediction must lie in (0, 1)"),
        )
    elif kind is Kind.NON_NEGATIVE:
        checks = (
            (~(obs >= 0), "observation must be non-negative"),
            (~(pred > 0), "prediction must be positive"),
        )
    else:
        checks = (
            (~((obs == 0) | (obs == 1)), "status indicator must be 0 or 1"),
            (~((pred > BOUNDARY_TOL) & (pred < 1 - BOUNDARY_TOL)), "probability must lie in (0, 1)"),
        )
    for mask, what in checks:
        if np.any(mask):
            return int(np.flatnonzero(mask)[0]), what
    return None


_ADJUSTED_KIND = {
    Kind.RESIDUAL: Kind.RESIDUAL,
    # n*w*obs can leave the unit interval, but stays non-negative
    Kind.UNIT_INTERVAL: Kind.NON_NEGATIVE,
    Kind.NON_NEGATIVE: Kind.NON_NEGATIVE,
    Kind.PROBABILITY: Kind.RESIDUAL,
}


def _adjust_scale(w: np.ndarray) -> np.ndarray:
    n = w.size
    # n * (1/n) is not always 1.0 in floating point (n = 49, 98, ...)
    if np.all(np.abs(w - 1.0 / n) <= WEIGHT_TOL):
        return np.ones(n)
    return n * w


def weight_adjust(sample: PairedSample) -> PairedSample:
    """Fold the weights into the sample: scale every pair by ``n * w_i``, then weight equally.

    Residuals of the result are ``n * w_i * (obs_i - pred_i)`` and their plain
    mean equals the weighted residual mean of the input.
    """
    scale = _adjust_scale(sample.weights)
    return PairedSample(
        scale * sample.obs,
        scale * sample.pred,
        equal_weights(sample.n),
        _ADJUSTED_KIND[sample.kind],
    )


def adjusted_residuals(residuals, w) -> np.ndarray:
    residuals = np.asarray(residuals, dtype=float)
    w = np.asarray(w, dtype=float)
    _check_lengths(residuals, w)
    return _adjust_scale(w) * residuals


@dataclass(frozen=True)
class SampleSummary:
    n: int
    mean_eq: float
    mean_w: float
    sd_eq: float
    sd_w: float
    sd_adj: float
    top_weights: tuple
    quantiles: tuple
    quantiles_adj: tuple

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "mean_eq": self.mean_eq,
            "mean_w": self.mean_w,
            "sd_eq": self.sd_eq,
            "sd_w": self.sd_w,
            "sd_adj": self.sd_adj,
            "top_weights": list(self.top_weights),
            "quantiles": list(self.quantiles),
            "quantiles_adj": list(self.quantiles_adj),
        }


def summarize(sample: PairedSample) -> SampleSummary:
    d = sample.residuals
    w = sample.weights
    eq = equal_weights(sample.n)
    d_adj = adjusted_residuals(d, w)
    # numpy's default "linear" method is the type-7 empirical quantile
    q = np.quantile(d, QUANTILE_LEVELS)
    q_adj = np.quantile(d_adj, QUANTILE_LEVELS)
    top = np.sort(w)[::-1][:3]
    return SampleSummary(
        n=sample.n,
        mean_eq=weighted_mean(d, eq),
        mean_w=weighted_mean(d, w),
        sd_eq=math.sqrt(weighted_variance(d, eq)),
        sd_w=math.sqrt(weighted_variance(d, w)),
        sd_adj=math.sqrt(weighted_variance(d_adj, eq)),
        top_weights=tuple(float(x) for x in top),
        quantiles=tuple(float(x) for x in q),
        quantiles_adj=tuple(float(x) for x in q_adj),
    )
