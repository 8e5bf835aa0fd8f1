"""Basic paired-difference tests on residuals: weighted bootstrap, normal approximation, t-test.

Every test returns a :class:`PValuePair`.  ``p_prudent`` is the p-value for the
null that the weighted mean residual is non-negative (small values support
"predictions are prudent"), ``p_aggressive`` the p-value for the null that it
is non-positive.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, EmptySample, LengthMismatch, TooFewObservations, ZeroVariance
from .numerics import (
    AliasTable,
    bootstrap_pvalues,
    replicate_means,
    std_normal_cdf,
    student_t_cdf,
    weighted_index_draws,
)
from .sample import WEIGHT_TOL, equal_weights, weighted_mean, weighted_variance


class Weighting(enum.Enum):
    EQUAL = "equal"
    WEIGHTED = "weighted"
    WEIGHT_ADJUSTED = "weight-adjusted"


@dataclass(frozen=True)
class TestConfig:
    R: int = 999
    seed: int = 23
    weighting: Weighting = Weighting.WEIGHTED
    workers: int = 1

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.R < 1:
            raise DomainError("bootstrap replication count R must be at least 1")


@dataclass(frozen=True)
class PValuePair:
    p_prudent: float
    p_aggressive: float
    method: str
    statistic: Optional[float] = None
    diagnostics: dict = field(default_factory=dict, compare=False)


def _prepare(residuals, w):
    d = np.asarray(residuals, dtype=float).ravel()
    if d.size == 0:
        raise EmptySample("no residuals")
    w = equal_weights(d.size) if w is None else np.asarray(w, dtype=float).ravel()
    if w.shape != d.shape:
        raise LengthMismatch(f"{d.size} residuals but {w.size} weights")
    return d, w


def basic_bootstrap(residuals, w, cfg: TestConfig = TestConfig()) -> PValuePair:
    """Resample residuals with probabilities ``w`` and compare replicate means to ``2 * mean_w``.

    The replicates come from the null centred at zero while the test is run at
    the observed weighted mean, hence the doubled threshold.
    """
    d, w = _prepare(residuals, w)
    n = d.size
    table = AliasTable.from_weights(w)
    mean_w = weighted_mean(d, w)

    def draw(gen):
        return d[weighted_index_draws(gen, table, n)]

    means = replicate_means(draw, cfg.R, cfg.seed, cfg.workers)
    p, p_star = bootstrap_pvalues(means, 2.0 * mean_w)
    return PValuePair(p, p_star, "Basic", statistic=mean_w)


def basic_normal(residuals, w=None) -> PValuePair:
    d, w = _prepare(residuals, w)
    mean_w = weighted_mean(d, w)
    var = weighted_variance(d, w)
    if var <= 0.0:
        raise ZeroVariance("residuals are constant; normal approximation undefined")
    z = math.sqrt(d.size) * mean_w / math.sqrt(var)
    return PValuePair(std_normal_cdf(z), std_normal_cdf(-z), "Basic normal", statistic=z)


def t_test(residuals, w=None) -> PValuePair:
    """One-sample t-test on paired differences.

    With equal weights this is the textbook test.  Unequal weights plug the
    weighted mean and weighted second moment into the same statistic, which is
    reported for comparison only.
    """
    d, w = _prepare(residuals, w)
    n = d.size
    if n < 2:
        raise TooFewObservations("t-test needs at least two observations")
    mean_w = weighted_mean(d, w)
    s2 = weighted_variance(d, w) / (n - 1)
    if s2 <= 0.0:
        raise ZeroVariance("residuals are constant; t statistic undefined")
    t = mean_w / math.sqrt(s2)
    weighted = bool(np.any(np.abs(w - 1.0 / n) > WEIGHT_TOL))
    return PValuePair(
        student_t_cdf(t, n - 1),
        student_t_cdf(-t, n - 1),
        "t-test (weighted)" if weighted else "t-test",
        statistic=t,
    )
