"""Variance-expanded tests for unit-interval variables such as LGD and CCF.

Null model: a single draw is ``obs[I] - Y`` with ``P[I = i] = w[i]`` and, given
``I = i``, ``Y`` beta distributed with mean ``theta_i`` and variance
``v * theta_i * (1 - theta_i)``.  The ``theta_i`` come from the power transform
of the predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .basic import PValuePair, TestConfig
from .errors import DegenerateMean, DegenerateV, DomainError, ZeroVariance
from .numerics import (
    AliasTable,
    bootstrap_pvalues,
    replicate_means,
    sample_beta,
    std_normal_cdf,
    weighted_index_draws,
)
from .recalibration import power_transform
from .sample import Kind, PairedSample, weighted_mean, weighted_variance


@dataclass(frozen=True)
class BetaMixtureModel:
    theta_i: np.ndarray
    v: float
    w: np.ndarray
    obs: np.ndarray

    @property
    def alpha(self) -> np.ndarray:
        return self.theta_i * (1.0 - self.v) / self.v

    @property
    def beta(self) -> np.ndarray:
        return (1.0 - self.theta_i) * (1.0 - self.v) / self.v

    @cached_property
    def index_table(self) -> AliasTable:
        return AliasTable.from_weights(self.w)

    def draw(self, gen: np.random.Generator, size: int) -> np.ndarray:
        idx = weighted_index_draws(gen, self.index_table, size)
        return self.obs[idx] - sample_beta(self.alpha[idx], self.beta[idx], gen)


def estimate_v_unit(obs, w) -> float:
    """Dispersion estimate (sum w l^2 - l_w^2) / (l_w (1 - l_w)), in [0, 1]."""
    l_w = weighted_mean(obs, w)
    if not 0.0 < l_w < 1.0:
        raise DegenerateMean(f"weighted mean observation {l_w} leaves no room for dispersion")
    v = weighted_variance(obs, w) / (l_w * (1.0 - l_w))
    return min(max(v, 0.0), 1.0)


def _require_unit(sample: PairedSample) -> None:
    if sample.kind is not Kind.UNIT_INTERVAL:
        raise DomainError(f"expected a unit-interval sample, got {sample.kind.value}")


def _check_v(v: float) -> None:
    if not 0.0 < v < 1.0:
        raise DegenerateV(f"dispersion v must lie strictly inside (0, 1), got {v}")


def build_beta_model(sample: PairedSample, v: float, theta: float) -> BetaMixtureModel:
    _require_unit(sample)
    _check_v(v)
    targets = power_transform(sample.pred, sample.weights, theta)
    return BetaMixtureModel(targets.theta_i, v, sample.weights, sample.obs)


def model_moments_unit(model: BetaMixtureModel, theta: float) -> tuple[float, float]:
    """Mean and variance of a single draw of the null model at target ``theta``."""
    w, obs, th = model.w, model.obs, model.theta_i
    l_w = weighted_mean(obs, w)
    var = (
        math.fsum(w * (obs - th) ** 2)
        - (l_w - theta) ** 2
        + model.v * math.fsum(w * th * (1.0 - th))
    )
    return l_w - theta, var


def _null_at_mean(sample: PairedSample, v: float) -> tuple[BetaMixtureModel, float]:
    _require_unit(sample)
    l_w = sample.obs_mean
    if not 0.0 < l_w < 1.0:
        raise DegenerateMean(f"weighted mean observation {l_w} must lie in (0, 1)")
    return build_beta_model(sample, v, l_w), l_w


def interval_bootstrap(sample: PairedSample, cfg: TestConfig, v: float) -> PValuePair:
    model, l_w = _null_at_mean(sample, v)
    n = sample.n
    threshold = l_w - sample.pred_mean
    means = replicate_means(lambda gen: model.draw(gen, n), cfg.R, cfg.seed, cfg.workers)
    p, p_star = bootstrap_pvalues(means, threshold)
    return PValuePair(p, p_star, "Expanded variance", statistic=threshold, diagnostics={"v": v})


def interval_normal(sample: PairedSample, v: float) -> PValuePair:
    model, l_w = _null_at_mean(sample, v)
    w, th = sample.weights, model.theta_i
    var = math.fsum(w * (sample.obs - th) ** 2) + v * math.fsum(w * th * (1.0 - th))
    if var <= 0.0:
        raise ZeroVariance("expanded variance vanishes")
    z = math.sqrt(sample.n) * (l_w - sample.pred_mean) / math.sqrt(var)
    return PValuePair(
        std_normal_cdf(z), std_normal_cdf(-z), "Exp var normal", statistic=z, diagnostics={"v": v}
    )
