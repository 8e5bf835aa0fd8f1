"""Variance-expanded tests for non-negative variables such as EAD.

Null model: ``obs[I] - Y`` with ``Y`` given ``I = i`` gamma distributed with
shape ``theta_i / v`` and *scale* ``v`` (mean ``theta_i``, variance
``v * theta_i``); ``theta_i`` are the linearly rescaled predictions.
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
    sample_gamma,
    std_normal_cdf,
    weighted_index_draws,
)
from .recalibration import linear_scale
from .sample import Kind, PairedSample, weighted_mean, weighted_variance


@dataclass(frozen=True)
class GammaMixtureModel:
    theta_i: np.ndarray
    v: float
    w: np.ndarray
    obs: np.ndarray

    @property
    def shape(self) -> np.ndarray:
        return self.theta_i / self.v

    @property
    def scale(self) -> float:
        return self.v

    @cached_property
    def index_table(self) -> AliasTable:
        return AliasTable.from_weights(self.w)

    def draw(self, gen: np.random.Generator, size: int) -> np.ndarray:
        idx = weighted_index_draws(gen, self.index_table, size)
        return self.obs[idx] - sample_gamma(self.shape[idx], self.scale, gen)


def estimate_v_gamma(obs, w) -> float:
    """Dispersion estimate (sum w h^2 - h_w^2) / h_w."""
    h_w = weighted_mean(obs, w)
    if not h_w > 0.0:
        raise DegenerateMean("weighted mean exposure is zero")
    return weighted_variance(obs, w) / h_w


def _require_nonneg(sample: PairedSample) -> None:
    if sample.kind is not Kind.NON_NEGATIVE:
        raise DomainError(f"expected a non-negative sample, got {sample.kind.value}")


def build_gamma_model(sample: PairedSample, v: float, theta: float) -> GammaMixtureModel:
    _require_nonneg(sample)
    if not (v > 0.0 and math.isfinite(v)):
        raise DegenerateV(f"dispersion v must be positive, got {v}")
    targets = linear_scale(sample.pred, sample.weights, theta)
    return GammaMixtureModel(targets.theta_i, v, sample.weights, sample.obs)


def model_moments_gamma(model: GammaMixtureModel, theta: float) -> tuple[float, float]:
    w, obs, th = model.w, model.obs, model.theta_i
    h_w = weighted_mean(obs, w)
    var = math.fsum(w * (obs - th) ** 2) - (h_w - theta) ** 2 + model.v * theta
    return h_w - theta, var


def _null_at_mean(sample: PairedSample, v: float) -> tuple[GammaMixtureModel, float]:
    _require_nonneg(sample)
    h_w = sample.obs_mean
    if not h_w > 0.0:
        raise DegenerateMean("weighted mean exposure is zero")
    return build_gamma_model(sample, v, h_w), h_w


def nonneg_bootstrap(sample: PairedSample, cfg: TestConfig, v: float) -> PValuePair:
    model, h_w = _null_at_mean(sample, v)
    n = sample.n
    threshold = h_w - sample.pred_mean
    means = replicate_means(lambda gen: model.draw(gen, n), cfg.R, cfg.seed, cfg.workers)
    p, p_star = bootstrap_pvalues(means, threshold)
    return PValuePair(p, p_star, "Expanded variance", statistic=threshold, diagnostics={"v": v})


def nonneg_normal(sample: PairedSample, v: float) -> PValuePair:
    model, h_w = _null_at_mean(sample, v)
    var = math.fsum(sample.weights * (sample.obs - model.theta_i) ** 2) + v * h_w
    if var <= 0.0:
        raise ZeroVariance("expanded variance vanishes")
    z = math.sqrt(sample.n) * (h_w - sample.pred_mean) / math.sqrt(var)
    return PValuePair(
        std_normal_cdf(z), std_normal_cdf(-z), "Exp var normal", statistic=z, diagnostics={"v": v}
    )
