"""Tests for probability predictions (PD): exact lattice p-values and the binomial family.

Null model: ``b[I] - Y`` with ``Y`` Bernoulli(theta_i) given ``I = i`` and the
``theta_i`` from the Bayes-odds transform.  A single draw takes values in
{-1, 0, 1}, so the mean of ``n`` draws lives on the lattice {-n..n}/n and its
distribution can be computed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .basic import PValuePair
from .errors import DegenerateMean, DomainError, ZeroVariance
from .numerics import (
    AliasTable,
    LatticeDistribution,
    lattice_convolve_n,
    reg_inc_beta,
    std_normal_cdf,
    weighted_index_draws,
)
from .recalibration import odds_rho, odds_transform
from .sample import Kind, PairedSample, weighted_mean

THRESHOLD_SNAP = 1e-12


@dataclass(frozen=True)
class BernoulliMixtureModel:
    theta_i: np.ndarray
    rho: np.ndarray
    w: np.ndarray
    b: np.ndarray

    @cached_property
    def index_table(self) -> AliasTable:
        return AliasTable.from_weights(self.w)

    def draw(self, gen: np.random.Generator, size: int) -> np.ndarray:
        idx = weighted_index_draws(gen, self.index_table, size)
        y = gen.random(size) < self.theta_i[idx]
        return self.b[idx] - y


@dataclass(frozen=True)
class BinomialSummary:
    N: int
    D: int
    PD: float

    def __post_init__(self):
        if self.N < 1 or not 0 <= self.D <= self.N:
            raise DomainError(f"need N >= 1 and 0 <= D <= N, got N={self.N}, D={self.D}")
        if not 0.0 < self.PD < 1.0:
            raise DomainError(f"PD must lie in (0, 1), got {self.PD}")

    @classmethod
    def from_sample(cls, sample: PairedSample) -> "BinomialSummary":
        _require_prob(sample)
        return cls(sample.n, int(round(sample.obs.sum())), float(np.mean(sample.pred)))


def _require_prob(sample: PairedSample) -> None:
    if sample.kind is not Kind.PROBABILITY:
        raise DomainError(f"expected a probability sample, got {sample.kind.value}")


def build_bernoulli_model(sample: PairedSample, theta: float) -> BernoulliMixtureModel:
    _require_prob(sample)
    targets = odds_transform(sample.pred, sample.weights, theta)
    rho = odds_rho(sample.pred, sample.weights)
    return BernoulliMixtureModel(targets.theta_i, rho, sample.weights, sample.obs)


def model_moments_prob(model: BernoulliMixtureModel, theta: float) -> tuple[float, float]:
    w, b, th = model.w, model.b, model.theta_i
    b_w = weighted_mean(b, w)
    var = math.fsum(w * (b - th) ** 2) - (b_w - theta) ** 2 + math.fsum(w * th * (1.0 - th))
    return b_w - theta, var


def atom_pmf(model: BernoulliMixtureModel) -> tuple[float, float, float]:
    """Probabilities of a single draw taking the values -1, 0 and +1."""
    w, b, th = model.w, model.b, model.theta_i
    p_minus = math.fsum(w * (1.0 - b) * th)
    p_plus = math.fsum(w * b * (1.0 - th))
    p_zero = max(1.0 - p_minus - p_plus, 0.0)
    return p_minus, p_zero, p_plus


def lattice_distribution(sample: PairedSample, theta: float) -> LatticeDistribution:
    """Exact distribution of the mean of ``n`` draws from the null model at ``theta``."""
    return lattice_convolve_n(atom_pmf(build_bernoulli_model(sample, theta)), sample.n)


def _weighted_default_rate(sample: PairedSample) -> float:
    _require_prob(sample)
    b_w = sample.obs_mean
    if not 0.0 < b_w < 1.0:
        raise DegenerateMean(f"weighted default rate {b_w} must lie strictly inside (0, 1)")
    return b_w


def exact_pvalues(sample: PairedSample) -> PValuePair:
    b_w = _weighted_default_rate(sample)
    threshold = b_w - sample.pred_mean
    dist = lattice_distribution(sample, b_w)
    p, p_star = dist.tail_probabilities(threshold, THRESHOLD_SNAP)
    return PValuePair(p, p_star, "Expanded variance (exact)", statistic=threshold)


def probability_normal(sample: PairedSample) -> PValuePair:
    b_w = _weighted_default_rate(sample)
    model = build_bernoulli_model(sample, b_w)
    w, b, th = sample.weights, sample.obs, model.theta_i
    brier = math.fsum(w * (b - th) ** 2)
    var = brier + math.fsum(w * th * (1.0 - th))
    if var <= 0.0:
        raise ZeroVariance("expanded variance vanishes")
    z = math.sqrt(sample.n) * (b_w - sample.pred_mean) / math.sqrt(var)
    return PValuePair(
        std_normal_cdf(z),
        std_normal_cdf(-z),
        "Exp var normal",
        statistic=z,
        diagnostics={"weighted_brier": brier},
    )


def simple_mixture_normal(summary: BinomialSummary) -> PValuePair:
    """Normal p-values without variance expansion and with equal weights; variance uses D/N."""
    N, D, PD = summary.N, summary.D, summary.PD
    if D in (0, N):
        raise DegenerateMean("observed default rate 0 or 1 gives zero variance")
    rate = D / N
    z = math.sqrt(N) * (rate - PD) / math.sqrt(rate * (1.0 - rate))
    return PValuePair(std_normal_cdf(z), std_normal_cdf(-z), "Simple mixture normal", statistic=z)


def jeffreys_pvalue(summary: BinomialSummary) -> PValuePair:
    """Posterior CDF of beta(D + 1/2, N - D + 1/2) at the applied PD."""
    p_agg = reg_inc_beta(summary.D + 0.5, summary.N - summary.D + 0.5, summary.PD)
    return PValuePair(1.0 - p_agg, p_agg, "Jeffreys")


def binomial_pvalue(summary: BinomialSummary) -> PValuePair:
    """P[Binomial(N, PD) >= D] via the incomplete beta identity."""
    N, D, PD = summary.N, summary.D, summary.PD
    if D == 0:
        p_agg = 1.0
    elif D == N:
        p_agg = PD**N
    else:
        p_agg = reg_inc_beta(D, N - D + 1, PD)
    return PValuePair(1.0 - p_agg, p_agg, "Binomial")


def binomial_normal(summary: BinomialSummary) -> PValuePair:
    N, PD = summary.N, summary.PD
    z = math.sqrt(N) * (summary.D / N - PD) / math.sqrt(PD * (1.0 - PD))
    return PValuePair(std_normal_cdf(z), std_normal_cdf(-z), "Binomial normal", statistic=z)
