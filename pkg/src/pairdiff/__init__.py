"""Paired-difference tests for back-testing predictions (LGD, CCF, EAD, PD) against observations."""

from .basic import PValuePair, TestConfig, Weighting, basic_bootstrap, basic_normal, t_test
from .interval import (
    BetaMixtureModel,
    build_beta_model,
    estimate_v_unit,
    interval_bootstrap,
    interval_normal,
    model_moments_unit,
)
from .nonneg import (
    GammaMixtureModel,
    build_gamma_model,
    estimate_v_gamma,
    model_moments_gamma,
    nonneg_bootstrap,
    nonneg_normal,
)
from .probability import (
    BernoulliMixtureModel,
    BinomialSummary,
    atom_pmf,
    binomial_normal,
    binomial_pvalue,
    build_bernoulli_model,
    exact_pvalues,
    jeffreys_pvalue,
    lattice_distribution,
    model_moments_prob,
    probability_normal,
    simple_mixture_normal,
)
from .recalibration import RecalibratedTargets, linear_scale, odds_rho, odds_transform, power_transform
from .report import RunConfig, ReportDocument, bundled_dataset, load_csv, render_report, run_suite
from .sample import (
    Kind,
    PairedSample,
    SampleSummary,
    normalize_weights,
    summarize,
    weight_adjust,
    weighted_mean,
    weighted_variance,
)

__version__ = "0.1.0"
