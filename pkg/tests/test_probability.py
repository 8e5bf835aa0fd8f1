import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import stats

import oracles
from pairdiff.errors import DegenerateMean, DomainError
from pairdiff.probability import (
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
from pairdiff.sample import Kind, PairedSample, normalize_weights


def pd_sample(b, p, w=None):
    b, p = np.asarray(b, float), np.asarray(p, float)
    w = np.full(b.size, 1 / b.size) if w is None else np.asarray(w, float)
    return PairedSample(b, p, w, Kind.PROBABILITY)


@st.composite
def pd_instance(draw, min_size=2, max_size=12):
    n = draw(st.integers(min_size, max_size))
    b = draw(st.lists(st.sampled_from([0.0, 1.0]), min_size=n, max_size=n))
    assume(0 < sum(b) < n)
    p = draw(st.lists(st.floats(0.02, 0.9), min_size=n, max_size=n))
    w = normalize_weights(draw(st.lists(st.floats(0.05, 20), min_size=n, max_size=n)))
    return pd_sample(b, p, w)


class TestBinomialFamily:
    def test_summary_validation(self):
        with pytest.raises(DomainError):
            BinomialSummary(10, 11, 0.1)
        with pytest.raises(DomainError):
            BinomialSummary(10, 2, 0.0)

    def test_simple_mixture_oracle(self):
        res = simple_mixture_normal(BinomialSummary(100, 20, 0.15))
        assert res.statistic == pytest.approx(1.25, abs=1e-14)
        assert res.p_aggressive == pytest.approx(0.10564977366685526, abs=1e-13)

    def test_simple_mixture_degenerate(self):
        with pytest.raises(DegenerateMean):
            simple_mixture_normal(BinomialSummary(10, 0, 0.1))

    def test_binomial_normal_oracle(self):
        res = binomial_normal(BinomialSummary(100, 20, 0.15))
        assert res.statistic == pytest.approx(1.4002800840280098, abs=1e-13)
        assert res.p_aggressive == pytest.approx(0.08071473118354159, abs=1e-13)

    def test_jeffreys_oracle(self):
        # beta(1/2, 3/2) CDF at 1/2 = 1/2 + 1/pi
        res = jeffreys_pvalue(BinomialSummary(1, 0, 0.5))
        assert res.p_aggressive == pytest.approx(0.5 + 1 / math.pi, abs=1e-14)
        assert res.p_prudent == pytest.approx(0.5 - 1 / math.pi, abs=1e-14)

    def test_jeffreys_matches_beta_cdf(self):
        for N, D, PD in [(50, 3, 0.04), (200, 11, 0.05), (1000, 400, 0.38)]:
            ref = stats.beta.cdf(PD, D + 0.5, N - D + 0.5)
            assert jeffreys_pvalue(BinomialSummary(N, D, PD)).p_aggressive == pytest.approx(ref, abs=1e-12)

    def test_binomial_oracle(self):
        assert binomial_pvalue(BinomialSummary(20, 5, 0.1)).p_aggressive == pytest.approx(
            0.043174495284463384, abs=1e-14
        )

    def test_single_default(self):
        assert binomial_pvalue(BinomialSummary(1, 1, 0.3)).p_aggressive == pytest.approx(0.3, abs=1e-15)

    def test_balanced_binomial_normal(self):
        assert binomial_normal(BinomialSummary(40, 4, 0.1)).p_aggressive == pytest.approx(0.5, abs=1e-12)

    def test_jeffreys_limits(self):
        assert jeffreys_pvalue(BinomialSummary(30, 3, 1 - 1e-12)).p_aggressive == pytest.approx(1.0, abs=1e-9)
        assert jeffreys_pvalue(BinomialSummary(30, 30, 0.01)).p_aggressive < 1e-40

    def test_binomial_edges(self):
        assert binomial_pvalue(BinomialSummary(7, 0, 0.3)).p_aggressive == 1.0
        assert binomial_pvalue(BinomialSummary(7, 7, 0.3)).p_aggressive == pytest.approx(0.3**7, rel=1e-15)

    @given(st.integers(1, 30).flatmap(lambda N: st.tuples(st.just(N), st.integers(1, N))), st.floats(0.01, 0.99))
    def test_binomial_tail_identity(self, ND, PD):
        N, D = ND
        got = binomial_pvalue(BinomialSummary(N, D, PD)).p_aggressive
        assert got == pytest.approx(oracles.binomial_upper_tail(N, D, PD), abs=1e-12)


class TestBernoulliModel:
    def test_atoms_sum_to_one(self):
        s = pd_sample([1, 0, 0, 1], [0.1, 0.2, 0.05, 0.4], [0.1, 0.2, 0.3, 0.4])
        atoms = atom_pmf(build_bernoulli_model(s, s.obs_mean))
        assert sum(atoms) == pytest.approx(1.0, abs=1e-15)
        expected = oracles.single_draw_atoms(s.obs, s.pred, s.weights, s.obs_mean)
        np.testing.assert_allclose(atoms, expected, atol=1e-13)

    def test_monte_carlo_moments(self):
        rng = np.random.default_rng(5)
        n = 40
        p = rng.uniform(0.02, 0.3, size=n)
        b = (rng.random(n) < p).astype(float)
        b[0] = 1.0
        s = pd_sample(b, p, normalize_weights(rng.lognormal(size=n)))
        m = build_bernoulli_model(s, 0.12)
        mu, var = model_moments_prob(m, 0.12)
        x = m.draw(np.random.default_rng(6), 200_000)
        assert abs(x.mean() - mu) < 4 * math.sqrt(var / x.size)
        assert x.var() == pytest.approx(var, rel=0.02)

    @given(pd_instance())
    def test_lattice_mean_and_variance(self, s):
        theta = s.obs_mean
        dist = lattice_distribution(s, theta)
        mu, var = model_moments_prob(build_bernoulli_model(s, theta), theta)
        x = dist.support
        assert math.fsum(dist.pmf) == pytest.approx(1.0, abs=1e-12)
        assert math.fsum(dist.pmf * x) == pytest.approx(mu, abs=1e-12)
        m2 = math.fsum(dist.pmf * (x - mu) ** 2)
        assert m2 == pytest.approx(var / s.n, abs=1e-12)

    @given(pd_instance(max_size=20), st.floats(0.05, 0.9), st.floats(0.05, 0.9))
    def test_cdf_ordering_in_target(self, s, t1, t2):
        # a larger target makes defaults more likely, so b - Y is stochastically smaller
        assume(abs(t1 - t2) > 1e-6)
        lo, hi = sorted((t1, t2))
        cdf_lo = lattice_distribution(s, lo).cdf()
        cdf_hi = lattice_distribution(s, hi).cdf()
        assert np.all(cdf_lo <= cdf_hi + 1e-12)


class TestExactPValues:
    @given(pd_instance(max_size=9))
    def test_matches_enumeration(self, s):
        res = exact_pvalues(s)
        lo, up = oracles.enumerated_pvalues(s.obs, s.pred, s.weights)
        assert res.p_prudent == pytest.approx(lo, abs=1e-12)
        assert res.p_aggressive == pytest.approx(up, abs=1e-12)

    def test_degenerate_default_rate(self):
        with pytest.raises(DegenerateMean):
            exact_pvalues(pd_sample([0, 0, 0], [0.1, 0.2, 0.3]))

    @given(pd_instance(max_size=30))
    def test_tails_overlap_by_threshold_atom(self, s):
        res = exact_pvalues(s)
        dist = lattice_distribution(s, s.obs_mean)
        on = np.abs(dist.support - res.statistic) <= 1e-12
        assert res.p_prudent + res.p_aggressive - dist.pmf[on].sum() == pytest.approx(1.0, abs=1e-12)

    def test_tie_counts_both_sides(self):
        # homogeneous PDs equal to the default rate: threshold 0 is a lattice point
        res = exact_pvalues(pd_sample([1, 0, 0, 0], [0.25] * 4))
        assert res.p_prudent + res.p_aggressive > 1.0

    def test_close_to_normal_for_large_n(self):
        rng = np.random.default_rng(30)
        n = 600
        p = rng.uniform(0.1, 0.5, size=n)
        b = (rng.random(n) < 0.95 * p).astype(float)
        s = pd_sample(b, p, normalize_weights(rng.uniform(0.5, 2, size=n)))
        ex, no = exact_pvalues(s), probability_normal(s)
        assert ex.p_prudent == pytest.approx(no.p_prudent, abs=0.02)
        assert ex.p_aggressive == pytest.approx(no.p_aggressive, abs=0.02)
        assert no.diagnostics["weighted_brier"] > 0
