import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from pairdiff.basic import TestConfig
from pairdiff.errors import DegenerateMean, DegenerateV, DomainError
from pairdiff.interval import (
    build_beta_model,
    estimate_v_unit,
    interval_bootstrap,
    interval_normal,
    model_moments_unit,
)
from pairdiff.sample import Kind, PairedSample, normalize_weights


def unit_sample(obs, pred, w=None):
    obs, pred = np.asarray(obs, float), np.asarray(pred, float)
    w = np.full(obs.size, 1 / obs.size) if w is None else np.asarray(w, float)
    return PairedSample(obs, pred, w, Kind.UNIT_INTERVAL)


def synthetic_lgd(rng, n, shift=0.0):
    pred = rng.uniform(0.1, 0.7, size=n)
    mean = np.clip(pred + shift, 0.02, 0.98)
    obs = rng.beta(2 * mean, 2 * (1 - mean))
    w = normalize_weights(rng.lognormal(0, 1, size=n))
    return unit_sample(obs, pred, w)


@st.composite
def unit_instance(draw, max_size=25):
    n = draw(st.integers(2, max_size))
    obs = draw(st.lists(st.floats(0, 1), min_size=n, max_size=n))
    pred = draw(st.lists(st.floats(0.01, 0.99), min_size=n, max_size=n))
    w = normalize_weights(draw(st.lists(st.floats(1e-2, 1e2), min_size=n, max_size=n)))
    return unit_sample(obs, pred, w)


class TestDispersion:
    @pytest.mark.parametrize(
        "obs, expected",
        [([0.0, 1.0], 1.0), ([0.2, 0.4], 0.01 / 0.21), ([0.3, 0.3, 0.3], 0.0)],
    )
    def test_examples(self, obs, expected):
        w = np.full(len(obs), 1 / len(obs))
        assert estimate_v_unit(obs, w) == pytest.approx(expected, abs=1e-14)

    def test_degenerate_mean(self):
        with pytest.raises(DegenerateMean):
            estimate_v_unit([0.0, 0.0], [0.5, 0.5])

    @given(unit_instance())
    def test_in_unit_interval(self, s):
        assume(0 < s.obs_mean < 1)
        assert 0.0 <= estimate_v_unit(s.obs, s.weights) <= 1.0


class TestBetaModel:
    def test_parameters(self):
        s = unit_sample([0.1, 0.5], [0.3, 0.4])
        m = build_beta_model(s, 0.1, 0.3)
        # beta(alpha, beta) has mean theta_i and variance v theta_i (1 - theta_i)
        mean = m.alpha / (m.alpha + m.beta)
        var = m.alpha * m.beta / ((m.alpha + m.beta) ** 2 * (m.alpha + m.beta + 1))
        np.testing.assert_allclose(mean, m.theta_i, rtol=1e-14)
        np.testing.assert_allclose(var, 0.1 * m.theta_i * (1 - m.theta_i), rtol=1e-13)

    @pytest.mark.parametrize("v", [0.0, 1.0, -0.2, 1.3])
    def test_bad_v(self, v):
        with pytest.raises(DegenerateV):
            build_beta_model(unit_sample([0.1, 0.5], [0.3, 0.4]), v, 0.3)

    def test_wrong_kind(self):
        s = PairedSample(np.array([1.0, 2.0]), np.array([1.5, 1.5]), np.array([0.5, 0.5]), Kind.NON_NEGATIVE)
        with pytest.raises(DomainError):
            interval_normal(s, 0.1)

    def test_monte_carlo_moments(self):
        s = synthetic_lgd(np.random.default_rng(4), 30)
        m = build_beta_model(s, 0.2, 0.35)
        mu, var = model_moments_unit(m, 0.35)
        x = m.draw(np.random.default_rng(9), 200_000)
        se = math.sqrt(var / x.size)
        assert abs(x.mean() - mu) < 4 * se
        assert x.var() == pytest.approx(var, rel=0.02)

    def test_draws_within_unit_band(self):
        s = synthetic_lgd(np.random.default_rng(8), 50)
        x = build_beta_model(s, 0.6, 0.3).draw(np.random.default_rng(1), 100_000)
        assert np.all((x >= -1) & (x <= 1))

    def test_simulated_cdf_ordered_in_target(self):
        # common random numbers across targets; larger target shifts obs - Y to the left
        s = synthetic_lgd(np.random.default_rng(11), 15)
        reps, n = 100_000, s.n
        grid = np.linspace(-0.6, 0.6, 49)
        cdfs = []
        for theta in (0.2, 0.35, 0.5):
            x = build_beta_model(s, 0.3, theta).draw(np.random.default_rng(77), reps * n)
            means = x.reshape(reps, n).mean(axis=1)
            cdfs.append((means[:, None] <= grid).mean(axis=0))
        se = np.sqrt(0.25 / reps)
        for lo, hi in zip(cdfs, cdfs[1:]):
            assert np.all(lo <= hi + 4 * se)

    @given(unit_instance(), st.floats(0.01, 0.99))
    def test_moment_at_mean_matches_normal_variance(self, s, v):
        assume(0.01 < s.obs_mean < 0.99)
        m = build_beta_model(s, v, s.obs_mean)
        mu, var = model_moments_unit(m, s.obs_mean)
        direct = math.fsum(s.weights * (s.obs - m.theta_i) ** 2) + v * math.fsum(
            s.weights * m.theta_i * (1 - m.theta_i)
        )
        assert mu == 0.0
        assert var == pytest.approx(direct, rel=1e-12, abs=1e-15)


class TestIntervalTests:
    def test_normal_oracle(self):
        res = interval_normal(unit_sample([0.1, 0.5], [0.3, 0.4]), 0.1)
        assert res.statistic == pytest.approx(-0.33893325851552910, abs=1e-13)
        assert res.p_prudent == pytest.approx(0.36733000454842384, abs=1e-13)
        assert res.p_aggressive == pytest.approx(0.63266999545157616, abs=1e-13)

    def test_balanced_sample_gives_one_half(self):
        res = interval_normal(unit_sample([0.2, 0.4], [0.25, 0.35]), 0.3)
        assert res.p_prudent == pytest.approx(0.5, abs=1e-15)
        assert res.p_prudent + res.p_aggressive == pytest.approx(1.0, abs=1e-15)

    def test_bootstrap_close_to_normal(self):
        s = synthetic_lgd(np.random.default_rng(17), 300, shift=0.03)
        v = estimate_v_unit(s.obs, s.weights)
        boot = interval_bootstrap(s, TestConfig(R=1999, seed=2), v)
        norm = interval_normal(s, v)
        assert boot.p_prudent == pytest.approx(norm.p_prudent, abs=0.03)
        assert boot.p_aggressive == pytest.approx(norm.p_aggressive, abs=0.03)

    def test_bootstrap_deterministic(self):
        s = synthetic_lgd(np.random.default_rng(1), 40)
        cfg = TestConfig(R=199, seed=8)
        assert interval_bootstrap(s, cfg, 0.3) == interval_bootstrap(s, cfg, 0.3)

    def test_larger_v_is_less_decisive(self):
        # expanding the variance pulls both p-values towards 1/2
        s = synthetic_lgd(np.random.default_rng(6), 200, shift=-0.08)
        a, b = interval_normal(s, 0.05), interval_normal(s, 0.5)
        assert a.p_prudent < b.p_prudent < 0.5

    def test_degenerate_mean(self):
        with pytest.raises(DegenerateMean):
            interval_normal(unit_sample([0.0, 0.0], [0.3, 0.4]), 0.1)
