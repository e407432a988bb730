"""Monte Carlo oracle: samplers, estimators, reproducibility."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oukernels import HalfSpaceQuery, laplace_mu
from oukernels.errors import (
    BudgetExceededError,
    DomainError,
    InsufficientSamplesError,
)
from oukernels.mc import (
    DensityEstimate,
    ExitSamples,
    McConfig,
    ball_prefactor,
    collect,
    estimate_density,
    estimate_laplace_functional,
    halfspace_prefactor,
    histogram_zscores,
    sample_ball_fk,
    sample_halfspace_fk,
    sample_hyperbolic_sde,
)


def _mean_se(vals):
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size))


class TestConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            McConfig(dt=0.0)
        with pytest.raises(DomainError):
            McConfig(n_paths=0)
        with pytest.raises(DomainError):
            McConfig(on_budget="retry")


class TestHalfspaceSampler:
    CFG = McConfig(dt=1e-3, n_paths=12_000, seed=101, max_steps=1_200_000)

    def test_weights_in_unit_interval(self):
        s = collect(sample_halfspace_fk(3, 1.5, self.CFG))
        assert np.all(s.fk_weight > 0.0)
        assert np.all(s.fk_weight <= 1.0)

    def test_weighted_mass_is_one(self):
        s = collect(sample_halfspace_fk(3, 1.5, self.CFG))
        m, se = s.path_mean(s.fk_weight)
        m *= halfspace_prefactor(3, 1.5)
        se *= halfspace_prefactor(3, 1.5)
        assert abs(m - 1.0) < 3.0 * se + 5e-3  # + step-bias allowance at dt=1e-3

    def test_seed_determinism(self):
        a = collect(sample_halfspace_fk(3, 1.5, self.CFG))
        b = collect(sample_halfspace_fk(3, 1.5, self.CFG))
        assert np.array_equal(a.fk_weight, b.fk_weight)
        assert np.array_equal(a.exit_point, b.exit_point)
        assert np.array_equal(a.exit_time, b.exit_time)

    def test_budget_raise_mode(self):
        cfg = McConfig(dt=1e-3, n_paths=500, seed=1, max_steps=512,
                       on_budget="raise")
        with pytest.raises(BudgetExceededError):
            collect(sample_halfspace_fk(3, 1.5, cfg))

    def test_laplace_functional_matches_transform(self):
        cfg = McConfig(dt=2e-4, n_paths=15_000, seed=11, max_steps=80_000)
        s = collect(sample_halfspace_fk(3, 2.0, cfg))
        m, se = estimate_laplace_functional(s, 1.0, "time")
        ref = laplace_mu(HalfSpaceQuery(3, 2.0, 0.0), 1.0).real
        assert abs(m - ref) < 3.0 * se + 2e-3


class TestHyperbolicSde:
    def test_exits_almost_surely(self):
        cfg = McConfig(dt=1e-4, n_paths=4_000, seed=5, max_steps=200_000)
        s = collect(sample_hyperbolic_sde(3, 1.5, cfg))
        assert s.truncated < 0.01 * 4_000

    def test_start_near_boundary_concentrates(self):
        cfg = McConfig(dt=1e-6, n_paths=2_000, seed=6, max_steps=100_000)
        start = np.array([0.4, -0.2, 1.0 + 1e-3])
        s = collect(sample_hyperbolic_sde(3, start, cfg))
        spread = np.linalg.norm(s.exit_point - start[:2], axis=1)
        assert np.median(spread) < 0.05

    def test_girsanov_equivalence_histograms(self):
        cfg_fk = McConfig(dt=1e-3, n_paths=25_000, seed=21, max_steps=50_000)
        cfg_sde = McConfig(dt=1e-3, n_paths=25_000, seed=22, max_steps=400_000)
        s_fk = collect(sample_halfspace_fk(3, 1.5, cfg_fk))
        s_sde = collect(sample_hyperbolic_sde(3, 1.5, cfg_sde))
        bins = np.linspace(0.0, 6.0, 21)
        z = histogram_zscores(
            estimate_density(s_fk, bins), estimate_density(s_sde, bins)
        )
        assert z.max() < 3.5


class TestBallSampler:
    def test_weighted_mass_hyperbolic(self):
        cfg = McConfig(dt=5e-6, n_paths=15_000, seed=31)
        s = collect(sample_ball_fk(3, 0.5, 0.25, cfg))
        m, se = s.path_mean(s.fk_weight)
        pref = ball_prefactor(3, 0.5, 0.25, "hyperbolic")
        assert abs(m * pref - 1.0) < 3.0 * se * pref + 2e-3

    def test_weighted_mass_ou(self):
        cfg = McConfig(dt=1e-5, n_paths=15_000, seed=32)
        s = collect(sample_ball_fk(3, 1.0, 0.4, cfg, mode=("ou", 0.5)))
        m, se = s.path_mean(s.fk_weight)
        pref = ball_prefactor(3, 1.0, 0.4, "ou", 0.5)
        assert abs(m * pref - 1.0) < 3.0 * se * pref + 3e-3

    def test_radial_clock_laplace_closed_form(self):
        # E exp(-w int ds/R^2) = (r/x)^{nu - sqrt(nu^2 + 2w)}
        cfg = McConfig(dt=2e-5, n_paths=20_000, seed=33)
        s = collect(sample_ball_fk(3, 0.5, 0.25, cfg))
        unit = ExitSamples(
            s.exit_point, s.exit_time, np.ones(s.fk_weight.size), s.aux_clock
        )
        for w in (0.5, 1.0):
            m, se = estimate_laplace_functional(unit, w, "clock")
            ref = 2.0 ** (0.5 - math.sqrt(0.25 + 2.0 * w))
            assert abs(m - ref) < 3.0 * se + 3e-3

    def test_near_critical_clock_window_identity(self):
        # E[exp(nu^2 clock / 2); clock <= Y] = (r/x)^nu erfc(ln(r/x)/sqrt(2Y));
        # the window makes the critical-rate statistic finite-variance
        from scipy.special import erfc

        cfg = McConfig(dt=2e-5, n_paths=20_000, seed=34)
        s = collect(sample_ball_fk(3, 0.5, 0.25, cfg))
        nu, a, cap = 0.5, math.log(2.0), 15.0
        vals = np.exp(0.5 * nu * nu * s.aux_clock) * (s.aux_clock <= cap)
        m, se = s.path_mean(vals)
        ref = 2.0**nu * erfc(a / math.sqrt(2.0 * cap))
        assert abs(m - ref) < 3.0 * se + 3e-3

    def test_uniform_angle_at_center(self):
        cfg = McConfig(dt=2e-5, n_paths=30_000, seed=35)
        s = collect(sample_ball_fk(3, 0.5, 0.003, cfg))
        d = estimate_density(s, np.linspace(-1, 1, 11), weights=np.ones(s.exit_time.size))
        # flat density 1/2 on [-1, 1] within 3 SE per bin
        z = np.abs(d.values - 0.5) / d.std_errors
        assert z.max() < 3.5

    def test_dt_refinement(self):
        m = {}
        for dt in (2e-5, 1e-5):
            cfg = McConfig(dt=dt, n_paths=10_000, seed=36)
            s = collect(sample_ball_fk(3, 0.5, 0.25, cfg))
            m[dt], se = _mean_se(s.fk_weight)
        assert abs(m[2e-5] - m[1e-5]) < 3.0 * se + 2e-3

    def test_mode_validation(self):
        cfg = McConfig(dt=1e-4, n_paths=100)
        with pytest.raises(DomainError):
            collect(sample_ball_fk(3, 0.5, 0.25, cfg, mode=("ou", -1.0)))
        with pytest.raises(DomainError):
            collect(sample_ball_fk(3, 1.5, 0.25, cfg, mode="hyperbolic"))


class TestDensityEstimate:
    def test_flat_for_uniform_samples(self):
        rng = np.random.default_rng(0)
        vals = rng.uniform(0.0, 1.0, 20_000)
        s = ExitSamples(vals, np.zeros_like(vals), np.ones_like(vals),
                        np.zeros_like(vals))
        d = estimate_density(s, np.linspace(0, 1, 11))
        assert np.all(np.abs(d.values - 1.0) < 3.5 * d.std_errors)

    def test_se_scaling_with_paths(self):
        rng = np.random.default_rng(1)

        def se_for(n):
            vals = rng.uniform(0.0, 1.0, n)
            s = ExitSamples(vals, np.zeros_like(vals), np.ones_like(vals),
                            np.zeros_like(vals))
            return estimate_density(s, np.linspace(0, 1, 11)).std_errors.mean()

        ratio = se_for(5_000) / se_for(20_000)
        assert_allclose(ratio, 2.0, rtol=0.25)

    def test_insufficient_samples(self):
        vals = np.linspace(0, 1, 50)
        s = ExitSamples(vals, vals, np.ones_like(vals), vals)
        with pytest.raises(InsufficientSamplesError):
            estimate_density(s, 10)

    def test_requires_matching_bins(self):
        g1 = DensityEstimate(
            grid=np.array([0.5, 1.5]),
            edges=np.array([0.0, 1.0, 2.0]),
            values=np.array([1.0, 1.0]),
            std_errors=np.array([0.1, 0.1]),
        )
        g2 = DensityEstimate(
            grid=np.array([0.25, 0.75]),
            edges=np.array([0.0, 0.5, 1.0]),
            values=np.array([1.0, 1.0]),
            std_errors=np.array([0.1, 0.1]),
        )
        with pytest.raises(DomainError):
            histogram_zscores(g1, g2)

    def test_normalized_to_unit_mass(self):
        rng = np.random.default_rng(2)
        vals = rng.normal(0.0, 1.0, 5_000)
        w = rng.uniform(0.5, 1.5, 5_000)
        s = ExitSamples(vals, vals, w, vals)
        d = estimate_density(s, np.linspace(-4, 4, 33))
        mass = float(np.sum(d.values * np.diff(d.edges)))
        assert_allclose(mass, 1.0, atol=2e-2)
