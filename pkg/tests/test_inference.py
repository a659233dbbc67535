import numpy as np
import pytest

from circsizer.density import CircularSample, density_deriv, density_deriv_sd
from circsizer.inference import (
    BootstrapConfig,
    CellState,
    bootstrap_sd_regression,
    bootstrap_t_band,
    classify,
    empirical_quantile,
    resample_density,
    resample_pairs,
    substream,
)
from circsizer.kernels import TWO_PI
from circsizer.regression import CircLinearSample, conditional_variance_form, deriv_weights

GRID8 = TWO_PI * np.arange(8) / 8


def test_config_validation():
    with pytest.raises(ValueError):
        BootstrapConfig(alpha=0.6)
    with pytest.raises(ValueError):
        BootstrapConfig(B=1)
    with pytest.raises(ValueError):
        BootstrapConfig(B2=0)
    cfg = BootstrapConfig()
    assert (cfg.alpha, cfg.B, cfg.B2) == (0.05, 500, 250)


def test_substream_determinism_and_independence():
    a = substream(42, 1, 2).integers(0, 1000, 10)
    b = substream(42, 1, 2).integers(0, 1000, 10)
    c = substream(42, 1, 3).integers(0, 1000, 10)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


class TestEmpiricalQuantile:
    def test_boundaries(self):
        vals = [3.0, 1.0, 2.0, 5.0]
        assert empirical_quantile(vals, 0.0) == 1.0
        assert empirical_quantile(vals, 1.0) == 5.0

    def test_midpoint_interpolation(self):
        assert empirical_quantile([1.0, 2.0, 3.0, 4.0], 0.5) == pytest.approx(2.5)

    def test_constant_list(self):
        assert empirical_quantile([2.5] * 7, 0.1) == 2.5
        assert empirical_quantile([2.5] * 7, 0.9) == 2.5

    def test_normal_upper_tail(self):
        draws = substream(7, 0).standard_normal(100_000)
        assert empirical_quantile(draws, 0.975) == pytest.approx(1.96, abs=0.02)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            empirical_quantile([], 0.5)


class TestResampling:
    def test_single_angle_repeats(self):
        s = CircularSample(np.array([1.5]))
        out = resample_density(s, substream(1, 0))
        np.testing.assert_array_equal(out.angles, [1.5])

    def test_fixed_seed_identical(self):
        s = CircularSample(substream(2, 0).uniform(0, TWO_PI, 30))
        r1 = resample_density(s, substream(3, 0))
        r2 = resample_density(s, substream(3, 0))
        np.testing.assert_array_equal(r1.angles, r2.angles)

    def test_outputs_come_from_input(self):
        s = CircularSample(substream(4, 0).uniform(0, TWO_PI, 20))
        out = resample_density(s, substream(5, 0))
        assert set(out.angles) <= set(s.angles)

    def test_first_position_frequency(self):
        s = CircularSample(np.array([0.0, np.pi]))
        rng = substream(6, 0)
        hits = sum(resample_density(s, rng).angles[0] == 0.0 for _ in range(100_000))
        assert hits / 100_000 == pytest.approx(0.5, abs=0.01)

    def test_pairs_kept_intact(self):
        rng = substream(7, 0)
        th = rng.uniform(0, TWO_PI, 25)
        y = rng.standard_normal(25)
        s = CircLinearSample(th, y)
        out = resample_pairs(s, substream(8, 0))
        in_pairs = set(zip(s.angles, s.responses))
        assert set(zip(out.angles, out.responses)) <= in_pairs

    def test_single_pair_repeats(self):
        s = CircLinearSample(np.array([0.2, 0.2]), np.array([1.0, 1.0]))
        out = resample_pairs(s, substream(9, 0))
        np.testing.assert_array_equal(out.angles, [0.2, 0.2])
        np.testing.assert_array_equal(out.responses, [1.0, 1.0])


class TestClassify:
    @pytest.mark.parametrize(
        "lower,upper,ess,expected",
        [
            (0.2, 0.5, 10.0, CellState.INCREASING),
            (-0.5, -0.1, 10.0, CellState.DECREASING),
            (-0.1, 0.2, 10.0, CellState.FLAT),
            (-0.1, 0.2, 4.9, CellState.SPARSE),
            (0.2, 0.5, 4.9, CellState.SPARSE),  # ESS rule dominates
            (0.0, 0.2, 10.0, CellState.FLAT),  # boundary: interval touches 0
            (np.nan, np.nan, 10.0, CellState.SPARSE),  # unclassifiable marker
        ],
    )
    def test_table(self, lower, upper, ess, expected):
        assert classify(lower, upper, ess, 5.0) is expected

    def test_inverted_interval_rejected(self):
        with pytest.raises(ValueError):
            classify(1.0, -1.0, 10.0, 5.0)


class TestBootstrapSdRegression:
    def test_constant_response_gives_zero(self):
        rng = substream(10, 0)
        s = CircLinearSample(rng.uniform(0, TWO_PI, 40), np.full(40, 2.0))
        sd, n_used = bootstrap_sd_regression(s, GRID8, 3.0, 50, substream(11, 0))
        np.testing.assert_allclose(sd, 0.0, atol=1e-14)
        assert np.all(n_used == 50)

    def test_fixed_seed_identical(self):
        rng = substream(12, 0)
        s = CircLinearSample(rng.uniform(0, TWO_PI, 40), rng.standard_normal(40))
        sd1, _ = bootstrap_sd_regression(s, GRID8, 5.0, 60, substream(13, 0))
        sd2, _ = bootstrap_sd_regression(s, GRID8, 5.0, 60, substream(13, 0))
        np.testing.assert_array_equal(sd1, sd2)

    def test_converges_to_conditional_variance_form(self):
        # constant mean + homoskedastic noise: the pair bootstrap targets
        # the same quantity as the closed-form weighted-variance expression
        rng = substream(14, 0)
        n, sigma = 50, 0.8
        th = rng.uniform(0, TWO_PI, n)
        y = 2.0 + sigma * rng.standard_normal(n)
        s = CircLinearSample(th, y)
        theta = np.array([1.0])
        sd, _ = bootstrap_sd_regression(s, theta, 5.0, 5000, substream(15, 0))
        w = deriv_weights(th, 1.0, 5.0)
        closed = np.sqrt(conditional_variance_form(w, np.full(n, sigma**2)))
        assert sd[0] == pytest.approx(closed, rel=0.15)


@pytest.fixture
def dens_sample():
    return CircularSample(substream(20, 0).vonmises(np.pi, 2.0, 80) % TWO_PI)


@pytest.fixture
def reg_sample():
    rng = substream(21, 0)
    th = rng.uniform(0, TWO_PI, 60)
    y = np.sin(th) + 0.5 * rng.standard_normal(60)
    return CircLinearSample(th, y)


class TestBootstrapTBand:
    def test_density_point_estimate_unperturbed(self, dens_sample):
        cfg = BootstrapConfig(B=50, seed=1)
        band = bootstrap_t_band(dens_sample, "density", GRID8, 4.0, cfg)
        np.testing.assert_array_equal(
            band.estimate, density_deriv(dens_sample, GRID8, 4.0)
        )
        np.testing.assert_allclose(
            band.sd, density_deriv_sd(dens_sample, GRID8, 4.0), rtol=1e-12
        )

    def test_lower_below_upper(self, dens_sample, reg_sample):
        cfg = BootstrapConfig(B=40, B2=20, seed=2)
        for data, mode in [(dens_sample, "density"), (reg_sample, "regression")]:
            band = bootstrap_t_band(data, mode, GRID8, 6.0, cfg)
            finite = np.isfinite(band.lower)
            assert np.any(finite)
            assert np.all(band.lower[finite] <= band.upper[finite] + 1e-15)

    def test_determinism(self, reg_sample):
        cfg = BootstrapConfig(B=30, B2=15, seed=3)
        b1 = bootstrap_t_band(reg_sample, "regression", GRID8, 8.0, cfg, nu_index=2)
        b2 = bootstrap_t_band(reg_sample, "regression", GRID8, 8.0, cfg, nu_index=2)
        for name in ("estimate", "sd", "lower", "upper"):
            np.testing.assert_array_equal(getattr(b1, name), getattr(b2, name))

    def test_nu_index_changes_resamples(self, dens_sample):
        cfg = BootstrapConfig(B=30, seed=4)
        b1 = bootstrap_t_band(dens_sample, "density", GRID8, 6.0, cfg, nu_index=0)
        b2 = bootstrap_t_band(dens_sample, "density", GRID8, 6.0, cfg, nu_index=1)
        assert not np.array_equal(b1.lower, b2.lower)

    def test_regression_scaling_equivariance(self, reg_sample):
        cfg = BootstrapConfig(B=40, B2=20, seed=5)
        c = 3.5
        scaled = CircLinearSample(reg_sample.angles, c * reg_sample.responses)
        b1 = bootstrap_t_band(reg_sample, "regression", GRID8, 6.0, cfg)
        b2 = bootstrap_t_band(scaled, "regression", GRID8, 6.0, cfg)
        for name in ("estimate", "sd", "lower", "upper"):
            np.testing.assert_allclose(
                getattr(b2, name), c * getattr(b1, name), rtol=1e-10
            )

    def test_unknown_mode_rejected(self, dens_sample):
        with pytest.raises(ValueError):
            bootstrap_t_band(dens_sample, "spline", GRID8, 2.0, BootstrapConfig(B=10))

    def test_degenerate_sd_marked_unclassifiable(self):
        # every observation identical: derivative sd is 0 everywhere
        s = CircularSample(np.full(10, 1.0))
        band = bootstrap_t_band(s, "density", GRID8, 5.0, BootstrapConfig(B=20, seed=6))
        assert np.all(np.isnan(band.lower))
        assert np.all(np.isnan(band.upper))
