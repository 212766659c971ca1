"""Tests for sideband statistics, signal-region power and the chi-square(2) fit."""

from dataclasses import replace

import numpy as np
import pytest

from src.errors import DegenerateFitError, InsufficientDataError, RangeError
from src.rfchain import ChainConfig, ReferencePlane, noise_floor_psd, synthesize_spectrum
from src.rfchain.spectrum import RawSpectrum
from src.specfit import (
    MIN_FIT_VALUES,
    chi2_2dof_model,
    fit_chi2_2dof,
    measure_signal_region,
    sideband_stats,
    signal_region_power,
)


def flat_spectrum(n_bins: int, level: float = 1.0, bin_hz: float = 1e-3) -> RawSpectrum:
    return RawSpectrum(
        f_start_hz=0.0,
        bin_hz=bin_hz,
        bins=np.full(n_bins, level),
        reference_plane=ReferencePlane.SA_INPUT,
        rbw_hz=bin_hz,
    )


class TestSignalRegion:
    def test_single_bin_power(self):
        spec = flat_spectrum(1000)
        spec.bins[500] = 7.0
        assert signal_region_power(spec, spec.center_hz) == 7.0

    def test_outside_spectrum(self):
        spec = flat_spectrum(1000)
        with pytest.raises(RangeError):
            signal_region_power(spec, 5.0)

    def test_measurement_excess(self):
        bins = np.tile([1.0, 3.0], 500)
        bins[500] = 12.0
        spec = RawSpectrum(0.0, 1e-3, bins, ReferencePlane.SA_INPUT, 1e-3)
        meas = measure_signal_region(spec)
        assert meas.p_s_w == 12.0
        # the excluded 21 bins hold eleven 1s and ten 3s
        assert meas.sideband_mean_w == pytest.approx(1959 / 979)
        assert meas.excess_w == pytest.approx(12.0 - 1959 / 979)
        assert meas.n_sideband_bins == 1000 - 21
        assert set(meas.to_row()) == {"p_s_w", "sideband_mean_w", "sideband_sigma_w", "excess_w"}


class TestSidebands:
    def test_excludes_window_around_f0(self):
        spec = flat_spectrum(1000)
        spec.bins[490:511] = 100.0
        stats = sideband_stats(spec, exclude_halfwidth=0.01)
        assert stats.mean == pytest.approx(1.0)
        assert stats.sigma == pytest.approx(0.0)
        assert stats.n_bins == 979
        low, high = stats.excluded_region
        assert high - low == pytest.approx(0.02)

    def test_sample_standard_deviation(self):
        bins = np.tile([1.0, 3.0], 500)
        spec = RawSpectrum(0.0, 1e-3, bins, ReferencePlane.SA_INPUT, 1e-3)
        stats = sideband_stats(spec, exclude_halfwidth=0.0)
        assert stats.sigma == pytest.approx(np.std(np.delete(bins, 500), ddof=1))

    def test_invariant_under_sideband_permutation(self, chain):
        spec = synthesize_spectrum(chain, 0, 0.0, seed=21)
        stats = sideband_stats(spec)
        centre = spec.bin_index(spec.center_hz)
        outside = np.r_[0 : centre - 50, centre + 51 : spec.n_bins]
        shuffled = spec.bins.copy()
        shuffled[outside] = np.random.default_rng(5).permutation(spec.bins[outside])
        moved = sideband_stats(replace(spec, bins=shuffled))
        assert moved.mean == pytest.approx(stats.mean, rel=1e-12)
        assert moved.sigma == pytest.approx(stats.sigma, rel=1e-12)
        assert moved.n_bins == stats.n_bins

    def test_invariant_under_excluded_content(self, chain):
        spec = synthesize_spectrum(chain, 0, 0.0, seed=22)
        stats = sideband_stats(spec)
        centre = spec.bin_index(spec.center_hz)
        bumped = spec.bins.copy()
        bumped[centre - 9 : centre + 10] += np.random.default_rng(6).exponential(1e-15, size=19)
        after = sideband_stats(replace(spec, bins=bumped))
        assert after.mean == stats.mean
        assert after.sigma == stats.sigma

    def test_too_few_bins(self):
        with pytest.raises(InsufficientDataError):
            sideband_stats(flat_spectrum(120), exclude_halfwidth=0.02)

    def test_noise_spectrum(self, chain):
        spec = synthesize_spectrum(chain, 1, 0.0, seed=12)
        mean_bin = noise_floor_psd(chain, ReferencePlane.SA_INPUT) * chain.rbw_data_hz
        stats = sideband_stats(spec)
        # exponential bins: sd equals mean, sample mean within ~3% over 979 bins
        assert stats.mean == pytest.approx(mean_bin, rel=0.15)
        assert stats.sigma == pytest.approx(mean_bin, rel=0.2)


class TestChi2Fit:
    def test_model_shape(self):
        x = np.array([0.0, 2.0])
        np.testing.assert_allclose(chi2_2dof_model(x, 10.0, 0.0), [5.0, 5.0 * np.exp(-1.0)])

    def test_recovers_mean_of_noise_spectrum(self):
        cfg = ChainConfig(span_hz=100.0)
        spec = synthesize_spectrum(cfg, 0, 0.0, seed=99)
        mean_bin = noise_floor_psd(cfg, ReferencePlane.SA_INPUT) * cfg.rbw_data_hz
        fit = fit_chi2_2dof(spec.bins)
        assert fit.n_values == 100_000
        assert fit.n_bins == 317
        assert fit.implied_mean == pytest.approx(mean_bin, rel=0.03)
        assert abs(fit.offset) < 0.1
        assert fit.reduced_gof < 2.0

    def test_scale_free(self):
        rng = np.random.default_rng(3)
        values = rng.exponential(1.0, size=5000)
        small = fit_chi2_2dof(values * 1e-25)
        assert small.offset == pytest.approx(fit_chi2_2dof(values).offset, abs=1e-6)

    def test_row_has_implied_mean(self):
        rng = np.random.default_rng(4)
        row = fit_chi2_2dof(rng.exponential(2.0, size=MIN_FIT_VALUES)).to_row()
        assert row["n_values"] == MIN_FIT_VALUES
        assert row["implied_mean_w"] > 0

    def test_too_few_values(self):
        with pytest.raises(InsufficientDataError):
            fit_chi2_2dof(np.ones(MIN_FIT_VALUES - 1))

    def test_equal_values_are_degenerate(self):
        with pytest.raises(DegenerateFitError):
            fit_chi2_2dof(np.full(1000, 3.0))

    def test_non_positive_mean_is_degenerate(self):
        values = np.linspace(-2.0, 1.0, 1000)
        with pytest.raises(DegenerateFitError):
            fit_chi2_2dof(values)
