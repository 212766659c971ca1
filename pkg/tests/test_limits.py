"""Tests for the truncated normal, the correction factors and the limit report."""

import math

import numpy as np
import pytest
from scipy.integrate import cumulative_trapezoid

from src.errors import DomainError, InsufficientDataError
from src.limits import (
    PERMITTED_OUTPUTS,
    REPORT_META_FIELDS,
    CorrectionFactors,
    DatasetTag,
    LimitReport,
    SigmaMode,
    build_limit_report,
    compare_quantum_classical,
    epsilon_limit,
    excess_sigma,
    hadamard_correction,
    power_upper_limit,
    readout_correction,
    truncated_normal_cdf,
    truncated_normal_ppf,
)

ORACLE_QUANTILES = (0.01, 0.1, 0.5, 0.9, 0.99)


def numerical_ppf(q: float, mu: float, sigma: float) -> float:
    """Invert the truncated normal by integrating its density on a fine grid."""
    upper = max(mu, 0.0) + 12.0 * sigma
    x = np.linspace(0.0, upper, 200_001)
    density = np.exp(-0.5 * ((x - mu) / sigma) ** 2)
    cdf = cumulative_trapezoid(density, x, initial=0.0)
    cdf /= cdf[-1]
    return float(np.interp(q, cdf, x))


class TestTruncatedNormal:
    @pytest.mark.parametrize("mu", np.linspace(-5.0, 20.0, 26))
    def test_matches_numerical_inversion(self, mu):
        for q in ORACLE_QUANTILES:
            assert truncated_normal_ppf(q, mu, 1.0) == pytest.approx(
                numerical_ppf(q, mu, 1.0), abs=1e-6
            )

    def test_untruncated_limit(self):
        # far above the cut the truncation is invisible
        assert truncated_normal_ppf(0.9, 50.0, 1.0) == pytest.approx(50.0 + 1.2815515655, abs=1e-8)

    def test_centred_at_zero(self):
        # half-normal: 90% quantile is the 95% quantile of the full normal
        assert truncated_normal_ppf(0.9, 0.0, 2.0) == pytest.approx(2.0 * 1.6448536270, rel=1e-9)

    def test_far_truncated_stays_finite(self):
        x = truncated_normal_ppf(0.9, -30.0, 1.0)
        assert 0.0 < x < 0.1
        assert truncated_normal_cdf(x, -30.0, 1.0) == pytest.approx(0.9, rel=1e-6)

    def test_cdf_inverts_ppf(self):
        for mu in (-3.0, 0.5, 7.0):
            for q in ORACLE_QUANTILES:
                x = truncated_normal_ppf(q, mu, 1.5)
                assert truncated_normal_cdf(x, mu, 1.5) == pytest.approx(q, abs=1e-10)

    def test_cdf_below_cut_is_zero(self):
        assert truncated_normal_cdf(-1.0, 0.0, 1.0) == 0.0

    def test_monotonic_in_q_and_mu(self):
        qs = np.linspace(0.01, 0.99, 50)
        values = [truncated_normal_ppf(q, 0.3, 1.0) for q in qs]
        assert all(b > a for a, b in zip(values, values[1:]))
        mus = np.linspace(-5.0, 5.0, 50)
        values = [truncated_normal_ppf(0.9, mu, 1.0) for mu in mus]
        assert all(b > a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("q", [0.0, 1.0, -0.5, float("nan")])
    def test_bad_quantile(self, q):
        with pytest.raises(DomainError):
            truncated_normal_ppf(q, 0.0, 1.0)

    def test_bad_sigma(self):
        with pytest.raises(DomainError):
            truncated_normal_ppf(0.5, 0.0, 0.0)


class TestCorrections:
    def test_readout(self):
        assert round(readout_correction(0.861), 2) == 1.08
        assert readout_correction(1.0) == 1.0

    def test_hadamard(self):
        assert round(hadamard_correction(0.99), 3) == 1.25
        assert hadamard_correction(1.0) == 1.0
        assert hadamard_correction(0.9999) == pytest.approx(1.0204, abs=1e-4)

    @pytest.mark.parametrize("f_h", [0.75, 0.5, 1.01])
    def test_hadamard_domain(self, f_h):
        with pytest.raises(DomainError):
            hadamard_correction(f_h)

    @pytest.mark.parametrize("f_c", [0.0, -0.2, 1.5])
    def test_readout_domain(self, f_c):
        with pytest.raises(DomainError):
            readout_correction(f_c)

    def test_keystone_chain(self):
        eps = epsilon_limit(6.97e-25, 7.45, 0.856, 1 / math.sqrt(0.861), 1.25)
        assert eps == pytest.approx(8.93e-13, rel=0.01)

    def test_uncorrected(self):
        assert epsilon_limit(6.97e-25, 7.45, 1.0, 1.0, 1.0) == pytest.approx(6.12e-13, rel=1e-3)

    def test_monotone_over_random_inputs(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            p_m = 10 ** rng.uniform(-28, -20)
            p_a = rng.uniform(0.1, 100.0)
            f_bw = rng.uniform(0.05, 0.9)
            f_r, f_h = rng.uniform(1.0, 2.0, size=2)
            k = 1.0 + rng.uniform(0.01, 0.5)
            base = epsilon_limit(p_m, p_a, f_bw, f_r, f_h)
            assert epsilon_limit(p_m * k, p_a, f_bw, f_r, f_h) > base
            assert epsilon_limit(p_m, p_a, f_bw, f_r * k, f_h) > base
            assert epsilon_limit(p_m, p_a, f_bw, f_r, f_h * k) > base
            assert epsilon_limit(p_m, p_a * k, f_bw, f_r, f_h) < base
            assert epsilon_limit(p_m, p_a, min(f_bw * k, 1.0), f_r, f_h) < base

    def test_epsilon_domain(self):
        with pytest.raises(DomainError):
            epsilon_limit(0.0, 7.45, 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            epsilon_limit(1e-25, 7.45, 1.2, 1.0, 1.0)

    def test_factors_from_fidelities(self):
        factors = CorrectionFactors.from_fidelities(0.856, f_c=0.861, f_h=0.99)
        assert factors.bandwidth == pytest.approx(1 / math.sqrt(0.856))
        assert factors.epsilon(6.97e-25, 7.45) == pytest.approx(8.93e-13, rel=0.01)
        assert set(factors.to_dict()) == {
            "f_bandwidth",
            "f_readout",
            "f_hadamard",
            "bandwidth_fraction",
        }

    def test_factors_below_one_rejected(self):
        with pytest.raises(DomainError):
            CorrectionFactors(readout=0.9)
        with pytest.raises(DomainError):
            CorrectionFactors(bandwidth_fraction=0.0)


class TestGate:
    def test_boundary_is_strict(self):
        assert not compare_quantum_classical(5.0, 0.0, 1.0)
        assert compare_quantum_classical(5.000001, 0.0, 1.0)

    def test_custom_k(self):
        assert compare_quantum_classical(3.5, 0.0, 1.0, k=3.0)

    def test_negative_sigma(self):
        with pytest.raises(DomainError):
            compare_quantum_classical(1.0, 0.0, -1.0)


class TestPowerUpperLimit:
    def test_sigma_modes(self):
        values = [1.0, 2.0, 3.0, 4.0]
        spread = np.std(values, ddof=1)
        assert excess_sigma(values, SigmaMode.SPREAD) == pytest.approx(spread)
        assert excess_sigma(values, "sem") == pytest.approx(spread / 2.0)

    def test_well_above_zero_is_gaussian(self):
        values = np.array([10.0, 10.5, 9.5, 10.2, 9.8])
        sem = np.std(values, ddof=1) / math.sqrt(values.size)
        assert power_upper_limit(values, 0.9) == pytest.approx(
            values.mean() + 1.2815515655 * sem, rel=1e-9
        )

    def test_negative_mean_gives_small_positive_limit(self):
        limit = power_upper_limit([-3.0, -2.0, -2.5, -1.5], 0.9)
        assert 0.0 < limit < 0.5

    def test_spread_is_wider_than_sem(self):
        values = np.random.default_rng(1).normal(0.0, 1.0, 10)
        assert power_upper_limit(values, 0.9, "spread") > power_upper_limit(values, 0.9, "sem")

    def test_zero_spread(self):
        assert power_upper_limit([2.0, 2.0, 2.0], 0.9) == 2.0
        assert power_upper_limit([-2.0, -2.0], 0.9) == 0.0

    def test_needs_two_values(self):
        with pytest.raises(InsufficientDataError):
            power_upper_limit([1.0], 0.9)

    @pytest.mark.parametrize("cl", [0.0, 1.0, 1.2])
    def test_bad_cl(self, cl):
        with pytest.raises(DomainError):
            power_upper_limit([1.0, 2.0], cl)

    @pytest.mark.parametrize("sigma_mode", ["sem", "spread"])
    def test_shift_moves_limit_by_at_most_delta(self, sigma_mode):
        rng = np.random.default_rng(23)
        for _ in range(100):
            size = int(rng.integers(2, 31))
            values = rng.normal(rng.uniform(-1.0, 2.0), rng.uniform(0.2, 2.0), size=size)
            delta = rng.uniform(0.01, 3.0)
            base = power_upper_limit(values, 0.9, sigma_mode)
            shifted = power_upper_limit(values + delta, 0.9, sigma_mode)
            assert base - 1e-9 <= shifted <= base + delta + 1e-9

    def test_coverage_of_gaussian_excesses(self):
        rng = np.random.default_rng(90)
        true_mean = 1.0
        covered = sum(
            power_upper_limit(rng.normal(true_mean, 1.0, 50), 0.9) >= true_mean
            for _ in range(2000)
        )
        assert 0.87 <= covered / 2000 <= 0.925


class TestLimitReport:
    def _report(self, **overrides):
        values = dict(
            excesses=[1e-25, -2e-25, 3e-25, 5e-26],
            cl=0.9,
            p_applied_w=7.45,
            corrections=CorrectionFactors.from_fidelities(0.856, 0.861, 0.99),
            dataset_tag="quantum",
        )
        values.update(overrides)
        return build_limit_report(**values)

    def test_fields(self):
        report = self._report()
        assert report.dataset_tag is DatasetTag.QUANTUM
        assert report.n_measurements == 4
        assert report.sigma_mode is SigmaMode.SEM
        assert report.epsilon_limit == pytest.approx(
            report.corrections.epsilon(report.p_m_w, 7.45)
        )
        assert report.to_dict()["dataset_tag"] == "quantum"

    def test_blinded_dict_drops_power(self):
        blinded = self._report(excess_detected=True).blinded_dict()
        assert "p_m_w" not in blinded
        assert "n_measurements" not in blinded
        assert set(blinded) <= PERMITTED_OUTPUTS | REPORT_META_FIELDS
        assert blinded["excess_detected"] is True

    def test_invariants(self):
        report = self._report()
        with pytest.raises(DomainError):
            LimitReport(**{**report.__dict__, "cl": 1.0})
        with pytest.raises(DomainError):
            LimitReport(**{**report.__dict__, "epsilon_limit": 0.0})
