"""Spectrum statistics: signal region, sidebands and the chi-square(2) fit."""

from .chi2fit import MIN_FIT_VALUES, Chi2Fit, chi2_2dof_model, fit_chi2_2dof
from .sidebands import (
    DEFAULT_EXCLUDE_HALFWIDTH_HZ,
    MIN_SIDEBAND_BINS,
    SidebandStats,
    SignalRegionMeasurement,
    measure_signal_region,
    sideband_stats,
    signal_region_power,
)

__all__ = [
    "DEFAULT_EXCLUDE_HALFWIDTH_HZ",
    "MIN_FIT_VALUES",
    "MIN_SIDEBAND_BINS",
    "Chi2Fit",
    "SidebandStats",
    "SignalRegionMeasurement",
    "chi2_2dof_model",
    "fit_chi2_2dof",
    "measure_signal_region",
    "sideband_stats",
    "signal_region_power",
]
