"""Signal-region power and sideband background statistics."""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..errors import InsufficientDataError
from ..rfchain.spectrum import RawSpectrum

MIN_SIDEBAND_BINS = 100
DEFAULT_EXCLUDE_HALFWIDTH_HZ = 0.01


@dataclass(frozen=True)
class SidebandStats:
    mean: float
    sigma: float
    n_bins: int
    excluded_region: Tuple[float, float]


@dataclass(frozen=True)
class SignalRegionMeasurement:
    """Signal-bin power with the background estimate of the same spectrum."""

    p_s_w: float
    sideband_mean_w: float
    sideband_sigma_w: float
    n_sideband_bins: int

    @property
    def excess_w(self) -> float:
        return self.p_s_w - self.sideband_mean_w

    def to_row(self) -> Dict[str, float]:
        return {
            "p_s_w": self.p_s_w,
            "sideband_mean_w": self.sideband_mean_w,
            "sideband_sigma_w": self.sideband_sigma_w,
            "excess_w": self.excess_w,
        }


def signal_region_power(spec: RawSpectrum, f0: float) -> float:
    """Power in the single bin containing ``f0``.

    Raises:
        RangeError: If ``f0`` is outside the spectrum.
    """
    return float(spec.bins[spec.bin_index(f0)])


def sideband_stats(
    spec: RawSpectrum,
    exclude_halfwidth: float = DEFAULT_EXCLUDE_HALFWIDTH_HZ,
    f0: Optional[float] = None,
) -> SidebandStats:
    """Mean and sample standard deviation of the bins outside ``f0 +/- exclude_halfwidth``.

    ``f0`` defaults to the centre of the spectrum.

    Raises:
        InsufficientDataError: If fewer than 100 bins remain.
    """
    f0 = spec.center_hz if f0 is None else f0
    centre = spec.bin_index(f0)
    half = int(round(exclude_halfwidth / spec.bin_hz))
    mask = np.ones(spec.n_bins, dtype=bool)
    mask[max(centre - half, 0) : centre + half + 1] = False
    sidebands = spec.bins[mask]
    if sidebands.size < MIN_SIDEBAND_BINS:
        raise InsufficientDataError(
            f"only {sidebands.size} sideband bins remain; need {MIN_SIDEBAND_BINS}"
        )
    return SidebandStats(
        mean=float(np.mean(sidebands)),
        sigma=float(np.std(sidebands, ddof=1)),
        n_bins=int(sidebands.size),
        excluded_region=(f0 - exclude_halfwidth, f0 + exclude_halfwidth),
    )


def measure_signal_region(
    spec: RawSpectrum,
    f0: Optional[float] = None,
    exclude_halfwidth: float = DEFAULT_EXCLUDE_HALFWIDTH_HZ,
) -> SignalRegionMeasurement:
    f0 = spec.center_hz if f0 is None else f0
    stats = sideband_stats(spec, exclude_halfwidth, f0)
    return SignalRegionMeasurement(
        p_s_w=signal_region_power(spec, f0),
        sideband_mean_w=stats.mean,
        sideband_sigma_w=stats.sigma,
        n_sideband_bins=stats.n_bins,
    )
