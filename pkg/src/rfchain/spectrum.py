"""Unaveraged power spectra: synthesis, plane conversion and line-shape measurement."""

import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import DomainError, NoSignalError, RangeError
from .chain import (
    ChainConfig,
    ReferencePlane,
    SwitchState,
    leakage_power,
    noise_floor_psd,
    switch_state_for,
)

logger = logging.getLogger(__name__)

PERTURBATIVE_WARNING = "epsilon > 1 is outside the perturbative regime"


@dataclass(frozen=True)
class RawSpectrum:
    """Per-bin powers in watts on a uniform frequency axis.

    ``f_start_hz`` is the centre frequency of bin 0. The metadata fields
    (``switch_state``, ``seed``, ``bit``, ``epsilon``) describe how the
    spectrum was acquired and are ``None`` when unknown.
    """

    f_start_hz: float
    bin_hz: float
    bins: np.ndarray
    reference_plane: ReferencePlane
    rbw_hz: float
    switch_state: Optional[SwitchState] = None
    seed: Optional[int] = None
    bit: Optional[int] = None
    epsilon: Optional[float] = None
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "reference_plane", ReferencePlane(self.reference_plane))
        object.__setattr__(self, "bins", np.asarray(self.bins, dtype=float))

    @property
    def n_bins(self) -> int:
        return int(self.bins.size)

    @property
    def span_hz(self) -> float:
        return self.n_bins * self.bin_hz

    @property
    def center_hz(self) -> float:
        """Centre frequency of the middle bin, where the source line sits."""
        return self.f_start_hz + (self.n_bins // 2) * self.bin_hz

    def frequencies(self) -> np.ndarray:
        return self.f_start_hz + np.arange(self.n_bins) * self.bin_hz

    def bin_index(self, f_hz: float) -> int:
        """Index of the bin containing ``f_hz``.

        Raises:
            RangeError: If ``f_hz`` lies outside the spectrum.
        """
        index = int(np.floor((f_hz - self.f_start_hz) / self.bin_hz + 0.5))
        if index < 0 or index >= self.n_bins:
            raise RangeError(f"{f_hz} Hz lies outside the spectrum")
        return index

    def total_power(self) -> float:
        return float(np.sum(self.bins))

    def with_bins(self, bins: np.ndarray, plane: Union[ReferencePlane, str]) -> "RawSpectrum":
        return replace(self, bins=bins, reference_plane=ReferencePlane(plane))


@dataclass(frozen=True)
class CalibratedSpectrum(RawSpectrum):
    """A spectrum referred to the HEMT input plane."""

    def __post_init__(self):
        super().__post_init__()
        if self.reference_plane is not ReferencePlane.HEMT_INPUT:
            raise DomainError("a calibrated spectrum is referred to the HEMT input")


def _skirt_slice(cfg: ChainConfig) -> slice:
    width = max(1, int(round(cfg.line_skirt_hz / cfg.rbw_data_hz)))
    start = cfg.center_index - width // 2
    return slice(max(start, 0), min(start + width, cfg.n_bins))


def leakage_profile(cfg: ChainConfig, epsilon: float) -> np.ndarray:
    """Per-bin leakage power at the SA plane.

    The in-band share goes into the bin containing ``f0_hz``; the rest is
    spread evenly over the skirt window, clipped to the span, so the profile
    always sums to the full leakage power.
    """
    profile = np.zeros(cfg.n_bins)
    p_leak_sa = leakage_power(cfg, epsilon) * cfg.sa_over_hemt
    if p_leak_sa == 0.0:
        return profile
    skirt = _skirt_slice(cfg)
    n_skirt = skirt.stop - skirt.start
    profile[skirt] += (1.0 - cfg.inband_fraction) * p_leak_sa / n_skirt
    profile[cfg.center_index] += cfg.inband_fraction * p_leak_sa
    return profile


def synthesize_spectrum(
    cfg: ChainConfig,
    bit: int,
    epsilon: float,
    seed: int,
    include_noise: bool = True,
) -> RawSpectrum:
    """Synthesize one unaveraged spectrum at the SA input.

    Each bin is an independent exponential draw (chi-square with two degrees
    of freedom up to scale) whose mean is the noise floor times the data RBW.
    For ``bit == 0`` and ``epsilon > 0`` the leakage line is added. For
    ``bit == 1`` the source power goes to the HP load and the spectrum is
    noise only. With ``include_noise=False`` every bin holds the noise mean.
    """
    state = switch_state_for(bit)
    if epsilon < 0:
        raise DomainError("epsilon must be >= 0")
    warnings: Tuple[str, ...] = ()
    if epsilon > 1:
        logger.warning("Synthesizing with epsilon=%g: %s", epsilon, PERTURBATIVE_WARNING)
        warnings = (PERTURBATIVE_WARNING,)

    mean_bin = noise_floor_psd(cfg, ReferencePlane.SA_INPUT) * cfg.rbw_data_hz
    if include_noise:
        rng = np.random.Generator(np.random.PCG64(seed))
        bins = rng.exponential(mean_bin, size=cfg.n_bins)
    else:
        bins = np.full(cfg.n_bins, mean_bin)

    if bit == 0 and epsilon > 0:
        bins = bins + leakage_profile(cfg, epsilon)

    return RawSpectrum(
        f_start_hz=cfg.f_start_hz,
        bin_hz=cfg.rbw_data_hz,
        bins=bins,
        reference_plane=ReferencePlane.SA_INPUT,
        rbw_hz=cfg.rbw_data_hz,
        switch_state=state,
        seed=seed,
        bit=bit,
        epsilon=epsilon,
        warnings=warnings,
    )


def convert_plane(
    spectrum: RawSpectrum, cfg: ChainConfig, plane: Union[ReferencePlane, str]
) -> RawSpectrum:
    """Refer a spectrum to another plane using the nominal chain gain and loss."""
    plane = ReferencePlane(plane)
    if plane is spectrum.reference_plane:
        return spectrum
    if plane is ReferencePlane.HEMT_INPUT:
        bins = spectrum.bins / cfg.sa_over_hemt
    else:
        bins = spectrum.bins * cfg.sa_over_hemt
    return RawSpectrum(
        f_start_hz=spectrum.f_start_hz,
        bin_hz=spectrum.bin_hz,
        bins=bins,
        reference_plane=plane,
        rbw_hz=spectrum.rbw_hz,
        switch_state=spectrum.switch_state,
        seed=spectrum.seed,
        bit=spectrum.bit,
        epsilon=spectrum.epsilon,
        warnings=spectrum.warnings,
    )


def _window_bins(bandwidth_hz: float, bin_hz: float) -> int:
    return max(1, int(round(bandwidth_hz / bin_hz)))


def measure_inband_fraction(
    spec: RawSpectrum,
    narrow_bw: float,
    wide_bw: float,
    min_significance: float = 5.0,
    sideband_guard_bins: int = 10,
) -> float:
    """Ratio of the strongest ``narrow_bw`` window to the ``wide_bw`` window around it.

    Raises:
        DomainError: If the bandwidths are not ordered ``narrow <= wide <= span``.
        NoSignalError: If the peak bin does not exceed the sidebands by
            ``min_significance`` standard deviations.
    """
    n_narrow = _window_bins(narrow_bw, spec.bin_hz)
    n_wide = _window_bins(wide_bw, spec.bin_hz)
    if n_narrow > n_wide or n_wide > spec.n_bins:
        raise DomainError("need narrow_bw <= wide_bw <= span")

    bins = spec.bins
    peak = int(np.argmax(bins))
    guard = np.ones(spec.n_bins, dtype=bool)
    guard[max(peak - sideband_guard_bins, 0) : peak + sideband_guard_bins + 1] = False
    sidebands = bins[guard]
    sb_mean = float(np.mean(sidebands))
    sb_sigma = float(np.std(sidebands, ddof=1)) if sidebands.size > 1 else 0.0
    if not (bins[peak] > sb_mean and bins[peak] - sb_mean >= min_significance * sb_sigma):
        raise NoSignalError("no bin exceeds the sidebands by the required significance")

    cumulative = np.concatenate(([0.0], np.cumsum(bins)))
    narrow_sums = cumulative[n_narrow:] - cumulative[:-n_narrow]
    start = int(np.argmax(narrow_sums))
    centre = start + n_narrow // 2

    wide_start = min(max(centre - n_wide // 2, 0), spec.n_bins - n_wide)
    total = cumulative[wide_start + n_wide] - cumulative[wide_start]
    return float(narrow_sums[start] / total)
