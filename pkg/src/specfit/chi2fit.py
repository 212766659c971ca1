"""Rescaled two-degree-of-freedom chi-square fit of a power histogram.

Powers are histogrammed in ``x = 2 * P / mean(P)``, where thermal noise is
exactly chi-square(2). The model ``A * 1/2 * exp(-(x - x0) / 2)`` depends on
``A`` and ``x0`` only through ``A * exp(x0 / 2)``, so ``A`` is pinned to the
count normalisation ``n * dx`` and ``x0`` is the fitted parameter.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from ..errors import DegenerateFitError, DomainError, InsufficientDataError

MIN_FIT_VALUES = 500
# Pearson terms use only bins whose expected count reaches this.
MIN_EXPECTED_COUNT = 5.0

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chi2Fit:
    amplitude: float
    offset: float
    reduced_gof: float
    n_values: int
    n_bins: int
    bin_width: float
    mean_power: float
    implied_mean: float

    def to_row(self) -> dict:
        return {
            "amplitude": self.amplitude,
            "offset": self.offset,
            "reduced_gof": self.reduced_gof,
            "n_values": self.n_values,
            "n_bins": self.n_bins,
            "implied_mean_w": self.implied_mean,
        }


def chi2_2dof_model(x: np.ndarray, amplitude: float, offset: float) -> np.ndarray:
    return amplitude * 0.5 * np.exp(-(x - offset) / 2.0)


def fit_chi2_2dof(values: Sequence[float]) -> Chi2Fit:
    """Fit per-bin powers with the rescaled chi-square(2) shape.

    Raises:
        InsufficientDataError: If fewer than 500 values are given.
        DegenerateFitError: If all values are equal or their mean is not positive.
    """
    powers = np.asarray(values, dtype=float).ravel()
    if powers.size < MIN_FIT_VALUES:
        raise InsufficientDataError(f"need at least {MIN_FIT_VALUES} values, got {powers.size}")
    if not np.all(np.isfinite(powers)):
        raise DomainError("powers must be finite")
    if np.ptp(powers) == 0:
        raise DegenerateFitError("all values are equal; the histogram has zero width")
    mean_power = float(np.mean(powers))
    if mean_power <= 0:
        raise DegenerateFitError("mean power must be positive")

    x = 2.0 * powers / mean_power
    n = powers.size
    n_bins = math.ceil(math.sqrt(n))
    counts, edges = np.histogram(x, bins=n_bins, range=(min(0.0, float(x.min())), float(x.max())))
    centres = 0.5 * (edges[:-1] + edges[1:])
    dx = float(edges[1] - edges[0])
    amplitude = n * dx

    def model(xv, offset):
        return chi2_2dof_model(xv, amplitude, offset)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OptimizeWarning)
        try:
            popt, _ = curve_fit(model, centres, counts.astype(float), p0=[0.0])
        except RuntimeError as exc:
            raise DegenerateFitError(f"least-squares fit did not converge: {exc}") from exc
    offset = float(popt[0])

    expected = model(centres, offset)
    used = expected >= MIN_EXPECTED_COUNT
    dof = max(int(np.count_nonzero(used)) - 1, 1)
    pearson = float(np.sum((counts[used] - expected[used]) ** 2 / expected[used]))

    fit = Chi2Fit(
        amplitude=amplitude,
        offset=offset,
        reduced_gof=pearson / dof,
        n_values=int(n),
        n_bins=n_bins,
        bin_width=dx,
        mean_power=mean_power,
        implied_mean=mean_power * (2.0 + offset) / 2.0,
    )
    logger.debug("chi2(2) fit: x0=%.4f, reduced GOF=%.3f over %d bins", offset, fit.reduced_gof, n_bins)
    return fit
