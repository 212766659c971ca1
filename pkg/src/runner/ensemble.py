"""Monte Carlo studies over many simulated datasets.

``classical_limit_ensemble`` repeats the classical limit exercise on fresh
noise to show the scale and coverage of the power limit;
``signal_recovery_rate`` measures how often the quantum-versus-classical
gate fires with and without an injected leakage line.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from ..calibration.hemt import CalibrationSolution, calibrate_spectrum, solution_for_chain
from ..errors import DomainError
from ..limits.corrections import compare_quantum_classical
from ..limits.report import SigmaMode, excess_sigma, power_upper_limit
from ..limits.truncnorm import truncated_normal_ppf
from ..rfchain.chain import (
    ChainConfig,
    ReferencePlane,
    epsilon_for_excess,
    leakage_power,
    noise_floor_psd,
)
from ..rfchain.spectrum import synthesize_spectrum
from ..specfit.sidebands import DEFAULT_EXCLUDE_HALFWIDTH_HZ, measure_signal_region
from ..utils.console import create_progress
from ..utils.seeding import STREAM_SPECTRUM, derive_seed

# Second key under a realization: which set a spectrum belongs to.
ROLE_CLASSICAL = 0
ROLE_SIGNAL = 1
ROLE_NULL = 2

logger = logging.getLogger(__name__)


def _excesses(
    cfg: ChainConfig,
    sol: CalibrationSolution,
    epsilon: float,
    n: int,
    seed: int,
    keys: Tuple[int, ...],
    exclude_halfwidth_hz: float,
) -> np.ndarray:
    values = []
    for i in range(n):
        raw = synthesize_spectrum(cfg, 0, epsilon, derive_seed(seed, STREAM_SPECTRUM, *keys, i))
        meas = measure_signal_region(calibrate_spectrum(raw, sol), cfg.f0_hz, exclude_halfwidth_hz)
        values.append(meas.excess_w)
    return np.asarray(values)


@dataclass(frozen=True)
class LimitEnsemble:
    """Power limits of repeated classical datasets.

    ``analytic_w`` is the limit a dataset with zero mean excess and the
    nominal standard error would give; ``coverage`` is the fraction of
    limits at or above ``true_excess_w``.
    """

    limits_w: np.ndarray
    median_w: float
    analytic_w: float
    true_excess_w: float
    coverage: float
    n_bits: int
    cl: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_repetitions": int(self.limits_w.size),
            "n_bits": self.n_bits,
            "cl": self.cl,
            "median_w": self.median_w,
            "analytic_w": self.analytic_w,
            "true_excess_w": self.true_excess_w,
            "coverage": self.coverage,
        }


def classical_limit_ensemble(
    cfg: ChainConfig,
    n_repetitions: int = 100,
    n_bits: int = 10,
    cl: float = 0.90,
    seed: int = 0,
    sigma_mode: Union[SigmaMode, str] = SigmaMode.SEM,
    epsilon: float = 0.0,
    exclude_halfwidth_hz: float = DEFAULT_EXCLUDE_HALFWIDTH_HZ,
    show_progress: bool = False,
) -> LimitEnsemble:
    """Set a power limit on ``n_repetitions`` independent classical datasets.

    With ``epsilon > 0`` the leakage line is injected into every spectrum,
    so ``coverage`` tests the limit against a known non-zero excess.

    Raises:
        DomainError: If fewer than one repetition or two bits are requested.
    """
    if n_repetitions < 1 or n_bits < 2:
        raise DomainError("need at least one repetition of at least two bits")
    sol = solution_for_chain(cfg)
    limits: List[float] = []
    with create_progress(disable=not show_progress) as progress:
        task = progress.add_task("Classical datasets", total=n_repetitions)
        for r in range(n_repetitions):
            excess = _excesses(cfg, sol, epsilon, n_bits, seed, (r,), exclude_halfwidth_hz)
            limits.append(power_upper_limit(excess, cl, sigma_mode))
            progress.update(task, advance=1)

    bin_sigma = noise_floor_psd(cfg, ReferencePlane.HEMT_INPUT) * cfg.rbw_data_hz
    nominal_sigma = bin_sigma
    if SigmaMode(sigma_mode) is SigmaMode.SEM:
        nominal_sigma = bin_sigma / math.sqrt(n_bits)
    true_excess = cfg.inband_fraction * leakage_power(cfg, epsilon)
    values = np.asarray(limits)
    ensemble = LimitEnsemble(
        limits_w=values,
        median_w=float(np.median(values)),
        analytic_w=truncated_normal_ppf(cl, 0.0, nominal_sigma),
        true_excess_w=true_excess,
        coverage=float(np.mean(values >= true_excess)),
        n_bits=n_bits,
        cl=cl,
    )
    logger.info(
        "Limit ensemble: median %.4g W over %d datasets (analytic %.4g W), coverage %.3f",
        ensemble.median_w,
        n_repetitions,
        ensemble.analytic_w,
        ensemble.coverage,
    )
    return ensemble


@dataclass(frozen=True)
class RecoveryResult:
    """Gate outcomes with an injected line (``detections``) and without (``false_triggers``)."""

    detections: int
    false_triggers: int
    n_realizations: int
    epsilon: float
    mean_excess_sigma: float

    @property
    def efficiency(self) -> float:
        return self.detections / self.n_realizations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "detections": self.detections,
            "false_triggers": self.false_triggers,
            "n_realizations": self.n_realizations,
            "epsilon": self.epsilon,
            "mean_excess_sigma": self.mean_excess_sigma,
            "efficiency": self.efficiency,
        }


def signal_recovery_rate(
    cfg: ChainConfig,
    n_realizations: int = 100,
    n_classical: int = 30,
    n_quantum: int = 10,
    excess_sigma_target: float = 10.0,
    k_sigma: float = 5.0,
    seed: int = 0,
    exclude_halfwidth_hz: float = DEFAULT_EXCLUDE_HALFWIDTH_HZ,
    show_progress: bool = False,
) -> RecoveryResult:
    """Run the gate on simulated datasets with and without a leakage line.

    The line is sized so that the f0 bin exceeds the sidebands by
    ``excess_sigma_target`` single-bin noise standard deviations. Each
    realization draws one classical control set, one quantum set with the
    line and one without.
    """
    if n_realizations < 1 or n_classical < 2 or n_quantum < 1:
        raise DomainError("need one realization, two classical and one quantum spectrum")
    sol = solution_for_chain(cfg)
    # An exponential bin has standard deviation equal to its mean.
    bin_sigma_sa = noise_floor_psd(cfg, ReferencePlane.SA_INPUT) * cfg.rbw_data_hz
    epsilon = epsilon_for_excess(cfg, excess_sigma_target * bin_sigma_sa)

    detections = 0
    false_triggers = 0
    significances: List[float] = []
    with create_progress(disable=not show_progress) as progress:
        task = progress.add_task("Gate realizations", total=n_realizations)
        for r in range(n_realizations):
            exclude = exclude_halfwidth_hz
            classical = _excesses(cfg, sol, 0.0, n_classical, seed, (r, ROLE_CLASSICAL), exclude)
            signal = _excesses(cfg, sol, epsilon, n_quantum, seed, (r, ROLE_SIGNAL), exclude)
            null = _excesses(cfg, sol, 0.0, n_quantum, seed, (r, ROLE_NULL), exclude)
            c_mean = float(np.mean(classical))
            c_spread = excess_sigma(classical, SigmaMode.SPREAD)
            detections += compare_quantum_classical(float(np.mean(signal)), c_mean, c_spread, k_sigma)
            false_triggers += compare_quantum_classical(float(np.mean(null)), c_mean, c_spread, k_sigma)
            significances.append((float(np.mean(signal)) - c_mean) / c_spread)
            progress.update(task, advance=1)

    result = RecoveryResult(
        detections=int(detections),
        false_triggers=int(false_triggers),
        n_realizations=n_realizations,
        epsilon=epsilon,
        mean_excess_sigma=float(np.mean(significances)),
    )
    logger.info(
        "Gate fired on %d/%d injected and %d/%d null realizations (epsilon=%.3g)",
        result.detections,
        n_realizations,
        result.false_triggers,
        n_realizations,
        epsilon,
    )
    return result
