"""Power upper limits and the limit report."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Sequence, Union

import numpy as np

from ..errors import DomainError, InsufficientDataError
from .corrections import CorrectionFactors
from .truncnorm import truncated_normal_ppf

logger = logging.getLogger(__name__)


class DatasetTag(str, Enum):
    CLASSICAL = "classical"
    QUANTUM = "quantum"


class SigmaMode(str, Enum):
    """Width of the normal used for the limit: standard error or per-bit spread."""

    SEM = "sem"
    SPREAD = "spread"


# Fields of a quantum report that may leave memory under blinding.
PERMITTED_OUTPUTS = frozenset({"excess_detected", "epsilon_limit"})
# Settings that carry no information about quantum data.
REPORT_META_FIELDS = frozenset({"cl", "corrections", "p_applied_w", "dataset_tag", "sigma_mode"})


def excess_sigma(excesses: Sequence[float], sigma_mode: Union[SigmaMode, str] = SigmaMode.SEM) -> float:
    values = np.asarray(excesses, dtype=float)
    spread = float(np.std(values, ddof=1))
    if SigmaMode(sigma_mode) is SigmaMode.SEM:
        return spread / math.sqrt(values.size)
    return spread


def power_upper_limit(
    excesses: Sequence[float],
    cl: float,
    sigma_mode: Union[SigmaMode, str] = SigmaMode.SEM,
) -> float:
    """Upper limit on the mean excess power at confidence ``cl``.

    The quantile of a normal centred on the mean excess and truncated at
    zero; its width is the standard error of the mean by default.

    Raises:
        InsufficientDataError: If fewer than two excesses are given.
        DomainError: If ``cl`` is outside (0, 1).
    """
    values = np.asarray(excesses, dtype=float)
    if values.size < 2:
        raise InsufficientDataError("a power limit needs at least two measurements")
    if not (0.0 < cl < 1.0):
        raise DomainError(f"cl must lie in (0, 1), got {cl}")
    mu = float(np.mean(values))
    sigma = excess_sigma(values, sigma_mode)
    if sigma == 0.0:
        return max(mu, 0.0)
    return truncated_normal_ppf(cl, mu, sigma, lower=0.0)


@dataclass(frozen=True)
class LimitReport:
    p_m_w: float
    cl: float
    corrections: CorrectionFactors
    p_applied_w: float
    epsilon_limit: float
    excess_detected: bool
    dataset_tag: DatasetTag
    n_measurements: int
    sigma_mode: SigmaMode = SigmaMode.SEM

    def __post_init__(self):
        if not (0.0 < self.cl < 1.0):
            raise DomainError("cl must lie in (0, 1)")
        if not self.epsilon_limit > 0:
            raise DomainError("epsilon_limit must be positive")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_m_w": self.p_m_w,
            "cl": self.cl,
            "corrections": self.corrections.to_dict(),
            "p_applied_w": self.p_applied_w,
            "epsilon_limit": self.epsilon_limit,
            "excess_detected": self.excess_detected,
            "dataset_tag": self.dataset_tag.value,
            "n_measurements": self.n_measurements,
            "sigma_mode": self.sigma_mode.value,
        }

    def blinded_dict(self) -> Dict[str, Any]:
        """Only the permitted outputs and the settings that produced them."""
        allowed = PERMITTED_OUTPUTS | REPORT_META_FIELDS
        return {k: v for k, v in self.to_dict().items() if k in allowed}


def build_limit_report(
    excesses: Sequence[float],
    cl: float,
    p_applied_w: float,
    corrections: CorrectionFactors,
    dataset_tag: Union[DatasetTag, str],
    sigma_mode: Union[SigmaMode, str] = SigmaMode.SEM,
    excess_detected: bool = False,
) -> LimitReport:
    p_m = power_upper_limit(excesses, cl, sigma_mode)
    return LimitReport(
        p_m_w=p_m,
        cl=cl,
        corrections=corrections,
        p_applied_w=p_applied_w,
        epsilon_limit=corrections.epsilon(p_m, p_applied_w),
        excess_detected=excess_detected,
        dataset_tag=DatasetTag(dataset_tag),
        n_measurements=len(excesses),
        sigma_mode=SigmaMode(sigma_mode),
    )
