"""Fidelity and bandwidth corrections, the epsilon conversion and the 5 sigma gate."""

import math
from dataclasses import dataclass
from typing import Dict

from ..errors import DomainError


def readout_correction(f_c: float) -> float:
    """Readout-fidelity correction ``1/sqrt(f_c)``."""
    if not (0.0 < f_c <= 1.0):
        raise DomainError(f"f_c must lie in (0, 1], got {f_c}")
    return 1.0 / math.sqrt(f_c)


def hadamard_correction(f_h: float) -> float:
    """H-gate correction ``1 / (2 * (1/2 - sqrt(1 - f_h)))``.

    Raises:
        DomainError: If ``f_h <= 0.75`` (the correction diverges) or ``f_h > 1``.
    """
    if not (0.75 < f_h <= 1.0):
        raise DomainError(f"f_h must lie in (0.75, 1], got {f_h}")
    return 1.0 / (2.0 * (0.5 - math.sqrt(1.0 - f_h)))


def epsilon_limit(
    p_m: float,
    p_applied: float,
    f_bandwidth: float,
    f_readout: float,
    f_hadamard: float,
) -> float:
    """Convert a power limit into a limit on epsilon.

    ``eps = 2 * sqrt(p_m / (p_applied * f_bandwidth)) * f_readout * f_hadamard``
    where ``f_bandwidth`` is the fraction of the line inside the signal bin
    and the last two arguments are the correction factors.
    """
    for name, value in (
        ("p_m", p_m),
        ("p_applied", p_applied),
        ("f_bandwidth", f_bandwidth),
        ("f_readout", f_readout),
        ("f_hadamard", f_hadamard),
    ):
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")
    if f_bandwidth > 1.0:
        raise DomainError("f_bandwidth is a fraction and cannot exceed 1")
    return 2.0 * math.sqrt(p_m / (p_applied * f_bandwidth)) * f_readout * f_hadamard


def compare_quantum_classical(
    q_mean: float, c_mean: float, c_sigma: float, k: float = 5.0
) -> bool:
    """True when the quantum mean lies strictly above ``c_mean + k * c_sigma``."""
    if c_sigma < 0:
        raise DomainError("c_sigma must be >= 0")
    return q_mean > c_mean + k * c_sigma


@dataclass(frozen=True)
class CorrectionFactors:
    """Multiplicative corrections entering the epsilon limit.

    ``bandwidth_fraction`` is the share of the line inside the signal bin;
    the matching factor on epsilon is ``1/sqrt(bandwidth_fraction)``.
    """

    bandwidth_fraction: float = 1.0
    readout: float = 1.0
    hadamard: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.bandwidth_fraction <= 1.0):
            raise DomainError("bandwidth_fraction must lie in (0, 1]")
        if self.readout < 1.0 or self.hadamard < 1.0:
            raise DomainError("correction factors must be >= 1")

    @classmethod
    def from_fidelities(
        cls, bandwidth_fraction: float, f_c: float = 1.0, f_h: float = 1.0
    ) -> "CorrectionFactors":
        return cls(
            bandwidth_fraction=bandwidth_fraction,
            readout=readout_correction(f_c),
            hadamard=hadamard_correction(f_h),
        )

    @property
    def bandwidth(self) -> float:
        return 1.0 / math.sqrt(self.bandwidth_fraction)

    def epsilon(self, p_m: float, p_applied: float) -> float:
        return epsilon_limit(p_m, p_applied, self.bandwidth_fraction, self.readout, self.hadamard)

    def to_dict(self) -> Dict[str, float]:
        return {
            "f_bandwidth": self.bandwidth,
            "f_readout": self.readout,
            "f_hadamard": self.hadamard,
            "bandwidth_fraction": self.bandwidth_fraction,
        }
