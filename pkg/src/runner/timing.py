"""Per-branch action durations and the branch synchronization check.

Both branches of the control loop must take the same wall time, otherwise
the timestamps of the ledger would reveal which branch ran.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Tuple

from ..errors import ConfigError, DomainError

BIT0_STEPS: Tuple[str, ...] = ("configure_switches", "terminate_input", "acquire_spectrum")
BIT1_STEPS: Tuple[str, ...] = ("configure_switches", "source_on", "dwell", "source_off")

DEFAULT_BIT0_DURATIONS: Dict[str, float] = {
    "configure_switches": 2.0,
    "terminate_input": 0.5,
    "acquire_spectrum": 999.5,
}
DEFAULT_BIT1_DURATIONS: Dict[str, float] = {
    "configure_switches": 2.0,
    "source_on": 0.5,
    "dwell": 999.0,
    "source_off": 0.5,
}

# Relative slack for floating-point sums of otherwise equal totals.
_ROUNDING_SLACK = 1e-12


@dataclass(frozen=True)
class TimingProfile:
    bit0: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_BIT0_DURATIONS))
    bit1: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_BIT1_DURATIONS))
    tolerance_s: float = 0.0

    def __post_init__(self):
        for steps, durations in ((BIT0_STEPS, self.bit0), (BIT1_STEPS, self.bit1)):
            if set(durations) != set(steps):
                raise ConfigError(f"timing steps must be exactly {steps}, got {sorted(durations)}")
            if any(d < 0 for d in durations.values()):
                raise ConfigError("step durations must be >= 0")
        if self.tolerance_s < 0:
            raise ConfigError("tolerance_s must be >= 0")

    def steps(self, bit: int) -> Tuple[Tuple[str, float], ...]:
        if bit == 0:
            return tuple((name, float(self.bit0[name])) for name in BIT0_STEPS)
        if bit == 1:
            return tuple((name, float(self.bit1[name])) for name in BIT1_STEPS)
        raise DomainError(f"bit must be 0 or 1, got {bit!r}")

    def total(self, bit: int) -> float:
        return math.fsum(d for _, d in self.steps(bit))

    def slot_s(self) -> float:
        """Clock advance per bit: the longer branch, whatever the bit value."""
        return max(self.total(0), self.total(1))

    def scaled(self, k: float) -> "TimingProfile":
        if not k > 0:
            raise DomainError("scale factor must be positive")
        return TimingProfile(
            bit0={n: d * k for n, d in self.bit0.items()},
            bit1={n: d * k for n, d in self.bit1.items()},
            tolerance_s=self.tolerance_s * k,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"bit0": dict(self.bit0), "bit1": dict(self.bit1), "tolerance_s": self.tolerance_s}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TimingProfile":
        return cls(
            bit0={k: float(v) for k, v in data["bit0"].items()},
            bit1={k: float(v) for k, v in data["bit1"].items()},
            tolerance_s=float(data.get("tolerance_s", 0.0)),
        )


@dataclass(frozen=True)
class SynchronizationReport:
    delta_s: float
    passed: bool
    total_bit0_s: float
    total_bit1_s: float
    tolerance_s: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta_s": self.delta_s,
            "pass": self.passed,
            "total_bit0_s": self.total_bit0_s,
            "total_bit1_s": self.total_bit1_s,
            "tolerance_s": self.tolerance_s,
        }


def check_branch_synchronization(timing: TimingProfile) -> SynchronizationReport:
    """Compare the total durations of the two branches."""
    total0 = timing.total(0)
    total1 = timing.total(1)
    delta = abs(total0 - total1)
    slack = _ROUNDING_SLACK * max(total0, total1)
    return SynchronizationReport(
        delta_s=delta,
        passed=delta <= timing.tolerance_s + slack,
        total_bit0_s=total0,
        total_bit1_s=total1,
        tolerance_s=timing.tolerance_s,
    )
