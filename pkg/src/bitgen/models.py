"""Value types for bit generation: fidelities, provenance-tagged bits and mixed samples."""

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Tuple

import numpy as np

from ..errors import DomainError


class BitSource(str, Enum):
    """Origin of a bit: the classical PRNG stream or one of the two qubits."""

    CLASSICAL = "classical"
    QUBIT_A = "qubit_a"
    QUBIT_B = "qubit_b"

    @property
    def is_quantum(self) -> bool:
        return self is not BitSource.CLASSICAL


QUANTUM_SOURCES: Tuple[BitSource, ...] = (BitSource.QUBIT_A, BitSource.QUBIT_B)


@dataclass(frozen=True)
class FidelityModel:
    """Scalar fidelities of one qubit channel.

    Attributes:
        f_hadamard: Probability that the H-gate performs correctly.
        f_readout: Classical readout fidelity; the observed value is flipped
            with probability ``1 - f_readout``.
        f_reset: Active reset fidelity. A failed reset leaves the qubit excited,
            which does not change the outcome statistics after the H-gate.
    """

    f_hadamard: float = 0.99
    f_readout: float = 0.983
    f_reset: float = 0.99

    def __post_init__(self):
        for name in ("f_hadamard", "f_readout", "f_reset"):
            value = getattr(self, name)
            if not (0.0 < value <= 1.0):
                raise DomainError(f"{name} must lie in (0, 1], got {value}")

    def p_one_true(self, amplitude_sign: int) -> float:
        """Probability that the qubit is truly found in |1>."""
        p = 0.5 + amplitude_sign * math.sqrt(1.0 - self.f_hadamard)
        return min(max(p, 0.0), 1.0)

    def p_one_observed(self, amplitude_sign: int) -> float:
        """Probability of reading out 1 after the readout flip."""
        p = self.p_one_true(amplitude_sign)
        return p * self.f_readout + (1.0 - p) * (1.0 - self.f_readout)

    def to_dict(self) -> Dict[str, float]:
        return {
            "f_hadamard": self.f_hadamard,
            "f_readout": self.f_readout,
            "f_reset": self.f_reset,
        }


DEFAULT_FIDELITIES: Dict[BitSource, FidelityModel] = {
    BitSource.QUBIT_A: FidelityModel(f_hadamard=0.99, f_readout=0.983, f_reset=0.99),
    BitSource.QUBIT_B: FidelityModel(f_hadamard=0.99, f_readout=0.861, f_reset=0.99),
}


@dataclass(frozen=True)
class BitRecord:
    """One bit with its provenance.

    ``origin`` is the position of the bit inside the sample it was drawn in,
    so a record stays traceable after mixing reassigns ``id``.
    """

    id: int
    source: BitSource
    value: int
    origin: int = 0

    def __post_init__(self):
        if self.id < 0:
            raise DomainError(f"bit id must be >= 0, got {self.id}")
        if self.value not in (0, 1):
            raise DomainError(f"bit value must be 0 or 1, got {self.value}")
        if not isinstance(self.source, BitSource):
            object.__setattr__(self, "source", BitSource(self.source))


@dataclass(frozen=True)
class QubitShots:
    """Full (unblinded) record of a simulated qubit run."""

    true_values: np.ndarray
    observed_values: np.ndarray
    reset_failures: np.ndarray
    amplitude_sign: int

    @property
    def n(self) -> int:
        return int(self.observed_values.size)

    @property
    def flip_fraction(self) -> float:
        return float(np.mean(self.true_values != self.observed_values))


@dataclass
class MixedSample:
    """Bits from all sources in one randomly interleaved order.

    Attributes:
        bits: Records with ids ``0..N-1`` in mixed order.
        provenance_seed: Seed that produced the interleaving.
        counts: Number of bits per source name.
        amplitude_signs: H-gate imperfection sign fixed for each qubit run.
        prng: Generator algorithm per source name.
    """

    bits: List[BitRecord]
    provenance_seed: int
    counts: Dict[str, int] = field(default_factory=dict)
    amplitude_signs: Dict[str, int] = field(default_factory=dict)
    prng: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.counts:
            self.counts = dict(Counter(b.source.value for b in self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[BitRecord]:
        return iter(self.bits)

    def by_source(self, source: BitSource) -> List[BitRecord]:
        return [b for b in self.bits if b.source is source]

    def value_multiset(self) -> Counter:
        """Tally of ``(source, value)`` pairs."""
        return Counter((b.source.value, b.value) for b in self.bits)
