"""Classical and simulated-qubit bit generation."""

from .generator import (
    CLASSICAL_PRNG,
    QUBIT_PRNG,
    generate_classical_bits,
    generate_mixed_sample,
    mix_samples,
    simulate_qubit_bits,
    simulate_qubit_shots,
)
from .io import read_bits_csv, seal_values, unseal_values, write_bits_csv
from .models import (
    DEFAULT_FIDELITIES,
    QUANTUM_SOURCES,
    BitRecord,
    BitSource,
    FidelityModel,
    MixedSample,
    QubitShots,
)

__all__ = [
    "CLASSICAL_PRNG",
    "DEFAULT_FIDELITIES",
    "QUANTUM_SOURCES",
    "QUBIT_PRNG",
    "BitRecord",
    "BitSource",
    "FidelityModel",
    "MixedSample",
    "QubitShots",
    "generate_classical_bits",
    "generate_mixed_sample",
    "mix_samples",
    "read_bits_csv",
    "seal_values",
    "simulate_qubit_bits",
    "simulate_qubit_shots",
    "unseal_values",
    "write_bits_csv",
]
