"""Classical and simulated-qubit bit generation, and sample mixing.

Classical bits come from a Mersenne Twister stream (the algorithm behind the
standard-library ``random`` module); qubit shots and the mixing permutation
use PCG64. Every function is a pure function of its inputs and seed.
"""

import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..errors import DomainError, EmptySampleError
from ..utils.seeding import (
    STREAM_CLASSICAL,
    STREAM_MIX,
    STREAM_QUBIT_A,
    STREAM_QUBIT_B,
    derive_seed,
)
from .models import (
    DEFAULT_FIDELITIES,
    BitRecord,
    BitSource,
    FidelityModel,
    MixedSample,
    QubitShots,
)

CLASSICAL_PRNG = "MT19937"
QUBIT_PRNG = "PCG64"

logger = logging.getLogger(__name__)


def generate_classical_bits(n: int, seed: int) -> List[BitRecord]:
    """Draw ``n`` fair classical bits.

    Raises:
        EmptySampleError: If ``n`` is less than 1.
    """
    if n < 1:
        raise EmptySampleError("classical sample needs at least one bit")
    rng = np.random.Generator(np.random.MT19937(seed))
    values = rng.integers(0, 2, size=n, dtype=np.int8)
    return [
        BitRecord(id=i, source=BitSource.CLASSICAL, value=int(v), origin=i)
        for i, v in enumerate(values)
    ]


def simulate_qubit_shots(n: int, model: FidelityModel, seed: int) -> QubitShots:
    """Simulate ``n`` reset / H-gate / readout cycles of one qubit.

    The sign of the H-gate amplitude error is drawn once per run. Reset
    failures are drawn and reported but leave the outcome probabilities
    unchanged, since the H-gate maps |1> to an equal superposition as well.
    """
    if n < 1:
        raise EmptySampleError("qubit sample needs at least one shot")
    rng = np.random.Generator(np.random.PCG64(seed))
    sign = 1 if rng.random() < 0.5 else -1
    reset_failures = rng.random(n) < (1.0 - model.f_reset)
    true_values = (rng.random(n) < model.p_one_true(sign)).astype(np.int8)
    flips = rng.random(n) < (1.0 - model.f_readout)
    observed = np.where(flips, 1 - true_values, true_values).astype(np.int8)
    return QubitShots(
        true_values=true_values,
        observed_values=observed,
        reset_failures=reset_failures,
        amplitude_sign=sign,
    )


def simulate_qubit_bits(
    n: int,
    model: FidelityModel,
    seed: int,
    source: BitSource = BitSource.QUBIT_A,
) -> List[BitRecord]:
    """Simulate ``n`` qubit bits and keep only the observed values."""
    if not source.is_quantum:
        raise DomainError(f"{source.value} is not a qubit source")
    shots = simulate_qubit_shots(n, model, seed)
    return [
        BitRecord(id=i, source=source, value=int(v), origin=i)
        for i, v in enumerate(shots.observed_values)
    ]


def mix_samples(samples: Sequence[Sequence[BitRecord]], seed: int) -> MixedSample:
    """Interleave several samples in a uniformly random order.

    A random permutation of per-bit source labels decides which sample the
    next bit is taken from, so every sample keeps its internal order and no
    value is altered. Ids are reassigned ``0..N-1`` in mixed order.

    Raises:
        EmptySampleError: If every input sample is empty.
    """
    non_empty = [list(s) for s in samples if len(s) > 0]
    if not non_empty:
        raise EmptySampleError("nothing to mix: all samples are empty")

    labels = np.concatenate([np.full(len(s), i, dtype=np.int64) for i, s in enumerate(non_empty)])
    order = np.random.Generator(np.random.PCG64(seed)).permutation(labels)

    cursors = [0] * len(non_empty)
    bits: List[BitRecord] = []
    for new_id, label in enumerate(order):
        record = non_empty[label][cursors[label]]
        cursors[label] += 1
        bits.append(replace(record, id=new_id))

    return MixedSample(bits=bits, provenance_seed=seed)


def generate_mixed_sample(
    n_classical: int,
    n_qubit_a: int,
    n_qubit_b: int,
    seed: int,
    fidelities: Optional[Dict[BitSource, FidelityModel]] = None,
) -> MixedSample:
    """Generate all three source samples from one master seed and mix them.

    Each source draws from its own substream of ``seed`` so changing one
    count never changes the bits of another source.
    """
    fidelities = {**DEFAULT_FIDELITIES, **(fidelities or {})}
    samples: List[List[BitRecord]] = []
    signs: Dict[str, int] = {}

    if n_classical > 0:
        samples.append(generate_classical_bits(n_classical, derive_seed(seed, STREAM_CLASSICAL)))

    for source, stream, n in (
        (BitSource.QUBIT_A, STREAM_QUBIT_A, n_qubit_a),
        (BitSource.QUBIT_B, STREAM_QUBIT_B, n_qubit_b),
    ):
        if n <= 0:
            continue
        shots = simulate_qubit_shots(n, fidelities[source], derive_seed(seed, stream))
        signs[source.value] = shots.amplitude_sign
        samples.append(
            [
                BitRecord(id=i, source=source, value=int(v), origin=i)
                for i, v in enumerate(shots.observed_values)
            ]
        )

    sample = mix_samples(samples, derive_seed(seed, STREAM_MIX))
    sample.provenance_seed = seed
    sample.amplitude_signs = signs
    sample.prng = {
        BitSource.CLASSICAL.value: CLASSICAL_PRNG,
        BitSource.QUBIT_A.value: QUBIT_PRNG,
        BitSource.QUBIT_B.value: QUBIT_PRNG,
        "mix": QUBIT_PRNG,
    }
    logger.debug("Generated mixed sample of %d bits: %s", len(sample), sample.counts)
    return sample
