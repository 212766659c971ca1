"""Seed derivation for reproducible, schedule-independent random streams.

Every random draw in the simulator comes from a numpy ``Generator`` whose
seed is derived from a master seed plus integer keys through
``numpy.random.SeedSequence``. Two calls with the same keys always produce the
same stream regardless of how many other streams were drawn in between.
"""

from typing import Tuple

import numpy as np

# Stream labels used as the first key under a master seed.
STREAM_CLASSICAL = 1
STREAM_QUBIT_A = 2
STREAM_QUBIT_B = 3
STREAM_MIX = 4
STREAM_SPECTRUM = 5

PRNG_ALGORITHMS: Tuple[str, str] = ("MT19937", "PCG64")


def _entropy(seed: int, keys: Tuple[int, ...]) -> list:
    if seed < 0 or any(k < 0 for k in keys):
        raise ValueError("seeds and stream keys must be non-negative")
    return [int(seed), *[int(k) for k in keys]]


def derive_seed(seed: int, *keys: int) -> int:
    """Return a 63-bit integer seed for the substream ``(seed, *keys)``."""
    ss = np.random.SeedSequence(_entropy(seed, keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Return a PCG64 generator for the substream ``(seed, *keys)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_entropy(seed, keys))))
