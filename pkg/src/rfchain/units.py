"""Decibel and dBm conversions.

All functions accept scalars or numpy arrays and return the same kind.
"""

from enum import Enum
from typing import Union

import numpy as np

from ..errors import DomainError

ArrayLike = Union[float, np.ndarray]


class Direction(str, Enum):
    TO_LINEAR = "to_linear"
    TO_DB = "to_db"


def _as_result(value: np.ndarray, like) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value


def db_to_linear(db: ArrayLike) -> ArrayLike:
    return _as_result(np.power(10.0, np.asarray(db, dtype=float) / 10.0), db)


def linear_to_db(ratio: ArrayLike) -> ArrayLike:
    """Return ``10*log10(ratio)``.

    Raises:
        DomainError: If any ratio is not strictly positive.
    """
    arr = np.asarray(ratio, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("decibel conversion needs strictly positive linear values")
    return _as_result(10.0 * np.log10(arr), ratio)


def convert_db(x: ArrayLike, direction: Union[Direction, str]) -> ArrayLike:
    """Convert between dB and a linear power ratio in the given direction."""
    direction = Direction(direction)
    if direction is Direction.TO_LINEAR:
        return db_to_linear(x)
    return linear_to_db(x)


def dbm_to_watts(dbm: ArrayLike) -> ArrayLike:
    return _as_result(1e-3 * np.power(10.0, np.asarray(dbm, dtype=float) / 10.0), dbm)


def watts_to_dbm(watts: ArrayLike) -> ArrayLike:
    arr = np.asarray(watts, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("dBm conversion needs strictly positive power")
    return _as_result(10.0 * np.log10(arr / 1e-3), watts)
