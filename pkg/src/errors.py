"""Exception hierarchy shared by every nlqm-sim package.

Library code raises these; the command layer catches ``NLQMError`` and turns
it into an exit code.
"""


class NLQMError(Exception):
    """Base class for all simulator and analysis errors."""


class EmptySampleError(NLQMError):
    """Raised when a bit sample would be (or is) empty."""


class DomainError(NLQMError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""


class RangeError(NLQMError, ValueError):
    """Raised when a frequency or index falls outside a spectrum."""


class NoSignalError(NLQMError):
    """Raised when a measurement needs a signal well above the noise and finds none."""


class PreconditionError(NLQMError):
    """Raised when measurement inputs violate the assumptions of a solver."""


class PlaneMismatchError(NLQMError):
    """Raised when a spectrum is referred to the wrong reference plane."""


class DegenerateFitError(NLQMError):
    """Raised when a fit cannot be performed on the supplied values."""


class InsufficientDataError(NLQMError):
    """Raised when too few values are available for a statistic."""


class SynchronizationError(NLQMError):
    """Raised when the bit=0 and bit=1 action sequences have different durations."""

    def __init__(self, message: str, delta_s: float = 0.0):
        super().__init__(message)
        self.delta_s = delta_s


class IncompleteRunError(NLQMError):
    """Raised when a run directory or ledger lacks artifacts the analysis needs."""


class BlindingViolationError(NLQMError):
    """Raised when a blinded quantity is about to leave volatile memory."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.field = field


class ConfigError(NLQMError, ValueError):
    """Raised for malformed configuration or calibration files."""
