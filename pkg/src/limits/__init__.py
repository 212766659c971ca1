"""Upper limits, correction factors and the quantum-versus-classical gate."""

from .corrections import (
    CorrectionFactors,
    compare_quantum_classical,
    epsilon_limit,
    hadamard_correction,
    readout_correction,
)
from .report import (
    PERMITTED_OUTPUTS,
    REPORT_META_FIELDS,
    DatasetTag,
    LimitReport,
    SigmaMode,
    build_limit_report,
    excess_sigma,
    power_upper_limit,
)
from .truncnorm import truncated_normal_cdf, truncated_normal_ppf

__all__ = [
    "PERMITTED_OUTPUTS",
    "REPORT_META_FIELDS",
    "CorrectionFactors",
    "DatasetTag",
    "LimitReport",
    "SigmaMode",
    "build_limit_report",
    "compare_quantum_classical",
    "epsilon_limit",
    "excess_sigma",
    "hadamard_correction",
    "power_upper_limit",
    "readout_correction",
    "truncated_normal_cdf",
    "truncated_normal_ppf",
]
