"""Error policies, HEMT calibration and referral of spectra to the HEMT input."""

from .hemt import (
    CalibrationSolution,
    GeneratorMeasurement,
    ThermalMeasurement,
    calibrate_spectrum,
    simulate_generator_measurement,
    simulate_thermal_measurement,
    solution_for_chain,
    solve_hemt_calibration,
)
from .policies import (
    CABLE_POLICY,
    HP_GAIN_POLICY,
    CableDirection,
    ErrorPolicy,
    PolicyApplication,
    Sidedness,
    applied_power,
    apply_cable_policy,
    effective_hp_gain,
)

__all__ = [
    "CABLE_POLICY",
    "HP_GAIN_POLICY",
    "CableDirection",
    "CalibrationSolution",
    "ErrorPolicy",
    "GeneratorMeasurement",
    "PolicyApplication",
    "Sidedness",
    "ThermalMeasurement",
    "applied_power",
    "apply_cable_policy",
    "calibrate_spectrum",
    "effective_hp_gain",
    "simulate_generator_measurement",
    "simulate_thermal_measurement",
    "solution_for_chain",
    "solve_hemt_calibration",
]
