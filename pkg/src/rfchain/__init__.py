"""RF chain model and spectrum synthesis."""

from .chain import (
    BIT0_SWITCH_STATE,
    BIT1_SWITCH_STATE,
    CALIBRATION_SWITCH_STATE,
    ChainConfig,
    ReferencePlane,
    Switch1Port,
    Switch2Port,
    SwitchState,
    epsilon_for_excess,
    leakage_power,
    noise_floor_psd,
    switch_state_for,
)
from .io import read_spectrum, write_spectrum
from .spectrum import (
    CalibratedSpectrum,
    RawSpectrum,
    convert_plane,
    leakage_profile,
    measure_inband_fraction,
    synthesize_spectrum,
)
from .units import Direction, convert_db, db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm

__all__ = [
    "BIT0_SWITCH_STATE",
    "BIT1_SWITCH_STATE",
    "CALIBRATION_SWITCH_STATE",
    "CalibratedSpectrum",
    "ChainConfig",
    "Direction",
    "RawSpectrum",
    "ReferencePlane",
    "Switch1Port",
    "Switch2Port",
    "SwitchState",
    "convert_db",
    "convert_plane",
    "db_to_linear",
    "dbm_to_watts",
    "epsilon_for_excess",
    "leakage_power",
    "leakage_profile",
    "linear_to_db",
    "measure_inband_fraction",
    "noise_floor_psd",
    "read_spectrum",
    "switch_state_for",
    "synthesize_spectrum",
    "watts_to_dbm",
    "write_spectrum",
]
