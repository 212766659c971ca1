"""RF chain constants, switch configurations and noise/leakage power levels."""

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, Union

from scipy.constants import k as BOLTZMANN

from ..errors import ConfigError, DomainError
from .units import db_to_linear, watts_to_dbm

# HP amplifier drive that puts 7.45 W on the HP load with the gain one sigma
# low and the HP-path loss 10% high.
DEFAULT_HP_DRIVE_DBM = watts_to_dbm(7.45) - (60.73 - 0.6) + 7.10 * 1.10


class ReferencePlane(str, Enum):
    """Where in the chain a power value is referred to."""

    SA_INPUT = "sa_input"
    HEMT_INPUT = "hemt_input"


class Switch1Port(str, Enum):
    PORT1_LOAD = "port1_load"
    PORT_SIGNAL = "port_signal"


class Switch2Port(str, Enum):
    PORT1_SIGNAL = "port1_signal"
    PORT2_HP_LOAD = "port2_hp_load"


@dataclass(frozen=True)
class SwitchState:
    """Positions of both switches and the source state."""

    sw1_port: Switch1Port
    sw2_port: Switch2Port
    source_on: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sw1_port": self.sw1_port.value,
            "sw2_port": self.sw2_port.value,
            "source_on": self.source_on,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SwitchState":
        return cls(Switch1Port(data["sw1_port"]), Switch2Port(data["sw2_port"]), bool(data["source_on"]))


# bit=0: amplifier input terminated, source off, spectrum acquired.
BIT0_SWITCH_STATE = SwitchState(Switch1Port.PORT1_LOAD, Switch2Port.PORT1_SIGNAL, False)
# bit=1: source on, high power routed into the HP load.
BIT1_SWITCH_STATE = SwitchState(Switch1Port.PORT_SIGNAL, Switch2Port.PORT2_HP_LOAD, True)
# Generator calibration: source routed through both switches into the HEMT.
CALIBRATION_SWITCH_STATE = SwitchState(Switch1Port.PORT_SIGNAL, Switch2Port.PORT1_SIGNAL, True)


def switch_state_for(bit: int) -> SwitchState:
    """Return the switch configuration for a bit value.

    Raises:
        DomainError: If ``bit`` is not 0 or 1.
    """
    if isinstance(bit, bool) or bit not in (0, 1):
        raise DomainError(f"bit must be 0 or 1, got {bit!r}")
    return BIT0_SWITCH_STATE if bit == 0 else BIT1_SWITCH_STATE


@dataclass(frozen=True)
class ChainConfig:
    """Constants of the RF chain, in the units named by each field.

    Gains and insertion losses are in dB, temperatures in kelvin,
    bandwidths and frequencies in hertz, ``p_generator_dbm`` and the HP
    amplifier drive ``p_hp_drive_dbm`` in dBm, ``p_applied_w`` in watts.
    ``p_applied_w`` sizes the injected leakage; the analysis takes P_A from
    the calibration, which derives it from the drive. ``line_skirt_hz`` is
    the width of the window that carries the part of the source line
    outside the centre bin.
    """

    t_dewar: float = 1.921
    t_hemt_noise: float = 4.108
    g_hemt_db: float = 38.087
    g_hp_amp_db: float = 60.73
    il_pre_hemt_db: float = 7.53
    il_hp_path_db: float = 7.10
    il_post_hemt_db: float = 1.89
    rbw_data_hz: float = 1e-3
    rbw_cal_hz: float = 1.0
    f0_hz: float = 2.5e9
    span_hz: float = 1.0
    p_generator_dbm: float = -130.0
    p_applied_w: float = 7.45
    p_hp_drive_dbm: float = DEFAULT_HP_DRIVE_DBM
    inband_fraction: float = 0.856
    line_skirt_hz: float = 1.0

    def __post_init__(self):
        if self.t_dewar <= 0 or self.t_hemt_noise < 0:
            raise ConfigError("temperatures must be positive")
        for name in ("il_pre_hemt_db", "il_hp_path_db", "il_post_hemt_db"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0 dB")
        if self.rbw_data_hz <= 0 or self.rbw_data_hz > self.rbw_cal_hz:
            raise ConfigError("need 0 < rbw_data_hz <= rbw_cal_hz")
        ratio = self.span_hz / self.rbw_data_hz
        if ratio < 1 or abs(ratio - round(ratio)) > 1e-6 * ratio:
            raise ConfigError("span_hz must be an integer multiple of rbw_data_hz")
        if not (0.0 < self.inband_fraction <= 1.0):
            raise ConfigError("inband_fraction must lie in (0, 1]")
        if self.p_applied_w <= 0 or self.line_skirt_hz <= 0:
            raise ConfigError("p_applied_w and line_skirt_hz must be positive")

    @property
    def n_bins(self) -> int:
        return int(round(self.span_hz / self.rbw_data_hz))

    @property
    def center_index(self) -> int:
        """Index of the bin containing ``f0_hz``."""
        return self.n_bins // 2

    @property
    def f_start_hz(self) -> float:
        """Centre frequency of the first bin."""
        return self.f0_hz - self.center_index * self.rbw_data_hz

    @property
    def g_hemt_lin(self) -> float:
        return db_to_linear(self.g_hemt_db)

    @property
    def il_post_lin(self) -> float:
        return db_to_linear(self.il_post_hemt_db)

    @property
    def sa_over_hemt(self) -> float:
        """Linear power factor from the HEMT input plane to the SA input plane."""
        return self.g_hemt_lin / self.il_post_lin

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def noise_floor_psd(cfg: ChainConfig, plane: Union[ReferencePlane, str]) -> float:
    """Thermal noise power spectral density in W/Hz at ``plane``."""
    plane = ReferencePlane(plane)
    psd = BOLTZMANN * (cfg.t_dewar + cfg.t_hemt_noise)
    if plane is ReferencePlane.SA_INPUT:
        psd *= cfg.sa_over_hemt
    return psd


def leakage_power(cfg: ChainConfig, epsilon: float) -> float:
    """Inter-branch leakage power ``eps**2 * P_A / 4`` at the HEMT input."""
    if epsilon < 0:
        raise DomainError("epsilon must be >= 0")
    return epsilon**2 * cfg.p_applied_w / 4.0


def epsilon_for_excess(cfg: ChainConfig, excess_w: float) -> float:
    """Return the epsilon whose centre-bin leakage at the SA plane equals ``excess_w``.

    The part of the line outside the centre bin raises the sidebands and the
    centre bin alike, so the excess over the sideband mean is the in-band
    share only.
    """
    if excess_w < 0:
        raise DomainError("excess power must be >= 0")
    p_leak = excess_w / (cfg.inband_fraction * cfg.sa_over_hemt)
    return 2.0 * math.sqrt(p_leak / cfg.p_applied_w)
