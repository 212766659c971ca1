"""
nlqm-sim configuration management.

Run, calibration and fidelity files share one plain-text format: ``key=value``
lines, ``#`` comments and blank lines ignored. Chain keys mirror the
``ChainConfig`` field names with the unit in the key (``t_dewar_k``,
``g_hemt_db``, ``rbw_data_hz``). The per-user run config lives at
~/.config/nlqm/run.cfg (Linux), ~/Library/Application Support/nlqm/run.cfg
(macOS) or %APPDATA%/nlqm/run.cfg (Windows).
"""

import logging
import platform
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from .bitgen.models import BitSource, FidelityModel
from .calibration.hemt import CalibrationSolution
from .calibration.policies import ErrorPolicy
from .errors import ConfigError
from .limits.report import SigmaMode
from .rfchain.chain import ChainConfig
from .runner.analysis import AnalysisSettings
from .runner.timing import (
    BIT0_STEPS,
    BIT1_STEPS,
    DEFAULT_BIT0_DURATIONS,
    DEFAULT_BIT1_DURATIONS,
    TimingProfile,
)

CONFIG_FILE_NAME = "run.cfg"

# Config key -> ChainConfig field
CHAIN_KEYS: Dict[str, str] = {
    "t_dewar_k": "t_dewar",
    "t_hemt_noise_k": "t_hemt_noise",
    "g_hemt_db": "g_hemt_db",
    "g_hp_amp_db": "g_hp_amp_db",
    "il_pre_hemt_db": "il_pre_hemt_db",
    "il_hp_path_db": "il_hp_path_db",
    "il_post_hemt_db": "il_post_hemt_db",
    "rbw_data_hz": "rbw_data_hz",
    "rbw_cal_hz": "rbw_cal_hz",
    "f0_hz": "f0_hz",
    "span_hz": "span_hz",
    "p_generator_dbm": "p_generator_dbm",
    "p_applied_w": "p_applied_w",
    "p_hp_drive_dbm": "p_hp_drive_dbm",
    "inband_fraction": "inband_fraction",
    "line_skirt_hz": "line_skirt_hz",
}


def get_config_dir() -> Path:
    """Return the platform-appropriate config directory."""
    if platform.system() == "Windows":
        base = Path.home() / "AppData" / "Roaming"
    elif platform.system() == "Darwin":
        base = Path.home() / "Library" / "Application Support"
    else:
        base = Path.home() / ".config"
    return base / "nlqm"


def get_config_path() -> Path:
    """Return the full path to the per-user run config."""
    return get_config_dir() / CONFIG_FILE_NAME


def _timing_defaults() -> Dict[str, Any]:
    defaults: Dict[str, Any] = {}
    for step in BIT0_STEPS:
        defaults[f"timing.bit0.{step}_s"] = DEFAULT_BIT0_DURATIONS[step]
    for step in BIT1_STEPS:
        defaults[f"timing.bit1.{step}_s"] = DEFAULT_BIT1_DURATIONS[step]
    defaults["timing.tolerance_s"] = 0.0
    return defaults


_CHAIN_DEFAULTS = ChainConfig()

# Default configuration values
DEFAULT_CONFIG: Dict[str, Any] = {
    **{key: getattr(_CHAIN_DEFAULTS, name) for key, name in CHAIN_KEYS.items()},
    "seed": 0,
    "epsilon_true": 0.0,
    "n_classical": 25,
    "n_qubit_a": 21,
    "n_qubit_b": 20,
    "f_hadamard": 0.99,
    "f_readout_qubit_a": 0.983,
    "f_readout_qubit_b": 0.861,
    "f_reset": 0.99,
    "f_readout_classical": 0.861,
    "bandwidth_fraction": 0.856,
    "cl": 0.90,
    "exclude_halfwidth_hz": 0.01,
    "k_sigma": 5.0,
    "sigma_mode": SigmaMode.SEM.value,
    "g_hp_amp_sigma_db": 0.6,
    "cable_relative_error": 0.10,
    "data_cable_policy": False,
    "blind": True,
    **_timing_defaults(),
}

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def parse_key_value(text: str, source: str = "<string>") -> Dict[str, str]:
    """Parse ``key=value`` lines into raw strings.

    Raises:
        ConfigError: If a non-comment line has no ``=`` or an empty key.
    """
    values: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {stripped!r}")
        values[key.strip()] = value.strip()
    return values


def _coerce(key: str, raw: str, default: Any) -> Any:
    # bool first: bool is a subclass of int
    try:
        if isinstance(default, bool):
            lowered = raw.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise ValueError(raw)
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError as e:
        raise ConfigError(f"invalid value for {key}: {raw!r}") from e
    return raw


def _read_file(path: Path) -> Dict[str, str]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    return parse_key_value(text, str(path))


def load_config(path: Optional[Path] = None) -> Dict[str, Any]:
    """Load a run config merged over the defaults.

    Without ``path`` the per-user config is used when it exists. Unknown keys
    are logged and ignored.
    """
    merged = dict(DEFAULT_CONFIG)
    if path is None:
        path = get_config_path()
        if not path.exists():
            return merged
    for key, raw in _read_file(Path(path)).items():
        if key not in DEFAULT_CONFIG:
            logging.warning("Ignoring unknown config key %r in %s", key, path)
            continue
        merged[key] = _coerce(key, raw, DEFAULT_CONFIG[key])
    return merged


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def save_config(config: Mapping[str, Any], path: Optional[Path] = None) -> Path:
    """Save config as sorted ``key=value`` lines. Returns the path written."""
    path = Path(path) if path is not None else get_config_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{key}={_format(value)}" for key, value in sorted(config.items())]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def chain_config_from(config: Mapping[str, Any]) -> ChainConfig:
    """Build a ChainConfig from the chain keys of a loaded config."""
    return ChainConfig(**{name: float(config[key]) for key, name in CHAIN_KEYS.items()})


def timing_profile_from(config: Mapping[str, Any]) -> TimingProfile:
    return TimingProfile(
        bit0={step: float(config[f"timing.bit0.{step}_s"]) for step in BIT0_STEPS},
        bit1={step: float(config[f"timing.bit1.{step}_s"]) for step in BIT1_STEPS},
        tolerance_s=float(config["timing.tolerance_s"]),
    )


def fidelity_models_from(config: Mapping[str, Any]) -> Dict[BitSource, FidelityModel]:
    return {
        source: FidelityModel(
            f_hadamard=float(config["f_hadamard"]),
            f_readout=float(config[f"f_readout_{source.value}"]),
            f_reset=float(config["f_reset"]),
        )
        for source in (BitSource.QUBIT_A, BitSource.QUBIT_B)
    }


def load_fidelity_file(path: Path) -> Dict[BitSource, FidelityModel]:
    """Read per-qubit fidelities (``qubit_a.f_hadamard=0.99`` and so on).

    Missing keys fall back to the run defaults.

    Raises:
        ConfigError: If a key or value is invalid.
    """
    raw = _read_file(Path(path))
    defaults = fidelity_models_from(DEFAULT_CONFIG)
    models: Dict[BitSource, FidelityModel] = {}
    for source, default in defaults.items():
        fields = default.to_dict()
        for name in fields:
            key = f"{source.value}.{name}"
            if key in raw:
                fields[name] = _coerce(key, raw[key], 0.0)
        models[source] = FidelityModel(**fields)
    known = {f"{s.value}.{n}" for s in defaults for n in defaults[s].to_dict()}
    for key in sorted(set(raw) - known):
        logging.warning("Ignoring unknown fidelity key %r in %s", key, path)
    return models


def analysis_settings_from(config: Mapping[str, Any]) -> AnalysisSettings:
    cable_policy = (
        ErrorPolicy(relative_error=float(config["cable_relative_error"]))
        if config["data_cable_policy"]
        else None
    )
    return AnalysisSettings(
        cl=float(config["cl"]),
        exclude_halfwidth_hz=float(config["exclude_halfwidth_hz"]),
        k_sigma=float(config["k_sigma"]),
        sigma_mode=SigmaMode(config["sigma_mode"]),
        bandwidth_fraction=float(config["bandwidth_fraction"]),
        f_readout_classical=float(config["f_readout_classical"]),
        f_readout_quantum=min(
            float(config["f_readout_qubit_a"]), float(config["f_readout_qubit_b"])
        ),
        f_hadamard=float(config["f_hadamard"]),
        cable_policy=cable_policy,
    )


def write_calibration(
    sol: CalibrationSolution, path: Path, cable_relative_error: float = 0.10
) -> Path:
    """Write a calibration solution as ``key=value`` lines.

    The adjusted paths are listed under ``cable_policy_paths``.
    """
    values: Dict[str, Any] = {
        "g_hemt_db": sol.g_hemt_db,
        "t_hemt_noise_k": sol.t_hemt_noise_k,
        "il_post_hemt_db": sol.il_post_hemt_db,
        "effective_g_hp_db": sol.effective_g_hp_db,
        "cable_relative_error": cable_relative_error,
        "cable_policy_paths": ",".join(sorted(sol.effective_il_factors)),
    }
    for name, factor in sol.effective_il_factors.items():
        values[f"il_factor.{name}"] = factor
    if sol.p_applied_w is not None:
        values["p_applied_w"] = sol.p_applied_w
    return save_config(values, path)


def read_calibration(path: Path) -> CalibrationSolution:
    """Read a calibration file written by :func:`write_calibration`.

    Raises:
        ConfigError: If the file is missing, malformed or lacks a required key.
    """
    raw = _read_file(Path(path))
    try:
        return CalibrationSolution(
            g_hemt_db=float(raw["g_hemt_db"]),
            t_hemt_noise_k=float(raw["t_hemt_noise_k"]),
            il_post_hemt_db=float(raw["il_post_hemt_db"]),
            effective_g_hp_db=float(raw["effective_g_hp_db"]),
            effective_il_factors={
                key.split(".", 1)[1]: float(value)
                for key, value in raw.items()
                if key.startswith("il_factor.")
            },
            p_applied_w=float(raw["p_applied_w"]) if "p_applied_w" in raw else None,
        )
    except KeyError as e:
        raise ConfigError(f"calibration file {path} lacks {e.args[0]}") from e
    except ValueError as e:
        raise ConfigError(f"calibration file {path} is malformed: {e}") from e
