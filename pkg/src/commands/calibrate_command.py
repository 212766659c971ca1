"""Calibrate command implementation."""

import logging
from pathlib import Path
from typing import Optional

from ..calibration import (
    GeneratorMeasurement,
    ThermalMeasurement,
    simulate_generator_measurement,
    simulate_thermal_measurement,
    solve_hemt_calibration,
)
from ..calibration.policies import CABLE_POLICY, ErrorPolicy
from ..config import chain_config_from, load_config, write_calibration
from ..errors import NLQMError
from ..rfchain.units import dbm_to_watts, watts_to_dbm
from ..utils.console import print_report_table
from ..utils.logging import setup_logging


def run_calibrate_command(
    out: Path,
    thermal_dbm: Optional[float] = None,
    gen_dbm: Optional[float] = None,
    config_path: Optional[Path] = None,
    log_level: str = "NONE",
) -> int:
    """Execute the calibrate command.

    SA readings that are not given are taken from the forward model of the
    configured chain. All other inputs (dewar temperature, calibration RBW,
    generator power and losses) come from the run config.

    Args:
        out: Calibration file to write.
        thermal_dbm: SA reading of the terminated input over the calibration RBW.
        gen_dbm: SA reading of the generator tone.
        config_path: Run config; the per-user config or defaults when omitted.
        log_level: Log verbosity (DBG/INF/WRN/ERR/NONE).

    Returns:
        Exit code (0 for success, 1 for failure)
    """
    setup_logging(log_level, log_dir=out.parent)

    print("HEMT Calibration")
    print("=" * 70)

    try:
        config = load_config(config_path)
        cfg = chain_config_from(config)
        thermal = simulate_thermal_measurement(cfg)
        if thermal_dbm is not None:
            thermal = ThermalMeasurement(dbm_to_watts(thermal_dbm), cfg.rbw_cal_hz, cfg.t_dewar)
        gen = simulate_generator_measurement(cfg)
        if gen_dbm is not None:
            gen = GeneratorMeasurement(cfg.p_generator_dbm, cfg.il_pre_hemt_db, dbm_to_watts(gen_dbm))
        print(f"Thermal reading:   {watts_to_dbm(thermal.power_sa_w):.3f} dBm over {thermal.rbw_hz:g} Hz")
        print(f"Generator reading: {watts_to_dbm(gen.power_sa_w):.3f} dBm")

        cable_error = float(config["cable_relative_error"])
        cable_policy = ErrorPolicy(relative_error=cable_error, application=CABLE_POLICY.application)
        sol = solve_hemt_calibration(
            thermal,
            gen,
            cfg.il_post_hemt_db,
            g_hp_amp_db=cfg.g_hp_amp_db,
            g_hp_amp_sigma_db=float(config["g_hp_amp_sigma_db"]),
            il_hp_path_db=cfg.il_hp_path_db,
            cable_policy=cable_policy,
            p_hp_drive_dbm=cfg.p_hp_drive_dbm,
        )
        path = write_calibration(sol, out, cable_relative_error=cable_error)
    except KeyboardInterrupt:
        print("\n\n[INTERRUPTED] Calibration interrupted by user")
        return 130
    except NLQMError as e:
        logging.error("Calibration failed: %s", e)
        print(f"\n[ERROR] {e}")
        return 1
    except Exception as e:
        logging.error("Unexpected error: %s", e)
        print(f"\n[ERROR] Unexpected error: {e}")
        return 1

    print_report_table("Calibration solution", sol.to_dict())
    print(f"\n[SUCCESS] Calibration written to {path}")
    return 0
