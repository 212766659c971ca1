"""Ensemble command implementation: limit ensemble and signal recovery studies."""

import json
import logging
from pathlib import Path
from typing import Optional

from ..config import chain_config_from, load_config
from ..errors import NLQMError
from ..runner import classical_limit_ensemble, signal_recovery_rate
from ..utils.console import print_report_table
from ..utils.logging import setup_logging

ENSEMBLE_FILE = "ensemble.json"


def run_ensemble_command(
    out_dir: Path,
    config_path: Optional[Path] = None,
    n_repetitions: int = 100,
    n_bits: int = 10,
    n_realizations: int = 100,
    excess_sigma: float = 10.0,
    epsilon: float = 0.0,
    seed: Optional[int] = None,
    log_level: str = "NONE",
    show_progress: bool = True,
) -> int:
    """Execute the ensemble command.

    Args:
        out_dir: Directory receiving ensemble.json.
        config_path: Run config; the per-user config or defaults when omitted.
        n_repetitions: Classical datasets in the limit ensemble.
        n_bits: Bits per classical dataset.
        n_realizations: Realizations of the signal recovery study.
        excess_sigma: Injected excess in single-bin noise standard deviations.
        epsilon: Leakage injected into the limit ensemble.
        seed: Master seed (config ``seed`` when omitted).
        log_level: Log verbosity (DBG/INF/WRN/ERR/NONE).
        show_progress: Show progress bars.

    Returns:
        Exit code (0 for success, 1 for failure)
    """
    setup_logging(log_level, log_dir=out_dir)

    print("Ensemble Studies")
    print("=" * 70)

    try:
        config = load_config(config_path)
        cfg = chain_config_from(config)
        seed = int(config["seed"]) if seed is None else seed
        limits = classical_limit_ensemble(
            cfg,
            n_repetitions=n_repetitions,
            n_bits=n_bits,
            cl=float(config["cl"]),
            seed=seed,
            sigma_mode=config["sigma_mode"],
            epsilon=epsilon,
            exclude_halfwidth_hz=float(config["exclude_halfwidth_hz"]),
            show_progress=show_progress,
        )
        recovery = signal_recovery_rate(
            cfg,
            n_realizations=n_realizations,
            excess_sigma_target=excess_sigma,
            k_sigma=float(config["k_sigma"]),
            seed=seed,
            exclude_halfwidth_hz=float(config["exclude_halfwidth_hz"]),
            show_progress=show_progress,
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = {"seed": seed, "limit_ensemble": limits.to_dict(), "recovery": recovery.to_dict()}
        path = out_dir / ENSEMBLE_FILE
        path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    except KeyboardInterrupt:
        print("\n\n[INTERRUPTED] Ensemble interrupted by user")
        return 130
    except NLQMError as e:
        logging.error("Ensemble failed: %s", e)
        print(f"\n[ERROR] {e}")
        return 1
    except Exception as e:
        logging.error("Unexpected error: %s", e)
        print(f"\n[ERROR] Unexpected error: {e}")
        return 1

    print_report_table("Classical limit ensemble", limits.to_dict())
    print_report_table("Signal recovery", recovery.to_dict())
    print(f"\n[SUCCESS] Results written to {path}")
    return 0
