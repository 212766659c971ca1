"""Simulate-run command implementation."""

import logging
from pathlib import Path
from typing import Optional

from ..bitgen import generate_mixed_sample, read_bits_csv
from ..config import chain_config_from, fidelity_models_from, load_config, timing_profile_from
from ..errors import BlindingViolationError, NLQMError, SynchronizationError
from ..runner import BlindingPolicy, check_branch_synchronization, run_experiment
from ..utils.console import print_report_table
from ..utils.logging import setup_logging


def run_simulate_command(
    out_dir: Path,
    config_path: Optional[Path] = None,
    bits_path: Optional[Path] = None,
    epsilon: Optional[float] = None,
    seed: Optional[int] = None,
    blind: Optional[bool] = None,
    log_level: str = "NONE",
    show_progress: bool = True,
) -> int:
    """Execute the simulate-run command.

    Args:
        out_dir: Run directory to create.
        config_path: Run config; the per-user config or defaults when omitted.
        bits_path: Bits file; a sample is generated from the config when omitted.
        epsilon: True leakage parameter (config ``epsilon_true`` when omitted).
        seed: Master seed (config ``seed`` when omitted).
        blind: Blinding override (config ``blind`` when omitted).
        log_level: Log verbosity (DBG/INF/WRN/ERR/NONE).
        show_progress: Show a progress bar over the bits.

    Returns:
        Exit code (0 success, 1 failure, 3 blinding violation)
    """
    setup_logging(log_level, log_dir=out_dir)

    try:
        config = load_config(config_path)
        cfg = chain_config_from(config)
        timing = timing_profile_from(config)
        seed = int(config["seed"]) if seed is None else seed
        epsilon = float(config["epsilon_true"]) if epsilon is None else epsilon
        blind = bool(config["blind"]) if blind is None else blind

        print("Simulated Experiment Run")
        print("=" * 70)
        print(f"Run directory: {out_dir.absolute()}")
        print(f"Seed: {seed}   epsilon_true: {epsilon:g}   blinding: {'on' if blind else 'off'}")

        if bits_path is not None:
            sample = read_bits_csv(bits_path)
            print(f"Bits: {bits_path} ({len(sample)} bits)")
        else:
            sample = generate_mixed_sample(
                int(config["n_classical"]),
                int(config["n_qubit_a"]),
                int(config["n_qubit_b"]),
                seed,
                fidelity_models_from(config),
            )
            print(f"Bits: generated ({len(sample)} bits)")

        sync = check_branch_synchronization(timing)
        print_report_table("Branch synchronization", sync.to_dict())

        ledger = run_experiment(
            cfg,
            sample,
            timing,
            epsilon,
            seed,
            run_dir=out_dir,
            policy=BlindingPolicy(enabled=blind),
            show_progress=show_progress,
        )
    except KeyboardInterrupt:
        print("\n\n[INTERRUPTED] Run interrupted by user")
        return 130
    except SynchronizationError as e:
        logging.error("Refusing to run: %s", e)
        print(f"\n[ERROR] Branches are not synchronized: {e}")
        return 1
    except BlindingViolationError as e:
        logging.error("Blinding violation: %s", e)
        print(f"\n[ERROR] Blinding violation: {e}")
        return 3
    except NLQMError as e:
        logging.error("Run failed: %s", e)
        print(f"\n[ERROR] {e}")
        return 1
    except Exception as e:
        logging.error("Unexpected error: %s", e)
        print(f"\n[ERROR] Unexpected error: {e}")
        return 1

    sealed = sum(1 for entry in ledger.entries if entry.sealed)
    print(f"\n[SUCCESS] Recorded {len(ledger)} bits ({sealed} sealed) in {out_dir}")
    return 0
