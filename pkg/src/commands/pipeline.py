"""Reproduce command implementation.

Chains the full simulated experiment:
  1. Generate the mixed bit sample
  2. Calibrate the HEMT from the forward model
  3. Run the experiment under blinding
  4. Analyze the run and write the report
"""

import logging
from pathlib import Path
from typing import Optional

from ..utils import list_outputs, write_manifest
from ..utils.console import print_error, print_success, print_warn
from ..utils.logging import log_section, setup_logging

CALIBRATION_FILE = "calibration.cfg"
RUN_SUBDIR = "run"
MANIFEST_FILE = "manifest.txt"


def run_reproduce(
    out_dir: Path,
    config_path: Optional[Path] = None,
    seed: Optional[int] = None,
    epsilon: Optional[float] = None,
    blind: Optional[bool] = None,
    log_level: str = "NONE",
    show_progress: bool = True,
) -> int:
    """Run generate, calibrate, run and analyze into one output directory.

    Args:
        out_dir: Output root; the run lands in ``out_dir/run``.
        config_path: Run config; the per-user config or defaults when omitted.
        seed: Master seed override.
        epsilon: True leakage parameter override.
        blind: Blinding override.
        log_level: Log verbosity (DBG/INF/WRN/ERR/NONE).
        show_progress: Show a progress bar over the bits.

    Returns:
        Exit code (0 success, 1 failure, 3 blinding violation).
    """
    import time as _time

    from ..bitgen import generate_mixed_sample, write_bits_csv
    from ..calibration import (
        simulate_generator_measurement,
        simulate_thermal_measurement,
        solve_hemt_calibration,
    )
    from ..calibration.policies import CABLE_POLICY, ErrorPolicy
    from ..config import (
        analysis_settings_from,
        chain_config_from,
        fidelity_models_from,
        load_config,
        timing_profile_from,
        write_calibration,
    )
    from ..errors import BlindingViolationError, NLQMError
    from ..runner import BlindingPolicy, analyze, run_experiment

    setup_logging(log_level, log_dir=out_dir)
    _start_time = _time.monotonic()

    try:
        config = load_config(config_path)
        cfg = chain_config_from(config)
    except NLQMError as exc:
        print_error(f"[ERROR] {exc}")
        return 1
    seed = int(config["seed"]) if seed is None else seed
    epsilon = float(config["epsilon_true"]) if epsilon is None else epsilon
    blind = bool(config["blind"]) if blind is None else blind
    run_dir = out_dir / RUN_SUBDIR

    print()
    print("=" * 70)
    print("  Simulated Leakage Search")
    print("=" * 70)
    print(f"  * Seed {seed}, epsilon_true {epsilon:g}, blinding {'on' if blind else 'off'}")
    print(f"  * Output to {out_dir.absolute()}")
    print("=" * 70)

    # ------------------------------------------------------------------
    # Stage 1: Bits
    # ------------------------------------------------------------------
    print("\n[1/4] Generating bits...")
    log_section("[1/4] Generating bits")
    try:
        sample = generate_mixed_sample(
            int(config["n_classical"]),
            int(config["n_qubit_a"]),
            int(config["n_qubit_b"]),
            seed,
            fidelity_models_from(config),
        )
        bit_files = write_bits_csv(sample, out_dir / "bits.csv", blind=blind)
        write_manifest(out_dir / "bits_manifest.txt", bit_files, "bits")
        print_success(f"  OK - {len(sample)} bits ({sample.counts})")
    except NLQMError as exc:
        logging.error("Bit generation error: %s", exc)
        print_error(f"  ERR - Bit generation failed: {exc}")
        return 1

    # ------------------------------------------------------------------
    # Stage 2: Calibration
    # ------------------------------------------------------------------
    print("\n[2/4] Calibrating HEMT...")
    log_section("[2/4] Calibrating HEMT")
    try:
        cable_error = float(config["cable_relative_error"])
        sol = solve_hemt_calibration(
            simulate_thermal_measurement(cfg),
            simulate_generator_measurement(cfg),
            cfg.il_post_hemt_db,
            g_hp_amp_db=cfg.g_hp_amp_db,
            g_hp_amp_sigma_db=float(config["g_hp_amp_sigma_db"]),
            il_hp_path_db=cfg.il_hp_path_db,
            cable_policy=ErrorPolicy(
                relative_error=cable_error, application=CABLE_POLICY.application
            ),
            p_hp_drive_dbm=cfg.p_hp_drive_dbm,
        )
        write_calibration(sol, out_dir / CALIBRATION_FILE, cable_relative_error=cable_error)
        print_success(f"  OK - G={sol.g_hemt_db:.2f} dB, T={sol.t_hemt_noise_k:.3f} K")
    except NLQMError as exc:
        logging.error("Calibration error: %s", exc)
        print_error(f"  ERR - Calibration failed: {exc}")
        return 1

    # ------------------------------------------------------------------
    # Stage 3: Run
    # ------------------------------------------------------------------
    print("\n[3/4] Running experiment...")
    log_section("[3/4] Running experiment")
    policy = BlindingPolicy(enabled=blind)
    try:
        ledger = run_experiment(
            cfg,
            sample,
            timing_profile_from(config),
            epsilon,
            seed,
            run_dir=run_dir,
            policy=policy,
            show_progress=show_progress,
        )
        print_success(f"  OK - {len(ledger)} bits recorded in {run_dir}")
    except BlindingViolationError as exc:
        logging.error("Blinding violation: %s", exc)
        print_error(f"  ERR - Blinding violation: {exc}")
        return 3
    except NLQMError as exc:
        logging.error("Run error: %s", exc)
        print_error(f"  ERR - Run failed: {exc}")
        return 1

    # ------------------------------------------------------------------
    # Stage 4: Analysis
    # ------------------------------------------------------------------
    print("\n[4/4] Analyzing...")
    log_section("[4/4] Analyzing")
    try:
        result = analyze(
            ledger, sol, policy, settings=analysis_settings_from(config), out_dir=run_dir
        )
        print_success("  OK - Report written")
    except BlindingViolationError as exc:
        logging.error("Blinding violation: %s", exc)
        print_error(f"  ERR - Blinding violation: {exc}")
        return 3
    except NLQMError as exc:
        logging.error("Analysis error: %s", exc)
        print_error(f"  ERR - Analysis failed: {exc}")
        return 1
    if result.excess_detected:
        print_warn("  WRN - Quantum data exceed the classical control sample")

    write_manifest(out_dir / MANIFEST_FILE, list_outputs(out_dir), "reproduce outputs")

    # ------------------------------------------------------------------
    # Summary
    # ------------------------------------------------------------------
    elapsed = _time.monotonic() - _start_time
    mins, secs = divmod(int(elapsed), 60)
    quantum = result.quantum_section(blind) or {}

    print()
    print("=" * 70)
    print("  Summary")
    print("=" * 70)
    if result.classical is not None:
        print(f"  Classical  : epsilon < {result.classical.epsilon_limit:.3g} "
              f"({result.classical.cl:.0%} CL, {result.classical.n_measurements} spectra)")
    if "epsilon_limit" in quantum:
        print(f"  Quantum    : epsilon < {quantum['epsilon_limit']:.3g}")
    elif quantum:
        print(f"  Quantum    : excess detected = {quantum['excess_detected']}")
    else:
        print("  Quantum    : no bit=0 data")
    print(f"  Report     : {run_dir / 'report.json'}")
    print(f"  Duration   : {mins}m {secs}s")
    print("=" * 70)

    return 0
