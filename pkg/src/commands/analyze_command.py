"""Analyze command implementation."""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Optional

from ..calibration import solution_for_chain
from ..config import analysis_settings_from, load_config, read_calibration
from ..errors import BlindingViolationError, NLQMError
from ..runner import BlindingPolicy, RunLedger, analyze
from ..runner.analysis import AnalysisResult
from ..utils.console import print_report_table, print_warn
from ..utils.logging import setup_logging


def print_analysis_summary(result: AnalysisResult, blind: bool) -> None:
    """Show the classical report and whatever of the quantum result may be shown."""
    if result.classical is not None:
        print_report_table(
            "Classical control sample",
            result.classical.to_dict(),
            keys=["n_measurements", "p_m_w", "p_applied_w", "epsilon_limit", "cl", "sigma_mode"],
        )
    quantum = result.quantum_section(blind)
    if quantum is None:
        print("No quantum bit=0 data in this run.")
    else:
        print_report_table(
            "Quantum data" + (" (blinded)" if blind else ""),
            quantum,
            keys=["excess_detected", "epsilon_limit", "p_m_w", "n_measurements"],
        )


def run_analyze_command(
    run_dir: Path,
    cal_path: Optional[Path] = None,
    config_path: Optional[Path] = None,
    blind: Optional[bool] = None,
    cl: Optional[float] = None,
    out_dir: Optional[Path] = None,
    dump_quantum: bool = False,
    workers: int = 1,
    log_level: str = "NONE",
) -> int:
    """Execute the analyze command.

    Args:
        run_dir: Run directory written by simulate-run.
        cal_path: Calibration file; the run's own chain is calibrated when omitted.
        config_path: Config holding the analysis settings.
        blind: Blinding override; defaults to the run's blinding flag.
        cl: Confidence level override.
        out_dir: Where to write outputs (default: the run directory).
        dump_quantum: Also write per-bit quantum excesses (refused under blinding).
        workers: Threads used for the classical spectra.
        log_level: Log verbosity (DBG/INF/WRN/ERR/NONE).

    Returns:
        Exit code (0 success, 1 failure, 3 blinding violation)
    """
    out_dir = out_dir or run_dir
    setup_logging(log_level, log_dir=out_dir, append=True)

    print("Run Analysis")
    print("=" * 70)
    print(f"Run directory: {run_dir.absolute()}")

    try:
        ledger = RunLedger.load(run_dir)
        blind = ledger.blinding if blind is None else blind
        if ledger.blinding and not blind:
            print_warn("Unblinding: quantum results will be written in full.")
        sol = read_calibration(cal_path) if cal_path else solution_for_chain(ledger.config)
        settings = replace(
            analysis_settings_from(load_config(config_path)),
            dump_quantum=dump_quantum,
            workers=workers,
        )
        print(f"Calibration: {cal_path or 'from run config'}   blinding: {'on' if blind else 'off'}")
        result = analyze(
            ledger,
            sol,
            BlindingPolicy(enabled=blind),
            cl=cl,
            settings=settings,
            out_dir=out_dir,
        )
    except KeyboardInterrupt:
        print("\n\n[INTERRUPTED] Analysis interrupted by user")
        return 130
    except BlindingViolationError as e:
        logging.error("Blinding violation: %s", e)
        print(f"\n[ERROR] Blinding violation: {e}")
        return 3
    except NLQMError as e:
        logging.error("Analysis failed: %s", e)
        print(f"\n[ERROR] {e}")
        return 1
    except Exception as e:
        logging.error("Unexpected error: %s", e)
        print(f"\n[ERROR] Unexpected error: {e}")
        return 1

    print_analysis_summary(result, blind)
    print(f"\n[SUCCESS] Report written to {out_dir / 'report.json'}")
    return 0
