"""Limit command implementation."""

import logging
from pathlib import Path
from typing import Optional

from ..config import read_calibration
from ..errors import BlindingViolationError, NLQMError
from ..limits import CorrectionFactors, DatasetTag, SigmaMode, build_limit_report
from ..rfchain.chain import ChainConfig
from ..runner import BlindedWriter, BlindingPolicy, read_excesses
from ..utils.console import print_report_table
from ..utils.logging import setup_logging


def run_limit_command(
    analysis_path: Path,
    out: Path,
    cl: float = 0.90,
    cal_path: Optional[Path] = None,
    p_applied_w: Optional[float] = None,
    f_c: float = 1.0,
    f_h: float = 1.0,
    bandwidth_fraction: float = 1.0,
    sigma_mode: str = SigmaMode.SEM.value,
    dataset_tag: str = DatasetTag.CLASSICAL.value,
    blind: Optional[bool] = None,
    log_level: str = "NONE",
) -> int:
    """Execute the limit command on an existing analysis file.

    The applied power is taken from ``p_applied_w``, then the calibration
    file, then the default chain. A quantum limit written under blinding
    keeps only the permitted outputs.

    Returns:
        Exit code (0 for success, 1 for failure, 3 for a refused blinded write)
    """
    setup_logging(log_level, log_dir=out.parent)

    print("Upper Limit")
    print("=" * 70)
    print(f"Analysis file: {analysis_path}")

    policy = BlindingPolicy(enabled=True if blind is None else blind)
    try:
        excesses = read_excesses(analysis_path)
        if p_applied_w is None and cal_path is not None:
            p_applied_w = read_calibration(cal_path).p_applied_w
        if p_applied_w is None:
            p_applied_w = ChainConfig().p_applied_w
        report = build_limit_report(
            excesses,
            cl,
            p_applied_w,
            CorrectionFactors.from_fidelities(bandwidth_fraction, f_c, f_h),
            dataset_tag,
            sigma_mode,
        )
        blinded = policy.enabled and report.dataset_tag is DatasetTag.QUANTUM
        payload = report.blinded_dict() if blinded else report.to_dict()
        BlindedWriter(out.parent, policy).write_limit(payload, out.name)
    except KeyboardInterrupt:
        print("\n\n[INTERRUPTED] Interrupted by user")
        return 130
    except BlindingViolationError as e:
        logging.error("Blinding violation: %s", e)
        print(f"\n[ERROR] Blinding violation: {e}")
        return 3
    except NLQMError as e:
        logging.error("Limit failed: %s", e)
        print(f"\n[ERROR] {e}")
        return 1
    except Exception as e:
        logging.error("Unexpected error: %s", e)
        print(f"\n[ERROR] Unexpected error: {e}")
        return 1

    print_report_table("Limit", payload)
    print(f"\n[SUCCESS] Limit written to {out}")
    return 0
