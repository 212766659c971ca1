"""Generate-bits command implementation."""

import logging
from pathlib import Path
from typing import Optional

from ..bitgen import generate_mixed_sample, write_bits_csv
from ..config import load_fidelity_file
from ..errors import NLQMError
from ..utils.console import print_report_table
from ..utils.logging import setup_logging


def run_generate_bits_command(
    n_classical: int,
    n_qubit_a: int,
    n_qubit_b: int,
    seed: int,
    out: Path,
    fidelity_file: Optional[Path] = None,
    blind: bool = True,
    log_level: str = "NONE",
) -> int:
    """Execute the generate-bits command.

    Args:
        n_classical: Number of classical PRNG bits.
        n_qubit_a: Number of bits from the first qubit.
        n_qubit_b: Number of bits from the second qubit.
        seed: Master seed.
        out: Path of the bits file to write.
        fidelity_file: Optional per-qubit fidelity file.
        blind: Withhold quantum bit values from the bits file.
        log_level: Log verbosity (DBG/INF/WRN/ERR/NONE).

    Returns:
        Exit code (0 for success, 1 for failure)
    """
    setup_logging(log_level, log_dir=out.parent)

    print("Mixed Bit Sample")
    print("=" * 70)
    print(f"Output file: {out.absolute()}")
    if fidelity_file:
        print(f"Fidelities:  {fidelity_file}")
    print(f"Blinding:    {'on' if blind else 'off'}")

    try:
        fidelities = load_fidelity_file(fidelity_file) if fidelity_file else None
        sample = generate_mixed_sample(n_classical, n_qubit_a, n_qubit_b, seed, fidelities)
        written = write_bits_csv(sample, out, blind=blind)
    except KeyboardInterrupt:
        print("\n\n[INTERRUPTED] Bit generation interrupted by user")
        return 130
    except NLQMError as e:
        logging.error("Bit generation failed: %s", e)
        print(f"\n[ERROR] {e}")
        return 1
    except Exception as e:
        logging.error("Unexpected error: %s", e)
        print(f"\n[ERROR] Unexpected error: {e}")
        return 1

    print_report_table("Bits per source", {**sample.counts, "total": len(sample), "seed": seed})
    print(f"\n[SUCCESS] Wrote {len(sample)} bits to {written[0]}")
    if len(written) > 1:
        print(f"Sealed quantum values: {written[1]}")
    return 0
