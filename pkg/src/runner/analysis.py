"""Analysis of a completed run: classical diagnostics, the quantum gate and limits.

Classical bit=0 spectra are the control sample. They are calibrated,
measured and fitted, and their per-bit rows are written out. Quantum bit=0
spectra are measured in memory only; the single comparison against the
classical sample decides whether an excess was seen and, if not, a quantum
limit is set. Under blinding nothing else about the quantum data leaves
this module.
"""

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..bitgen.models import BitRecord, BitSource
from ..calibration.hemt import CalibrationSolution, calibrate_spectrum
from ..calibration.policies import ErrorPolicy
from ..errors import DegenerateFitError, IncompleteRunError, InsufficientDataError
from ..limits.corrections import CorrectionFactors, compare_quantum_classical
from ..limits.report import DatasetTag, LimitReport, SigmaMode, build_limit_report
from ..rfchain.io import read_spectrum
from ..rfchain.spectrum import RawSpectrum
from ..specfit.chi2fit import Chi2Fit, fit_chi2_2dof
from ..specfit.sidebands import (
    DEFAULT_EXCLUDE_HALFWIDTH_HZ,
    SignalRegionMeasurement,
    measure_signal_region,
)
from .blinding import BlindedWriter, BlindingPolicy
from .experiment import SimulatedAnalyzer
from .ledger import LedgerEntry, RunLedger
from .timing import check_branch_synchronization

ANALYSIS_FILE = "analysis.csv"
FITS_FILE = "fits.csv"
QUANTUM_DUMP_FILE = "quantum_analysis.csv"
REPORT_FILE = "report.json"

ANALYSIS_COLUMNS = ("id", "p_s_w", "sideband_mean_w", "sideband_sigma_w", "excess_w")
FIT_COLUMNS = ("id", "amplitude", "offset", "reduced_gof", "n_values", "n_bins", "implied_mean_w")

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnalysisSettings:
    """Knobs of the analysis.

    ``f_readout_classical`` is the readout fidelity applied to the classical
    exercise; ``f_readout_quantum`` the worst readout fidelity among the
    qubits that produced quantum bits.
    """

    cl: float = 0.90
    exclude_halfwidth_hz: float = DEFAULT_EXCLUDE_HALFWIDTH_HZ
    k_sigma: float = 5.0
    sigma_mode: SigmaMode = SigmaMode.SEM
    bandwidth_fraction: float = 0.856
    f_readout_classical: float = 0.861
    f_readout_quantum: float = 0.861
    f_hadamard: float = 0.99
    p_applied_w: Optional[float] = None
    cable_policy: Optional[ErrorPolicy] = None
    dump_quantum: bool = False
    workers: int = 1


@dataclass
class AnalysisResult:
    classical: Optional[LimitReport]
    quantum: Optional[LimitReport]
    excess_detected: Optional[bool]
    classical_rows: List[Tuple[int, SignalRegionMeasurement]] = field(default_factory=list)
    fits: List[Tuple[int, Chi2Fit]] = field(default_factory=list)
    n_quantum_bits: int = 0

    def quantum_section(self, blind: bool) -> Optional[Dict[str, Any]]:
        """Quantum part of the report as it may be written."""
        if self.excess_detected is None:
            return None
        if self.quantum is None:
            return {"excess_detected": self.excess_detected}
        return self.quantum.blinded_dict() if blind else self.quantum.to_dict()


def _record_for(ledger: RunLedger, entry: LedgerEntry) -> BitRecord:
    return BitRecord(id=entry.id, source=entry.source, value=ledger.bit_value(entry.id))


def _load_spectrum(ledger: RunLedger, entry: LedgerEntry, analyzer: SimulatedAnalyzer) -> RawSpectrum:
    """Spectrum of one entry: in memory, on disk, or acquired again for sealed entries."""
    if entry.id in ledger.spectra:
        return ledger.spectra[entry.id]
    if entry.sealed:
        return analyzer.acquire(_record_for(ledger, entry))
    if entry.spectrum_file is None or ledger.run_dir is None:
        raise IncompleteRunError(f"no spectrum recorded for bit {entry.id}")
    return read_spectrum(ledger.run_dir / entry.spectrum_file)


def _measure(
    spectrum: RawSpectrum, sol: CalibrationSolution, f0_hz: float, settings: AnalysisSettings
) -> Tuple[RawSpectrum, SignalRegionMeasurement]:
    calibrated = calibrate_spectrum(spectrum, sol, settings.cable_policy)
    return calibrated, measure_signal_region(calibrated, f0_hz, settings.exclude_halfwidth_hz)


def _p_applied(ledger: RunLedger, sol: CalibrationSolution, settings: AnalysisSettings) -> float:
    if settings.p_applied_w is not None:
        return settings.p_applied_w
    if sol.p_applied_w is not None:
        return sol.p_applied_w
    return ledger.config.p_applied_w


def analyze(
    ledger: RunLedger,
    sol: CalibrationSolution,
    policy: BlindingPolicy,
    cl: Optional[float] = None,
    settings: Optional[AnalysisSettings] = None,
    out_dir: Optional[Path] = None,
) -> AnalysisResult:
    """Analyze a run and, with ``out_dir``, write its outputs under ``policy``.

    Args:
        ledger: The run to analyze.
        sol: HEMT calibration used to refer spectra to the HEMT input.
        policy: Blinding policy of the written outputs.
        cl: Confidence level; overrides ``settings.cl``.
        settings: Remaining analysis settings.
        out_dir: Output directory; nothing is written without one.

    Raises:
        IncompleteRunError: If a spectrum or bit value is missing.
        InsufficientDataError: If fewer than two classical bit=0 spectra exist.
        BlindingViolationError: If a blinded quantity is about to be written.
    """
    settings = settings or AnalysisSettings()
    cl = settings.cl if cl is None else cl
    cfg = ledger.config
    analyzer = SimulatedAnalyzer(cfg, ledger.master_seed, ledger.epsilon_true)

    classical_entries = [
        e for e in ledger.entries_for(quantum=False) if ledger.bit_value(e.id) == 0
    ]
    if len(classical_entries) < 2:
        raise InsufficientDataError(
            f"need at least two classical bit=0 spectra, found {len(classical_entries)}"
        )
    logger.info("Analyzing %d classical bit=0 spectra", len(classical_entries))

    def classical_task(entry: LedgerEntry):
        calibrated, meas = _measure(_load_spectrum(ledger, entry, analyzer), sol, cfg.f0_hz, settings)
        try:
            fit = fit_chi2_2dof(calibrated.bins)
        except (DegenerateFitError, InsufficientDataError) as e:
            logger.warning("No chi2 fit for bit %d: %s", entry.id, e)
            fit = None
        return entry.id, meas, fit

    with ThreadPoolExecutor(max_workers=max(1, settings.workers)) as executor:
        outcomes = list(executor.map(classical_task, classical_entries))

    result = AnalysisResult(classical=None, quantum=None, excess_detected=None)
    result.classical_rows = [(bit_id, meas) for bit_id, meas, _ in outcomes]
    result.fits = [(bit_id, fit) for bit_id, _, fit in outcomes if fit is not None]

    c_excess = np.array([meas.excess_w for _, meas in result.classical_rows])
    p_applied = _p_applied(ledger, sol, settings)
    result.classical = build_limit_report(
        c_excess,
        cl,
        p_applied,
        CorrectionFactors.from_fidelities(
            settings.bandwidth_fraction, settings.f_readout_classical, settings.f_hadamard
        ),
        DatasetTag.CLASSICAL,
        settings.sigma_mode,
    )
    for bit_id, meas in result.classical_rows:
        logger.debug("bit %d: P_s=%.4g W, excess=%.4g W", bit_id, meas.p_s_w, meas.excess_w)

    # Quantum bit=0 values below are never logged and never leave memory under blinding.
    quantum_entries = ledger.entries_for(quantum=True)
    result.n_quantum_bits = len(quantum_entries)
    q_excess: List[float] = []
    for entry in quantum_entries:
        if ledger.bit_value(entry.id) != 0:
            continue
        _, meas = _measure(_load_spectrum(ledger, entry, analyzer), sol, cfg.f0_hz, settings)
        q_excess.append(meas.excess_w)

    if q_excess:
        c_spread = float(np.std(c_excess, ddof=1))
        result.excess_detected = compare_quantum_classical(
            float(np.mean(q_excess)), float(np.mean(c_excess)), c_spread, settings.k_sigma
        )
        if result.excess_detected:
            logger.warning("Quantum data exceed the classical mean by more than %g sigma", settings.k_sigma)
        elif len(q_excess) >= 2:
            result.quantum = build_limit_report(
                q_excess,
                cl,
                p_applied,
                CorrectionFactors.from_fidelities(
                    settings.bandwidth_fraction, settings.f_readout_quantum, settings.f_hadamard
                ),
                DatasetTag.QUANTUM,
                settings.sigma_mode,
            )
        else:
            logger.warning("Too few quantum bit=0 spectra for a quantum limit")

    if out_dir is not None:
        _write_outputs(ledger, sol, settings, result, q_excess, BlindedWriter(out_dir, policy))
    return result


def _write_outputs(
    ledger: RunLedger,
    sol: CalibrationSolution,
    settings: AnalysisSettings,
    result: AnalysisResult,
    q_excess: List[float],
    writer: BlindedWriter,
) -> None:
    writer.write_rows(
        ANALYSIS_FILE,
        ANALYSIS_COLUMNS,
        [
            (bit_id, m.p_s_w, m.sideband_mean_w, m.sideband_sigma_w, m.excess_w)
            for bit_id, m in result.classical_rows
        ],
        BitSource.CLASSICAL,
    )
    writer.write_rows(
        FITS_FILE,
        FIT_COLUMNS,
        [tuple([bit_id] + [fit.to_row()[c] for c in FIT_COLUMNS[1:]]) for bit_id, fit in result.fits],
        BitSource.CLASSICAL,
    )
    if settings.dump_quantum:
        writer.write_rows(
            QUANTUM_DUMP_FILE,
            ("excess_w",),
            [(value,) for value in q_excess],
            BitSource.QUBIT_A,
        )

    blind = writer.policy.enabled
    writer.write_report(
        result.classical.to_dict() if result.classical is not None else None,
        result.quantum_section(blind),
        extra={
            "calibration": sol.to_dict(),
            "synchronization": check_branch_synchronization(ledger.timing).to_dict(),
            "n_classical_bit0": len(result.classical_rows),
            "n_bits": len(ledger),
            "k_sigma": settings.k_sigma,
        },
        relpath=REPORT_FILE,
    )


def read_excesses(path: Path) -> np.ndarray:
    """Excess powers (W) from the ``excess_w`` column of an analysis file.

    Raises:
        IncompleteRunError: If the file is missing or has no ``excess_w`` column.
    """
    try:
        with open(path, newline="", encoding="utf-8") as f:
            rows = list(csv.DictReader(f))
    except OSError as e:
        raise IncompleteRunError(f"cannot read {path}: {e}") from e
    if rows and "excess_w" not in rows[0]:
        raise IncompleteRunError(f"{path} has no excess_w column")
    return np.array([float(row["excess_w"]) for row in rows])
