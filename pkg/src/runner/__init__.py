"""The experiment control loop, blinding, run ledger, analysis and ensemble studies."""

from .analysis import AnalysisResult, AnalysisSettings, analyze, read_excesses
from .blinding import QUANTUM_LEDGER_FIELDS, BlindedWriter, BlindingPolicy
from .ensemble import LimitEnsemble, RecoveryResult, classical_limit_ensemble, signal_recovery_rate
from .experiment import SimulatedAnalyzer, run_experiment
from .ledger import LedgerEntry, RunLedger
from .timing import (
    SynchronizationReport,
    TimingProfile,
    check_branch_synchronization,
)

__all__ = [
    "QUANTUM_LEDGER_FIELDS",
    "AnalysisResult",
    "AnalysisSettings",
    "BlindedWriter",
    "BlindingPolicy",
    "LedgerEntry",
    "LimitEnsemble",
    "RecoveryResult",
    "RunLedger",
    "SimulatedAnalyzer",
    "SynchronizationReport",
    "TimingProfile",
    "analyze",
    "check_branch_synchronization",
    "classical_limit_ensemble",
    "read_excesses",
    "run_experiment",
    "signal_recovery_rate",
]
