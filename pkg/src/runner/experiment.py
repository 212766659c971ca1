"""The per-bit control loop and the simulated spectrum analyzer.

For every bit of the mixed sample the loop sets the switches for that
bit, runs the branch's action sequence on a simulated clock and acquires
one spectrum. Leakage from the other branch only exists when the bit came
from a qubit: a classical bit never splits the world, so classical spectra
are the control sample.
"""

import logging
from pathlib import Path
from typing import Optional

from ..bitgen.models import BitRecord, BitSource, MixedSample
from ..errors import SynchronizationError
from ..rfchain.chain import ChainConfig, switch_state_for
from ..rfchain.spectrum import RawSpectrum, synthesize_spectrum
from ..utils.console import create_progress
from ..utils.seeding import STREAM_SPECTRUM, derive_seed
from .blinding import BlindedWriter, BlindingPolicy
from .ledger import LedgerEntry, RunLedger, spectrum_relpath
from .timing import TimingProfile, check_branch_synchronization

logger = logging.getLogger(__name__)


class SimulatedAnalyzer:
    """Stands in for the spectrum analyzer.

    A spectrum is a pure function of the chain, the master seed, the true
    epsilon and the bit, so a spectrum that was never written can be
    acquired again into memory.
    """

    def __init__(self, cfg: ChainConfig, master_seed: int, epsilon_true: float):
        self.cfg = cfg
        self.master_seed = master_seed
        self.epsilon_true = epsilon_true

    def acquisition_key(self, bit_id: int) -> int:
        return derive_seed(self.master_seed, STREAM_SPECTRUM, bit_id)

    def leakage_epsilon(self, source: BitSource, bit: int) -> float:
        return self.epsilon_true if BitSource(source).is_quantum and bit == 0 else 0.0

    def acquire(self, record: BitRecord) -> RawSpectrum:
        return synthesize_spectrum(
            self.cfg,
            record.value,
            self.leakage_epsilon(record.source, record.value),
            self.acquisition_key(record.id),
        )


def run_experiment(
    cfg: ChainConfig,
    sample: MixedSample,
    timing: TimingProfile,
    epsilon_true: float,
    seed: int,
    run_dir: Optional[Path] = None,
    policy: Optional[BlindingPolicy] = None,
    show_progress: bool = False,
) -> RunLedger:
    """Run the control loop over every bit of ``sample``.

    Args:
        cfg: Chain constants.
        sample: Mixed bit sample, processed in order.
        timing: Step durations of both branches.
        epsilon_true: Leakage injected into quantum bit=0 spectra.
        seed: Master seed of the spectrum substreams.
        run_dir: If given, the run is written there.
        policy: Blinding policy for the written artifacts.
        show_progress: Show a progress bar.

    Returns:
        RunLedger with one entry per bit and the acquired spectra in memory.

    Raises:
        SynchronizationError: If the two branches take different times.
    """
    policy = policy or BlindingPolicy()
    sync = check_branch_synchronization(timing)
    if not sync.passed:
        raise SynchronizationError(
            f"branch durations differ by {sync.delta_s:.6g} s "
            f"(bit0 {sync.total_bit0_s:.6g} s, bit1 {sync.total_bit1_s:.6g} s)",
            sync.delta_s,
        )

    analyzer = SimulatedAnalyzer(cfg, seed, epsilon_true)
    writer = BlindedWriter(run_dir, policy) if run_dir is not None else None
    ledger = RunLedger(
        master_seed=seed,
        config=cfg,
        timing=timing,
        epsilon_true=epsilon_true,
        blinding=policy.enabled,
        sample=sample,
    )

    # a bit whose branch finishes early idles to the end of its slot
    slot = timing.slot_s()
    clock = 0.0
    with create_progress(disable=not show_progress) as progress:
        task = progress.add_task("Processing bits", total=len(sample))
        for record in sample:
            state = switch_state_for(record.value)
            actions = []
            t = clock
            for name, duration in timing.steps(record.value):
                actions.append((name, t))
                t += duration
            end = clock + slot

            spectrum = analyzer.acquire(record)
            ledger.spectra[record.id] = spectrum
            sealed = policy.blocks(record.source)
            relpath = None
            if writer is not None and not sealed:
                relpath = spectrum_relpath(record.id)
                writer.write_spectrum(spectrum, relpath, record.source)

            ledger.entries.append(
                LedgerEntry(
                    id=record.id,
                    source=record.source,
                    start_s=clock,
                    end_s=end,
                    acquisition_key=analyzer.acquisition_key(record.id),
                    bit=record.value,
                    switch_state=state,
                    actions=tuple(actions),
                    spectrum_file=relpath,
                    sealed=sealed,
                )
            )
            clock = end
            progress.update(task, advance=1)

    if writer is not None:
        ledger.save(writer)
    logger.info("Processed %d bits in %.1f simulated seconds", len(sample), clock)
    return ledger
