"""Tests for branch timing, the control loop and the run ledger."""

import json

import numpy as np
import pytest

from src.bitgen.models import BitSource, MixedSample
from src.errors import ConfigError, DomainError, IncompleteRunError, SynchronizationError
from src.rfchain import BIT0_SWITCH_STATE, BIT1_SWITCH_STATE, leakage_profile
from src.runner import (
    BlindingPolicy,
    LedgerEntry,
    RunLedger,
    SimulatedAnalyzer,
    TimingProfile,
    check_branch_synchronization,
    run_experiment,
)
from src.runner.ledger import LEDGER_FILE, RUN_FILE, spectrum_relpath
from src.runner.timing import BIT0_STEPS, BIT1_STEPS


class TestTiming:
    def test_default_branches_match(self, timing):
        assert timing.total(0) == pytest.approx(1002.0)
        assert timing.total(1) == pytest.approx(1002.0)
        report = check_branch_synchronization(timing)
        assert report.passed
        assert report.to_dict()["pass"] is True

    def test_step_order(self, timing):
        assert tuple(name for name, _ in timing.steps(0)) == BIT0_STEPS
        assert tuple(name for name, _ in timing.steps(1)) == BIT1_STEPS
        with pytest.raises(DomainError):
            timing.steps(2)

    def test_half_second_gap_fails(self, timing):
        skewed = TimingProfile(bit0=timing.bit0, bit1=dict(timing.bit1, dwell=999.5))
        report = check_branch_synchronization(skewed)
        assert not report.passed
        assert report.delta_s == pytest.approx(0.5)

    def test_tolerance(self, timing):
        skewed = TimingProfile(bit0=timing.bit0, bit1=dict(timing.bit1, dwell=999.5), tolerance_s=0.5)
        assert check_branch_synchronization(skewed).passed

    def test_slot_is_longer_branch(self, timing):
        skewed = TimingProfile(bit0=timing.bit0, bit1=dict(timing.bit1, dwell=998.6), tolerance_s=0.5)
        assert skewed.slot_s() == pytest.approx(1002.0)
        assert timing.slot_s() == pytest.approx(1002.0)

    @pytest.mark.parametrize("k", [0.001, 0.37, 3.0])
    def test_scaled_profile_stays_synchronized(self, timing, k):
        assert check_branch_synchronization(timing.scaled(k)).passed

    def test_bad_profiles(self, timing):
        with pytest.raises(ConfigError):
            TimingProfile(bit0={"acquire_spectrum": 1.0})
        with pytest.raises(ConfigError):
            TimingProfile(bit0=dict(timing.bit0, terminate_input=-1.0))
        with pytest.raises(DomainError):
            timing.scaled(0.0)

    def test_dict_round_trip(self, timing):
        assert TimingProfile.from_dict(timing.to_dict()) == timing


class TestRunExperiment:
    def test_one_entry_per_bit(self, chain, mixed_sample, timing):
        ledger = run_experiment(chain, mixed_sample, timing, 0.0, seed=3)
        assert len(ledger) == 66
        assert [e.id for e in ledger.entries] == list(range(66))
        assert set(ledger.spectra) == set(range(66))

    def test_clock_advances_by_branch_total(self, chain, small_sample, timing):
        ledger = run_experiment(chain, small_sample, timing, 0.0, seed=3)
        for i, entry in enumerate(ledger.entries):
            assert entry.start_s == pytest.approx(1002.0 * i)
            assert entry.end_s - entry.start_s == pytest.approx(1002.0)
            assert entry.actions[0] == ("configure_switches", entry.start_s)

    def test_switch_states_follow_bits(self, chain, small_sample, timing):
        ledger = run_experiment(chain, small_sample, timing, 0.0, seed=3)
        for entry, record in zip(ledger.entries, small_sample):
            expected = BIT0_SWITCH_STATE if record.value == 0 else BIT1_SWITCH_STATE
            assert entry.switch_state == expected

    def test_empty_sample(self, chain, timing):
        ledger = run_experiment(chain, MixedSample(bits=[], provenance_seed=0), timing, 0.0, seed=1)
        assert len(ledger) == 0
        assert not ledger.spectra

    def test_deterministic(self, chain, small_sample, timing):
        a = run_experiment(chain, small_sample, timing, 1e-12, seed=5)
        b = run_experiment(chain, small_sample, timing, 1e-12, seed=5)
        for bit_id, spectrum in a.spectra.items():
            np.testing.assert_array_equal(spectrum.bins, b.spectra[bit_id].bins)

    def test_leakage_only_in_quantum_bit0(self, chain, small_sample, timing):
        eps = 1e-12
        null = run_experiment(chain, small_sample, timing, 0.0, seed=5)
        leaky = run_experiment(chain, small_sample, timing, eps, seed=5)
        profile = leakage_profile(chain, eps)
        for record in small_sample:
            diff = leaky.spectra[record.id].bins - null.spectra[record.id].bins
            if record.source.is_quantum and record.value == 0:
                np.testing.assert_allclose(diff, profile, rtol=1e-9)
                assert int(np.argmax(diff)) == chain.center_index
            else:
                assert not diff.any()

    def test_classical_branches_symmetric(self, chain, small_sample, timing):
        ledger = run_experiment(chain, small_sample, timing, 1e-12, seed=5)
        durations = {entry.end_s - entry.start_s for entry in ledger.entries}
        assert len(durations) == 1

    def test_unsynchronized_timing_refused(self, chain, small_sample, timing, tmp_path):
        skewed = TimingProfile(bit0=timing.bit0, bit1=dict(timing.bit1, dwell=999.5))
        with pytest.raises(SynchronizationError):
            run_experiment(chain, small_sample, skewed, 0.0, seed=1, run_dir=tmp_path / "run")
        assert not (tmp_path / "run").exists()

    def test_analyzer_reacquires_same_spectrum(self, chain, small_sample, timing):
        ledger = run_experiment(chain, small_sample, timing, 2e-12, seed=9)
        analyzer = SimulatedAnalyzer(chain, 9, 2e-12)
        for record in small_sample:
            np.testing.assert_array_equal(analyzer.acquire(record).bins, ledger.spectra[record.id].bins)


class TestLedgerFiles:
    def test_unblinded_run_writes_everything(self, tmp_path, chain, small_sample, timing):
        run_dir = tmp_path / "run"
        run_experiment(
            chain, small_sample, timing, 0.0, seed=2, run_dir=run_dir, policy=BlindingPolicy(False)
        )
        for bit_id in range(len(small_sample)):
            assert (run_dir / spectrum_relpath(bit_id)).exists()
        header = json.loads((run_dir / RUN_FILE).read_text(encoding="utf-8"))
        assert header["n_bits"] == 12
        assert header["blinding"] is False

    def test_load_round_trip(self, tmp_path, chain, small_sample, timing):
        run_dir = tmp_path / "run"
        ledger = run_experiment(
            chain, small_sample, timing, 0.0, seed=2, run_dir=run_dir, policy=BlindingPolicy(False)
        )
        loaded = RunLedger.load(run_dir)
        assert loaded.entries == ledger.entries
        assert loaded.config == chain
        assert loaded.timing == timing
        assert loaded.master_seed == 2
        assert loaded.sample.bits == small_sample.bits
        assert not loaded.spectra

    def test_blinded_load_resolves_values_in_memory(self, blinded_run, mixed_sample):
        run_dir, ledger = blinded_run
        loaded = RunLedger.load(run_dir)
        assert loaded.blinding is True
        for record in mixed_sample:
            assert loaded.bit_value(record.id) == record.value
        sealed = [e for e in loaded.entries if e.sealed]
        assert len(sealed) == 41
        assert all(e.bit is None and e.spectrum_file is None for e in sealed)

    def test_sealed_entry_dict(self):
        entry = LedgerEntry(
            id=4,
            source=BitSource.QUBIT_A,
            start_s=0.0,
            end_s=1002.0,
            acquisition_key=17,
            bit=0,
            switch_state=BIT0_SWITCH_STATE,
            actions=(("configure_switches", 0.0),),
            sealed=True,
        )
        data = entry.to_dict()
        assert "bit" not in data and "switch_state" not in data and "actions" not in data
        assert LedgerEntry.from_dict(data).bit is None

    def test_missing_run_file(self, tmp_path):
        with pytest.raises(IncompleteRunError):
            RunLedger.load(tmp_path)

    def test_truncated_ledger(self, blinded_run):
        run_dir, _ = blinded_run
        lines = (run_dir / LEDGER_FILE).read_text(encoding="utf-8").splitlines()
        (run_dir / LEDGER_FILE).write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")
        with pytest.raises(IncompleteRunError):
            RunLedger.load(run_dir)

    def test_corrupt_header(self, blinded_run):
        run_dir, _ = blinded_run
        (run_dir / RUN_FILE).write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError):
            RunLedger.load(run_dir)

    def test_unknown_bit_value(self, chain, timing):
        ledger = RunLedger(master_seed=0, config=chain, timing=timing, epsilon_true=0.0, blinding=True)
        with pytest.raises(IncompleteRunError):
            ledger.bit_value(3)
