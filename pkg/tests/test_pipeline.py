"""Tests for the reproduce pipeline (commands/pipeline.py).

The pipeline uses late (local) imports inside run_reproduce, so patches
target the source package rather than the pipeline module.
"""

import json
from unittest.mock import patch

from src.errors import BlindingViolationError
from src.limits import PERMITTED_OUTPUTS, REPORT_META_FIELDS
from tests.conftest import write_run_config


def _reproduce(tmp_path, **overrides):
    from src.commands.pipeline import run_reproduce

    return run_reproduce(
        tmp_path / "out", config_path=write_run_config(tmp_path, **overrides), show_progress=False
    )


class TestRunReproduce:
    def test_null_run_writes_all_stages(self, tmp_path):
        assert _reproduce(tmp_path) == 0
        out = tmp_path / "out"
        for name in ("bits.csv", "bits.csv.sealed", "bits_manifest.txt", "calibration.cfg"):
            assert (out / name).exists(), name
        run_dir = out / "run"
        assert (run_dir / "run.json").exists()
        assert (run_dir / "analysis.csv").exists()

    def test_manifests(self, tmp_path):
        assert _reproduce(tmp_path) == 0
        out = tmp_path / "out"
        bits = (out / "bits_manifest.txt").read_text(encoding="utf-8").splitlines()
        assert bits == ["# bits", "bits.csv", "bits.csv.sealed"]
        outputs = (out / "manifest.txt").read_text(encoding="utf-8").splitlines()
        assert outputs[0] == "# reproduce outputs"
        for name in ("bits.csv", "calibration.cfg", "run/run.json", "run/report.json", "run/ledger.jsonl"):
            assert name in outputs

    def test_log_marks_each_stage(self, tmp_path):
        assert _reproduce(tmp_path) == 0
        log = (tmp_path / "out" / "nlqm.log").read_text(encoding="utf-8")
        stages = [log.index(f"---- [{i}/4]") for i in range(1, 5)]
        assert stages == sorted(stages)

    def test_blinded_report(self, tmp_path):
        assert _reproduce(tmp_path) == 0
        report = json.loads((tmp_path / "out" / "run" / "report.json").read_text(encoding="utf-8"))
        assert report["blinding"] is True
        assert report["classical"]["epsilon_limit"] > 0
        quantum = report["quantum"]
        assert quantum["excess_detected"] is False
        assert set(quantum) <= PERMITTED_OUTPUTS | REPORT_META_FIELDS

    def test_large_leakage_reports_detection_only(self, tmp_path):
        assert _reproduce(tmp_path, epsilon_true=1e-10) == 0
        report = json.loads((tmp_path / "out" / "run" / "report.json").read_text(encoding="utf-8"))
        assert report["quantum"] == {"excess_detected": True}

    def test_unblinded_run_keeps_quantum_spectra(self, tmp_path):
        from src.commands.pipeline import run_reproduce

        cfg = write_run_config(tmp_path)
        assert run_reproduce(tmp_path / "out", config_path=cfg, blind=False, show_progress=False) == 0
        out = tmp_path / "out"
        assert not (out / "bits.csv.sealed").exists()
        header = json.loads((out / "run" / "run.json").read_text(encoding="utf-8"))
        spectra = list((out / "run" / "spectra").glob("*.csv"))
        assert len(spectra) == header["n_bits"]

    def test_progress_and_summary(self, tmp_path, capsys):
        assert _reproduce(tmp_path) == 0
        output = capsys.readouterr().out
        for stage in ("[1/4]", "[2/4]", "[3/4]", "[4/4]"):
            assert stage in output
        assert "Summary" in output
        assert "Classical  : epsilon <" in output


class TestRunReproduceFailures:
    def test_invalid_chain_config(self, tmp_path):
        assert _reproduce(tmp_path, span_hz=0.0015) == 1
        assert not (tmp_path / "out" / "bits.csv").exists()

    def test_unsynchronized_branches(self, tmp_path):
        assert _reproduce(tmp_path, **{"timing.bit0.acquire_spectrum_s": 1000.25}) == 1
        assert not (tmp_path / "out" / "run").exists()

    def test_blinding_violation_in_run(self, tmp_path):
        with patch("src.runner.run_experiment", side_effect=BlindingViolationError("leak")):
            assert _reproduce(tmp_path) == 3

    def test_blinding_violation_in_analysis(self, tmp_path):
        with patch("src.runner.analyze", side_effect=BlindingViolationError("leak")):
            assert _reproduce(tmp_path) == 3

    def test_too_few_classical_bits(self, tmp_path, capsys):
        assert _reproduce(tmp_path, n_classical=1) == 1
        assert "Analysis failed" in capsys.readouterr().out
