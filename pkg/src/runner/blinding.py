"""Blinding policy and the single writer through which every run artifact leaves memory.

Quantum-source data may exist in memory during a run or an analysis, but
with blinding enabled the writer refuses any file content that carries a
quantum bit value, a quantum per-bin power, a quantum P_s or an aggregate
of quantum powers beyond the permitted outputs.
"""

import csv
import json
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence

from ..bitgen.io import write_bits_csv
from ..bitgen.models import BitSource, MixedSample
from ..errors import BlindingViolationError
from ..limits.report import PERMITTED_OUTPUTS, REPORT_META_FIELDS, DatasetTag
from ..rfchain.io import write_spectrum
from ..rfchain.spectrum import RawSpectrum

# The only fields a ledger entry of a blinded quantum bit may carry.
QUANTUM_LEDGER_FIELDS: FrozenSet[str] = frozenset(
    {"id", "source", "start_s", "end_s", "acquisition_key", "sealed"}
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlindingPolicy:
    enabled: bool = True
    permitted_outputs: FrozenSet[str] = field(default_factory=lambda: PERMITTED_OUTPUTS)

    def blocks(self, source: BitSource) -> bool:
        return self.enabled and BitSource(source).is_quantum


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


class BlindedWriter:
    """Writes run artifacts below ``root`` after checking them against the policy.

    All writes hold one lock, so analysis workers may share a writer.
    """

    def __init__(self, root: Path, policy: BlindingPolicy):
        self.root = Path(root)
        self.policy = policy
        self.written: List[Path] = []
        self._lock = threading.Lock()

    def _violation(self, what: str, field_name: str = "") -> BlindingViolationError:
        logger.error("Blocked write of blinded data: %s", what)
        return BlindingViolationError(f"refusing to write blinded quantum data: {what}", field_name)

    def _target(self, relpath: str) -> Path:
        path = self.root / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def write_spectrum(self, spectrum: RawSpectrum, relpath: str, source: BitSource) -> Path:
        if self.policy.blocks(source):
            raise self._violation(f"spectrum of a {BitSource(source).value} bit", "bins")
        with self._lock:
            path = write_spectrum(spectrum, self._target(relpath))
            self.written.extend([path, path.with_suffix(".json")])
        return path

    def write_bits(self, sample: MixedSample, relpath: str = "bits.csv") -> List[Path]:
        """Write the bit sample; quantum values go to the sealed companion when blinded."""
        with self._lock:
            paths = write_bits_csv(sample, self._target(relpath), blind=self.policy.enabled)
            self.written.extend(paths)
        return paths

    def append_ledger_entry(self, entry: Mapping[str, Any], relpath: str = "ledger.jsonl") -> Path:
        source = BitSource(entry["source"])
        if self.policy.blocks(source):
            extra = sorted(set(entry) - QUANTUM_LEDGER_FIELDS)
            if extra:
                raise self._violation(f"ledger fields {extra} of a quantum bit", extra[0])
        with self._lock:
            path = self._target(relpath)
            with open(path, "a", encoding="utf-8") as f:
                f.write(json.dumps(dict(entry), sort_keys=True) + "\n")
            if path not in self.written:
                self.written.append(path)
        return path

    def write_rows(
        self,
        relpath: str,
        header: Sequence[str],
        rows: Iterable[Sequence[Any]],
        source: BitSource,
    ) -> Path:
        """Write a CSV table whose rows all derive from ``source`` data."""
        if self.policy.blocks(source):
            raise self._violation(f"per-bit rows of {BitSource(source).value} data", "rows")
        with self._lock:
            path = self._target(relpath)
            with open(path, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(header)
                writer.writerows(rows)
            self.written.append(path)
        return path

    def write_json(self, relpath: str, payload: Mapping[str, Any]) -> Path:
        """Write a JSON document that holds no quantum-derived values."""
        with self._lock:
            path = self._target(relpath)
            path.write_text(dump_json(payload), encoding="utf-8")
            if path not in self.written:
                self.written.append(path)
        return path

    def write_report(
        self,
        classical: Optional[Mapping[str, Any]],
        quantum: Optional[Mapping[str, Any]],
        extra: Optional[Dict[str, Any]] = None,
        relpath: str = "report.json",
    ) -> Path:
        """Write the report; the quantum section is checked field by field."""
        if quantum is not None and self.policy.enabled:
            allowed = self.policy.permitted_outputs | REPORT_META_FIELDS
            extra_fields = sorted(set(quantum) - allowed)
            if extra_fields:
                raise self._violation(f"quantum report fields {extra_fields}", extra_fields[0])
        payload: Dict[str, Any] = dict(extra or {})
        payload["blinding"] = self.policy.enabled
        payload["classical"] = dict(classical) if classical is not None else None
        payload["quantum"] = dict(quantum) if quantum is not None else None
        return self.write_json(relpath, payload)

    def write_limit(self, limit: Mapping[str, Any], relpath: str = "limit.json") -> Path:
        """Write one limit report; a quantum one is checked like a report's quantum section."""
        if self.policy.enabled and limit.get("dataset_tag") == DatasetTag.QUANTUM.value:
            allowed = self.policy.permitted_outputs | REPORT_META_FIELDS
            extra_fields = sorted(set(limit) - allowed)
            if extra_fields:
                raise self._violation(f"quantum limit fields {extra_fields}", extra_fields[0])
        return self.write_json(relpath, limit)
