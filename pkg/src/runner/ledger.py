"""Run ledger: one entry per processed bit plus the run header.

On disk a run directory holds ``run.json`` (master seed, config snapshot,
timing, blinding flag), ``ledger.jsonl`` (one JSON object per bit),
``bits.csv`` with its sealed companion, and ``spectra/NNNN.csv``.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..bitgen.io import read_bits_csv
from ..bitgen.models import BitSource, MixedSample
from ..errors import ConfigError, IncompleteRunError
from ..rfchain.chain import ChainConfig, SwitchState
from ..rfchain.spectrum import RawSpectrum
from .blinding import QUANTUM_LEDGER_FIELDS, BlindedWriter
from .timing import TimingProfile

RUN_FILE = "run.json"
LEDGER_FILE = "ledger.jsonl"
BITS_FILE = "bits.csv"
SPECTRA_DIR = "spectra"


def spectrum_relpath(bit_id: int) -> str:
    return f"{SPECTRA_DIR}/{bit_id:04d}.csv"


@dataclass(frozen=True)
class LedgerEntry:
    """What happened for one bit.

    A ``sealed`` entry belongs to a blinded quantum bit: its value, switch
    state and action sequence are known only in memory, and its spectrum
    is never written.
    """

    id: int
    source: BitSource
    start_s: float
    end_s: float
    acquisition_key: int
    bit: Optional[int] = None
    switch_state: Optional[SwitchState] = None
    actions: Tuple[Tuple[str, float], ...] = ()
    spectrum_file: Optional[str] = None
    sealed: bool = False

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "id": self.id,
            "source": BitSource(self.source).value,
            "start_s": self.start_s,
            "end_s": self.end_s,
            "acquisition_key": self.acquisition_key,
            "sealed": self.sealed,
        }
        if self.sealed:
            return {k: v for k, v in data.items() if k in QUANTUM_LEDGER_FIELDS}
        data.update(
            {
                "bit": self.bit,
                "switch_state": self.switch_state.to_dict() if self.switch_state else None,
                "actions": [[name, t] for name, t in self.actions],
                "spectrum_file": self.spectrum_file,
            }
        )
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LedgerEntry":
        state = data.get("switch_state")
        return cls(
            id=int(data["id"]),
            source=BitSource(data["source"]),
            start_s=float(data["start_s"]),
            end_s=float(data["end_s"]),
            acquisition_key=int(data["acquisition_key"]),
            bit=data.get("bit"),
            switch_state=SwitchState.from_dict(state) if state else None,
            actions=tuple((str(n), float(t)) for n, t in data.get("actions", [])),
            spectrum_file=data.get("spectrum_file"),
            sealed=bool(data.get("sealed", False)),
        )


@dataclass
class RunLedger:
    """Header and entries of one run.

    ``sample`` holds the full bit sample (quantum values included) and
    ``spectra`` the spectra acquired in this process; neither is serialized
    directly.
    """

    master_seed: int
    config: ChainConfig
    timing: TimingProfile
    epsilon_true: float
    blinding: bool
    entries: List[LedgerEntry] = field(default_factory=list)
    sample: Optional[MixedSample] = None
    spectra: Dict[int, RawSpectrum] = field(default_factory=dict)
    run_dir: Optional[Path] = None

    def __len__(self) -> int:
        return len(self.entries)

    def header(self) -> Dict[str, Any]:
        return {
            "master_seed": self.master_seed,
            "epsilon_true": self.epsilon_true,
            "blinding": self.blinding,
            "config": self.config.to_dict(),
            "timing": self.timing.to_dict(),
            "n_bits": len(self.entries),
            "prng": dict(self.sample.prng) if self.sample is not None else {},
        }

    def bit_value(self, bit_id: int) -> int:
        """Value of a bit, resolved in memory for sealed entries.

        Raises:
            IncompleteRunError: If the value is not available.
        """
        if self.sample is not None:
            for record in self.sample.bits:
                if record.id == bit_id:
                    return record.value
        for entry in self.entries:
            if entry.id == bit_id and entry.bit is not None:
                return int(entry.bit)
        raise IncompleteRunError(f"value of bit {bit_id} is not available")

    def entries_for(self, quantum: bool) -> List[LedgerEntry]:
        return [e for e in self.entries if BitSource(e.source).is_quantum == quantum]

    def save(self, writer: BlindedWriter) -> None:
        """Write bits, ledger lines and the run header through ``writer``."""
        if self.sample is not None:
            writer.write_bits(self.sample, BITS_FILE)
        (writer.root / LEDGER_FILE).unlink(missing_ok=True)
        for entry in self.entries:
            writer.append_ledger_entry(entry.to_dict(), LEDGER_FILE)
        writer.write_json(RUN_FILE, self.header())
        self.run_dir = writer.root

    @classmethod
    def load(cls, run_dir: Path) -> "RunLedger":
        """Load a run directory written by ``run_experiment``.

        Raises:
            IncompleteRunError: If a file is missing or the ledger is short.
            ConfigError: If a file cannot be parsed.
        """
        run_dir = Path(run_dir)
        run_file = run_dir / RUN_FILE
        ledger_file = run_dir / LEDGER_FILE
        if not run_file.exists():
            raise IncompleteRunError(f"{run_file} is missing")
        try:
            with open(run_file, "r", encoding="utf-8") as f:
                header = json.load(f)
            entries: List[LedgerEntry] = []
            if ledger_file.exists():
                with open(ledger_file, "r", encoding="utf-8") as f:
                    entries = [LedgerEntry.from_dict(json.loads(line)) for line in f if line.strip()]
            config = ChainConfig(**header["config"])
            timing = TimingProfile.from_dict(header["timing"])
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
            raise ConfigError(f"cannot read run directory {run_dir}: {e}") from e

        expected = int(header.get("n_bits", 0))
        if len(entries) != expected:
            raise IncompleteRunError(f"ledger has {len(entries)} entries, run.json declares {expected}")

        bits_file = run_dir / BITS_FILE
        sample = read_bits_csv(bits_file) if bits_file.exists() else None
        if sample is None and expected:
            raise IncompleteRunError(f"{bits_file} is missing")
        logging.debug("Loaded run %s with %d entries", run_dir, len(entries))
        return cls(
            master_seed=int(header["master_seed"]),
            config=config,
            timing=timing,
            epsilon_true=float(header["epsilon_true"]),
            blinding=bool(header["blinding"]),
            entries=entries,
            sample=sample,
            run_dir=run_dir,
        )
