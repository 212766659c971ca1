"""
Test configuration and fixtures for nlqm-sim.

Provides small chains, mixed samples and completed runs shared by the
bit generation, analysis, blinding and command tests.
"""

import sys
from pathlib import Path
from typing import Dict
from unittest.mock import patch

import pytest

# Add the project root to the Python path so imports work
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src import keyring_store  # noqa: E402
from src.bitgen import generate_mixed_sample  # noqa: E402
from src.bitgen.models import BitRecord, BitSource, MixedSample  # noqa: E402
from src.calibration import solution_for_chain  # noqa: E402
from src.rfchain.chain import ChainConfig  # noqa: E402
from src.runner import BlindingPolicy, TimingProfile, run_experiment  # noqa: E402


class MemoryKeyring:
    """In-memory stand-in for the system keyring backend."""

    def __init__(self):
        self.passwords: Dict[tuple, str] = {}

    def get_password(self, service, username):
        return self.passwords.get((service, username))

    def set_password(self, service, username, password):
        self.passwords[(service, username)] = password

    def delete_password(self, service, username):
        self.passwords.pop((service, username), None)

@pytest.fixture(autouse=True)
def memory_keyring():
    """Keep sealing keys off the user's real keyring."""
    backend = MemoryKeyring()
    with patch.object(keyring_store, "KEYRING_AVAILABLE", True), patch.object(
        keyring_store, "keyring", backend, create=True
    ), patch.dict(keyring_store._session, clear=True):
        yield backend

@pytest.fixture
def chain() -> ChainConfig:
    """The default chain: 1 Hz span of 1 mHz bins around 2.5 GHz."""
    return ChainConfig()

@pytest.fixture
def calibration(chain):
    """Calibration solved from the default chain's own readings."""
    return solution_for_chain(chain)

@pytest.fixture
def timing() -> TimingProfile:
    return TimingProfile()

@pytest.fixture
def mixed_sample() -> MixedSample:
    """The 66-bit default sample: 25 classical, 21 + 20 qubit bits."""
    return generate_mixed_sample(25, 21, 20, seed=7)

def make_sample(values: Dict[BitSource, list]) -> MixedSample:
    """Build a sample with fixed values, sources in the given order."""
    bits = []
    for source, source_values in values.items():
        for origin, value in enumerate(source_values):
            bits.append(BitRecord(id=len(bits), source=source, value=value, origin=origin))
    return MixedSample(bits=bits, provenance_seed=0)

@pytest.fixture
def small_sample() -> MixedSample:
    """Six classical and six quantum bits with three zeros each."""
    return make_sample(
        {
            BitSource.CLASSICAL: [0, 1, 0, 1, 0, 1],
            BitSource.QUBIT_A: [0, 1, 0],
            BitSource.QUBIT_B: [1, 0, 1],
        }
    )

@pytest.fixture
def blinded_run(tmp_path, chain, mixed_sample, timing):
    """A completed blinded run with epsilon_true = 0 written to ``tmp_path/run``."""
    run_dir = tmp_path / "run"
    ledger = run_experiment(
        chain,
        mixed_sample,
        timing,
        epsilon_true=0.0,
        seed=11,
        run_dir=run_dir,
        policy=BlindingPolicy(enabled=True),
    )
    return run_dir, ledger

def read_all_text(root: Path) -> Dict[Path, str]:
    """Contents of every file below ``root``, decoded leniently."""
    return {
        path: path.read_text(encoding="utf-8", errors="replace")
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }

def write_run_config(directory: Path, **overrides) -> Path:
    """Write a small run config (16 classical, 6 + 6 qubit bits) and return its path."""
    values = {
        "seed": 3,
        "epsilon_true": 0.0,
        "n_classical": 16,
        "n_qubit_a": 6,
        "n_qubit_b": 6,
        "blind": "true",
    }
    values.update(overrides)
    path = directory / "run.cfg"
    path.write_text("".join(f"{k}={v}\n" for k, v in values.items()), encoding="utf-8")
    return path
