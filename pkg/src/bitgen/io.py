"""Bit sample files.

``bits.csv`` has the columns ``id,source,value,origin`` preceded by ``#``
comment lines carrying the provenance. With blinding the value column is
left empty for qubit sources and the values go to ``bits.csv.sealed``:
a key id and a Fernet token. The key lives in the system keyring, so the
values are only ever decrypted in memory.
"""

import csv
import json
import logging
import secrets
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

from cryptography.fernet import Fernet, InvalidToken

from .. import keyring_store
from ..errors import ConfigError, IncompleteRunError
from .models import BitRecord, BitSource, MixedSample

SEALED_SUFFIX = ".sealed"
BITS_COLUMNS = ("id", "source", "value", "origin")

logger = logging.getLogger(__name__)


def seal_values(values: Mapping[int, int]) -> str:
    """Encrypt ``{bit id: value}`` under a fresh key kept in the keyring.

    Returns:
        ``"<key id> <token>"``.
    """
    key_id = secrets.token_hex(8)
    key = Fernet.generate_key()
    if not keyring_store.set_secret(keyring_store.seal_key_name(key_id), key.decode("ascii")):
        logger.warning(
            "System keyring unavailable: sealed values %s can only be read by this process", key_id
        )
    payload = json.dumps({str(k): int(v) for k, v in sorted(values.items())}).encode("utf-8")
    return f"{key_id} {Fernet(key).encrypt(payload).decode('ascii')}"


def unseal_values(token: str) -> Dict[int, int]:
    """Decrypt a token produced by :func:`seal_values`.

    Raises:
        IncompleteRunError: If the key is not in the keyring.
        ConfigError: If the token is corrupt.
    """
    key_id, _, body = token.strip().partition(" ")
    if not key_id or not body:
        raise ConfigError("sealed bit values are corrupt: missing key id")
    key = keyring_store.get_secret(keyring_store.seal_key_name(key_id))
    if not key:
        raise IncompleteRunError(f"no sealing key {key_id} in the keyring")
    try:
        data = json.loads(Fernet(key.encode("ascii")).decrypt(body.encode("ascii")))
    except (InvalidToken, ValueError) as exc:
        raise ConfigError(f"sealed bit values are corrupt: {exc!r}") from exc
    return {int(k): int(v) for k, v in data.items()}


def sealed_path(path: Path) -> Path:
    return path.with_name(path.name + SEALED_SUFFIX)


def write_bits_csv(sample: MixedSample, path: Path, blind: bool = True) -> List[Path]:
    """Write a mixed sample and return the files written."""
    path.parent.mkdir(parents=True, exist_ok=True)
    sealed: Dict[int, int] = {}
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# provenance_seed={sample.provenance_seed}\n")
        f.write(f"# blind={'true' if blind else 'false'}\n")
        for name, algo in sorted(sample.prng.items()):
            f.write(f"# prng.{name}={algo}\n")
        for name, sign in sorted(sample.amplitude_signs.items()):
            f.write(f"# amplitude_sign.{name}={sign}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(BITS_COLUMNS)
        for bit in sample.bits:
            if blind and bit.source.is_quantum:
                sealed[bit.id] = bit.value
                writer.writerow((bit.id, bit.source.value, "", bit.origin))
            else:
                writer.writerow((bit.id, bit.source.value, bit.value, bit.origin))

    written = [path]
    if sealed:
        companion = sealed_path(path)
        companion.write_text(seal_values(sealed) + "\n", encoding="ascii")
        written.append(companion)
    logger.debug("Wrote %d bits to %s (%d sealed)", len(sample), path, len(sealed))
    return written


def _parse_header(lines: List[str]) -> Tuple[Dict[str, str], List[str]]:
    meta: Dict[str, str] = {}
    body: List[str] = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    return meta, body


def read_bits_csv(path: Path, sealed_values: Optional[Mapping[int, int]] = None) -> MixedSample:
    """Read a bits file, resolving withheld values from the sealed companion.

    Raises:
        IncompleteRunError: If a withheld value cannot be resolved.
        ConfigError: If the file is malformed.
    """
    meta, body = _parse_header(path.read_text(encoding="utf-8").splitlines())
    if sealed_values is None:
        companion = sealed_path(path)
        sealed_values = (
            unseal_values(companion.read_text(encoding="ascii").strip())
            if companion.exists()
            else {}
        )

    bits: List[BitRecord] = []
    try:
        for row in csv.DictReader(body):
            bit_id = int(row["id"])
            raw = (row.get("value") or "").strip()
            if raw:
                value = int(raw)
            elif bit_id in sealed_values:
                value = sealed_values[bit_id]
            else:
                raise IncompleteRunError(f"value of bit {bit_id} is withheld and not sealed")
            bits.append(
                BitRecord(
                    id=bit_id,
                    source=BitSource(row["source"]),
                    value=value,
                    origin=int(row.get("origin") or 0),
                )
            )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"malformed bits file {path}: {exc}") from exc

    return MixedSample(
        bits=bits,
        provenance_seed=int(meta.get("provenance_seed", 0)),
        amplitude_signs={
            k.split(".", 1)[1]: int(v) for k, v in meta.items() if k.startswith("amplitude_sign.")
        },
        prng={k.split(".", 1)[1]: v for k, v in meta.items() if k.startswith("prng.")},
    )
