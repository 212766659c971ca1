"""Utility modules for nlqm-sim."""

import logging as _logging
from pathlib import Path
from typing import Iterable, List


def write_manifest(path: Path, items: Iterable[Path], label: str) -> List[str]:
    """Write a ``# label`` header and one path per line to *path*.

    Paths below the manifest's directory are written relative to it.
    Returns the listed entries. A failed write is logged, not raised.
    """
    root = path.parent
    entries = []
    for item in items:
        item = Path(item)
        try:
            entries.append(item.relative_to(root).as_posix())
        except ValueError:
            entries.append(str(item))
    try:
        root.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join([f"# {label}", *entries]) + "\n", encoding="utf-8")
        _logging.debug("Wrote %s manifest (%d entries): %s", label, len(entries), path)
    except OSError as exc:
        _logging.warning("Could not write %s manifest: %s", label, exc)
    return entries


def list_outputs(root: Path) -> List[Path]:
    """Every file below *root*, sorted."""
    return sorted(p for p in root.rglob("*") if p.is_file())
