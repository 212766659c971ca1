"""Spectrum files: ``frequency_hz,power_dbm`` CSV plus a JSON sidecar."""

import json
import logging
from pathlib import Path
from typing import Any, Dict

import numpy as np

from ..errors import IncompleteRunError
from .chain import ReferencePlane, SwitchState
from .spectrum import CalibratedSpectrum, RawSpectrum
from .units import dbm_to_watts, watts_to_dbm

SPECTRUM_HEADER = "frequency_hz,power_dbm"

logger = logging.getLogger(__name__)


def sidecar_path(path: Path) -> Path:
    return path.with_suffix(".json")


def spectrum_metadata(spec: RawSpectrum) -> Dict[str, Any]:
    return {
        "reference_plane": spec.reference_plane.value,
        "rbw_hz": spec.rbw_hz,
        "bin_hz": spec.bin_hz,
        "f_start_hz": spec.f_start_hz,
        "n_bins": spec.n_bins,
        "seed": spec.seed,
        "bit": spec.bit,
        "epsilon": spec.epsilon,
        "switch_state": spec.switch_state.to_dict() if spec.switch_state else None,
        "warnings": list(spec.warnings),
    }


def write_spectrum(spec: RawSpectrum, path: Path) -> Path:
    """Write ``spec`` to ``path`` and its metadata to the ``.json`` sidecar."""
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack((spec.frequencies(), watts_to_dbm(spec.bins)))
    np.savetxt(path, table, fmt=("%.6f", "%.12f"), delimiter=",", header=SPECTRUM_HEADER, comments="")
    sidecar = sidecar_path(path)
    sidecar.write_text(json.dumps(spectrum_metadata(spec), indent=2, sort_keys=True), encoding="utf-8")
    logger.debug("Wrote spectrum (%d bins) to %s", spec.n_bins, path)
    return path


def read_spectrum(path: Path) -> RawSpectrum:
    """Read a spectrum written by :func:`write_spectrum`.

    Raises:
        IncompleteRunError: If the CSV or its sidecar is missing.
    """
    sidecar = sidecar_path(path)
    if not path.exists() or not sidecar.exists():
        raise IncompleteRunError(f"spectrum {path} or its metadata is missing")
    meta = json.loads(sidecar.read_text(encoding="utf-8"))
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    plane = ReferencePlane(meta["reference_plane"])
    cls = CalibratedSpectrum if plane is ReferencePlane.HEMT_INPUT else RawSpectrum
    return cls(
        f_start_hz=float(meta["f_start_hz"]),
        bin_hz=float(meta["bin_hz"]),
        bins=dbm_to_watts(table[:, 1]),
        reference_plane=plane,
        rbw_hz=float(meta["rbw_hz"]),
        switch_state=SwitchState.from_dict(meta["switch_state"]) if meta.get("switch_state") else None,
        seed=meta.get("seed"),
        bit=meta.get("bit"),
        epsilon=meta.get("epsilon"),
        warnings=tuple(meta.get("warnings", ())),
    )
