"""File formats for fields, spectra, masks, and run summaries.

The binary ``.cf64`` container is one JSON header line (grid geometry plus a
``kind`` tag) followed by the complex samples as little-endian float64
pairs (re, im), row-major.  Everything human-readable goes through CSV or
canonical JSON; all writers go through a temp-file + rename so readers never
observe a half-written artifact.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import os
import tempfile
from typing import Iterable, Sequence

import numpy as np

from .numerics import ComplexField2D, Grid2D, Spectrum2D

CF64_KINDS = ("field", "spectrum", "mask")


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_cf64(path: str, grid: Grid2D, values: np.ndarray, kind: str) -> None:
    """Write complex samples with their grid geometry."""
    if kind not in CF64_KINDS:
        raise ValueError(f"kind must be one of {CF64_KINDS}, got {kind!r}")
    arr = np.ascontiguousarray(values, dtype="<c16")
    if arr.shape != (grid.ny, grid.nx):
        raise ValueError(f"sample shape {arr.shape} does not match grid")
    header = {
        "format": "cf64/1",
        "kind": kind,
        "nx": grid.nx,
        "ny": grid.ny,
        "dx": grid.dx,
        "dy": grid.dy,
    }
    payload = json.dumps(header, sort_keys=True).encode() + b"\n" + arr.tobytes()
    _atomic_write(path, payload)


def load_cf64(path: str) -> tuple[Grid2D, np.ndarray, str]:
    """Read back a ``.cf64`` file; returns (grid, samples, kind)."""
    with open(path, "rb") as handle:
        header_line = handle.readline()
        raw = handle.read()
    header = json.loads(header_line)
    if header.get("format") != "cf64/1":
        raise ValueError(f"{path}: not a cf64 file")
    grid = Grid2D(header["nx"], header["ny"], header["dx"], header["dy"])
    expected = grid.nx * grid.ny * 16
    if len(raw) != expected:
        raise ValueError(
            f"{path}: payload is {len(raw)} bytes, expected {expected}"
        )
    values = np.frombuffer(raw, dtype="<c16").reshape(grid.ny, grid.nx).copy()
    return grid, values, header["kind"]


def save_field(path: str, field: ComplexField2D) -> None:
    save_cf64(path, field.grid, field.values, "field")


def save_spectrum(path: str, spectrum: Spectrum2D) -> None:
    save_cf64(path, spectrum.grid, spectrum.values, "spectrum")


def load_field(path: str) -> ComplexField2D:
    grid, values, kind = load_cf64(path)
    if kind != "field":
        raise ValueError(f"{path}: contains a {kind}, not a field")
    return ComplexField2D(grid, values)


def load_spectrum(path: str) -> Spectrum2D:
    grid, values, kind = load_cf64(path)
    if kind != "spectrum":
        raise ValueError(f"{path}: contains a {kind}, not a spectrum")
    return Spectrum2D(grid, values)


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    """CSV with a single header row, written atomically."""
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    _atomic_write(path, buf.getvalue().encode())


def canonical_json(obj) -> str:
    """Deterministic rendering: sorted keys, fixed layout, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: str, obj) -> None:
    _atomic_write(path, canonical_json(obj).encode())
