"""Bit-exact file formats: grids (ACUR1), coefficient sets (ACCF1), PGM, CSV.

Both binary formats are a magic line, a one-line JSON header, and a raw
little-endian float64 payload, so writing what was read reproduces the file
byte for byte.  Coefficient files carry the frame's geometry digest and are
rejected on mismatch rather than silently reinterpreted.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .frame import Frame, FrameParams, build_frame
from .transform import CoefficientSet

__all__ = [
    "FormatError",
    "GRID_MAGIC",
    "COEFF_MAGIC",
    "write_grid",
    "read_grid",
    "write_coeffs",
    "read_coeffs",
    "export_pgm",
    "write_csv",
    "write_json",
]

GRID_MAGIC = b"ACUR1"
COEFF_MAGIC = b"ACCF1"


class FormatError(Exception):
    """Malformed file or geometry digest mismatch."""


def _read_line(fh, what: str) -> bytes:
    line = fh.readline()
    if not line.endswith(b"\n"):
        raise FormatError(f"truncated {what}")
    return line[:-1]


def write_grid(path, grid: np.ndarray) -> Path:
    """Write an M x M real or complex grid as an ACUR1 file."""
    path = Path(path)
    g = np.asarray(grid)
    if g.ndim != 2:
        raise ValueError("grid must be 2-D")
    kind = "complex" if np.iscomplexobj(g) else "real"
    header = {"width": g.shape[1], "height": g.shape[0], "kind": kind, "norm": "l2/M"}
    if kind == "complex":
        payload = np.empty(g.shape + (2,), dtype="<f8")
        payload[..., 0] = g.real
        payload[..., 1] = g.imag
    else:
        payload = g.astype("<f8")
    with open(path, "wb") as fh:
        fh.write(GRID_MAGIC + b"\n")
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(payload.tobytes())
    return path


def read_grid(path) -> tuple[np.ndarray, dict]:
    """Read an ACUR1 file; returns (grid, header)."""
    with open(path, "rb") as fh:
        if _read_line(fh, "magic") != GRID_MAGIC:
            raise FormatError("not an ACUR1 grid file")
        try:
            header = json.loads(_read_line(fh, "header"))
        except json.JSONDecodeError as e:
            raise FormatError(f"bad grid header: {e}") from e
        w, h = int(header["width"]), int(header["height"])
        kind = header["kind"]
        per = 2 if kind == "complex" else 1
        payload = fh.read(w * h * per * 8)
        if len(payload) != w * h * per * 8 or fh.read(1):
            raise FormatError("grid payload length mismatch")
    flat = np.frombuffer(payload, dtype="<f8")
    if kind == "complex":
        flat = flat.reshape(h, w, 2)
        return flat[..., 0] + 1j * flat[..., 1], header
    return flat.reshape(h, w).copy(), header


def write_coeffs(path, coeffs: CoefficientSet) -> Path:
    """Write a coefficient set as an ACCF1 file (header + complex payload)."""
    path = Path(path)
    frame = coeffs.frame
    p = frame.params
    header = {
        "alpha": p.alpha,
        "grid_size": p.grid_size,
        "j_min": p.j_min,
        "j_max": p.j_max,
        "transition_sharpness": p.transition_sharpness,
        "digest": frame.digest(),
        "norm_convention": coeffs.norm_convention,
        "source_kind": coeffs.source_kind,
        "blocks": frame.geometry.block_table(),
    }
    payload = np.empty(coeffs.data.size * 2, dtype="<f8")
    payload[0::2] = coeffs.data.real
    payload[1::2] = coeffs.data.imag
    with open(path, "wb") as fh:
        fh.write(COEFF_MAGIC + b"\n")
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        fh.write(payload.tobytes())
    return path


def read_coeffs(path, frame: Frame | None = None) -> CoefficientSet:
    """Read an ACCF1 file, rebuilding (or checking) the frame it belongs to."""
    with open(path, "rb") as fh:
        if _read_line(fh, "magic") != COEFF_MAGIC:
            raise FormatError("not an ACCF1 coefficient file")
        try:
            header = json.loads(_read_line(fh, "header"))
        except json.JSONDecodeError as e:
            raise FormatError(f"bad coefficient header: {e}") from e
        if frame is None:
            frame = build_frame(
                FrameParams(
                    alpha=header["alpha"],
                    grid_size=header["grid_size"],
                    j_min=header["j_min"],
                    j_max=header["j_max"],
                    transition_sharpness=header["transition_sharpness"],
                )
            )
        if frame.digest() != header["digest"]:
            raise FormatError("geometry digest mismatch")
        out = CoefficientSet.zeros(frame, source_kind=header.get("source_kind", "complex"))
        nbytes = out.data.size * 16
        payload = fh.read(nbytes)
        if len(payload) != nbytes or fh.read(1):
            raise FormatError("coefficient payload length mismatch")
    flat = np.frombuffer(payload, dtype="<f8")
    out.data[:] = flat[0::2] + 1j * flat[1::2]
    out.norm_convention = header.get("norm_convention", out.norm_convention)
    return out


def export_pgm(grid: np.ndarray, path) -> Path:
    """Write a real grid as a binary PGM, affinely mapped to [0, 255].

    A constant grid maps to all-128 bytes by convention.
    """
    g = np.asarray(grid)
    if np.iscomplexobj(g):
        raise ValueError("PGM export requires a real grid")
    lo, hi = float(g.min()), float(g.max())
    if hi > lo:
        u8 = np.rint((g - lo) / (hi - lo) * 255.0).astype(np.uint8)
    else:
        u8 = np.full(g.shape, 128, dtype=np.uint8)
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{g.shape[1]} {g.shape[0]}\n255\n".encode())
        fh.write(u8.tobytes())
    return path


def write_csv(path, header: list[str], rows) -> Path:
    """UTF-8 CSV with a header row; floats use repr (shortest round-trip)."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    return path


def write_json(path, doc: dict) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
