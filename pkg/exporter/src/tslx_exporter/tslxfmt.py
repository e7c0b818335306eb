"""Writers for the TSLX matrix container and token-per-line vocab files.

Deliberately standalone: the exporter talks to the analysis toolkit only
through these on-disk formats, so the layout is restated here rather than
imported. Header: magic "TSLX", version u8 = 1, dtype u8 (1 = f32), two
reserved zero bytes, then rows and cols as little-endian u64, then the
row-major payload. Matrices are written f32, the model-native precision.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

_HEADER = struct.Struct("<4sBBHQQ")
_MAGIC = b"TSLX"
_DTYPE_F32 = 1


def write_tslx_f32(path, values) -> tuple[int, int]:
    """Write a 2-d array as an f32 TSLX file; returns (rows, cols)."""
    arr = np.ascontiguousarray(values, dtype="<f4")
    if arr.ndim != 2:
        raise ValueError(f"need a 2-d matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("matrix contains non-finite values")
    rows, cols = arr.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, 1, _DTYPE_F32, 0, rows, cols))
        fh.write(arr.tobytes())
    return rows, cols


def read_header(path) -> tuple[int, int]:
    """(rows, cols) from a TSLX header, for shape cross-checks."""
    with open(path, "rb") as fh:
        magic, version, dtype, reserved, rows, cols = _HEADER.unpack(fh.read(_HEADER.size))
    if magic != _MAGIC:
        raise ValueError(f"{path}: not a TSLX file")
    return int(rows), int(cols)


def write_vocab(path, tokens) -> int:
    """Token-per-line UTF-8 vocab file, marker glyphs kept verbatim."""
    tokens = list(tokens)
    for i, t in enumerate(tokens):
        if "\n" in t or "\r" in t:
            raise ValueError(f"token {i} contains a line break: {t!r}")
    Path(path).write_text("".join(t + "\n" for t in tokens), encoding="utf-8")
    return len(tokens)
