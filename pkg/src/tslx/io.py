"""Core data types and the bit-exact file formats shared by every analysis.

TSLX binary matrix container, byte layout (all little-endian)::

    offset  size  field
    0       4     magic  0x54 0x53 0x4C 0x58  ("TSLX")
    4       1     version, u8 = 1
    5       1     dtype,   u8: 1 = f32, 2 = f64
    6       2     reserved, u16 = 0
    8       8     rows, u64
    16      8     cols, u64
    24      ...   row-major values, IEEE-754 little-endian

File size is always ``24 + rows * cols * sizeof(dtype)``.  Values are loaded
into float64 regardless of on-disk dtype (f32 widens exactly); the original
dtype is kept on the Matrix so a rewrite round-trips bit-identically.

The human-readable escape hatch is numeric CSV (optional header row,
auto-detected).  Vocabularies are UTF-8 text, one token per line, stored
verbatim including byte-level BPE markers such as "Ġ".  Word-group files are
plain text with ``# name`` header lines starting each group.
"""

from __future__ import annotations

import csv
import math
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"TSLX"
VERSION = 1
HEADER_SIZE = 24
_DTYPE_CODES = {"f32": 1, "f64": 2}
_CODE_DTYPES = {1: "f32", 2: "f64"}
_NP_DTYPES = {"f32": "<f4", "f64": "<f8"}

DATASET_ROLES = (
    "vocab_embeddings",
    "prototypes",
    "aligned_patches",
    "raw_patches",
    "attention",
    "prompt_embeddings",
)


class TslxError(Exception):
    """Base class for toolkit errors."""


class FormatError(TslxError):
    """A file does not conform to its declared on-disk format."""


class ValidationError(TslxError):
    """A value violates a documented invariant or precondition."""


@dataclass(frozen=True)
class Matrix:
    """Dense 2-D array of finite reals, the universal carrier type.

    ``values`` is always a read-only, C-contiguous float64 array; ``dtype``
    records the on-disk precision used when the matrix is written.
    ``col_names`` is optional metadata picked up from CSV headers.
    """

    values: np.ndarray
    dtype: str = "f64"
    col_names: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 2:
            raise ValidationError(f"matrix must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValidationError(f"matrix dimensions must be >= 1, got {arr.shape}")
        if not np.isfinite(arr).all():
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise ValidationError(
                f"matrix contains non-finite value at flat index {bad}"
            )
        if self.dtype not in _DTYPE_CODES:
            raise ValidationError(f"dtype must be one of {sorted(_DTYPE_CODES)}, got {self.dtype!r}")
        if self.col_names is not None:
            object.__setattr__(self, "col_names", tuple(self.col_names))
            if len(self.col_names) != arr.shape[1]:
                raise ValidationError(
                    f"{len(self.col_names)} column names for {arr.shape[1]} columns"
                )
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class TokenVocab:
    """Ordered token strings, row-aligned with a vocabulary embedding matrix.

    Tokens may repeat (real tokenizers contain near-duplicates); the index is
    the identity.
    """

    tokens: tuple[str, ...]

    def __post_init__(self):
        if len(self.tokens) == 0:
            raise ValidationError("vocabulary must contain at least one token")
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, i: int) -> str:
        return self.tokens[i]


def check_paired(vocab: TokenVocab, emb: Matrix) -> None:
    """Validate that a vocabulary and its embedding matrix are row-aligned."""
    if len(vocab) != emb.rows:
        raise ValidationError(
            f"vocabulary has {len(vocab)} tokens but embedding matrix has {emb.rows} rows"
        )


@dataclass(frozen=True)
class WordGroups:
    """Named, ordered word lists (e.g. "related" / "unrelated")."""

    groups: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        names = [name for name, _ in self.groups]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate group names in {names}")
        for name, words in self.groups:
            if len(words) == 0:
                raise ValidationError(f"word group {name!r} is empty")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.groups)

    def words(self, name: str) -> tuple[str, ...]:
        for n, ws in self.groups:
            if n == name:
                return ws
        raise KeyError(name)

    def all_words(self) -> tuple[str, ...]:
        return tuple(w for _, ws in self.groups for w in ws)


@dataclass(frozen=True)
class DatasetDescriptor:
    """Sidecar metadata describing what a matrix file contains."""

    name: str
    role: str
    source: str = ""

    def __post_init__(self):
        if self.role not in DATASET_ROLES:
            raise ValidationError(
                f"role must be one of {DATASET_ROLES}, got {self.role!r}"
            )


def as_array(x, name: str = "input") -> np.ndarray:
    """Coerce a Matrix or array-like to a validated 2-D float64 array."""
    if isinstance(x, Matrix):
        return x.values
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValidationError(f"{name} contains non-finite values")
    return arr


# ---------------------------------------------------------------------------
# TSLX binary container
# ---------------------------------------------------------------------------

def write_matrix(path, m: Matrix) -> None:
    """Write a Matrix in the TSLX container; f32 matrices are rounded on write."""
    path = Path(path)
    header = struct.pack("<4sBBHQQ", MAGIC, VERSION, _DTYPE_CODES[m.dtype], 0, m.rows, m.cols)
    payload = np.ascontiguousarray(m.values, dtype=_NP_DTYPES[m.dtype]).tobytes()
    path.write_bytes(header + payload)


def read_matrix(path) -> Matrix:
    """Read a TSLX file; falls back to numeric CSV when the magic is absent."""
    path = Path(path)
    raw = path.read_bytes()
    if raw[:4] != MAGIC:
        try:
            return read_matrix_csv(path)
        except (TslxError, UnicodeDecodeError) as exc:
            raise FormatError(
                f"{path}: bad magic {raw[:4]!r} (expected {MAGIC!r}) and not numeric CSV ({exc})"
            ) from None
    if len(raw) < HEADER_SIZE:
        raise FormatError(
            f"{path}: truncated header, expected {HEADER_SIZE} bytes, got {len(raw)}"
        )
    _, version, dtype_code, reserved, rows, cols = struct.unpack_from("<4sBBHQQ", raw)
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}, expected {VERSION}")
    if dtype_code not in _CODE_DTYPES:
        raise FormatError(f"{path}: unsupported dtype code {dtype_code}")
    if reserved != 0:
        raise FormatError(f"{path}: reserved header field must be 0, got {reserved}")
    if rows < 1 or cols < 1:
        raise FormatError(f"{path}: dimensions must be >= 1, got {rows}x{cols}")
    dtype = _CODE_DTYPES[dtype_code]
    itemsize = 4 if dtype == "f32" else 8
    expected = HEADER_SIZE + rows * cols * itemsize
    if len(raw) != expected:
        raise FormatError(
            f"{path}: truncated or oversized payload, expected {expected} bytes, got {len(raw)}"
        )
    flat = np.frombuffer(raw, dtype=_NP_DTYPES[dtype], offset=HEADER_SIZE)
    values = flat.astype(np.float64).reshape(rows, cols)
    if not np.isfinite(values).all():
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise FormatError(f"{path}: non-finite value at flat index {bad}")
    return Matrix(values, dtype=dtype)


# ---------------------------------------------------------------------------
# Numeric CSV
# ---------------------------------------------------------------------------

def _parse_cell(cell: str):
    try:
        return float(cell)
    except ValueError:
        return None


def read_matrix_csv(path) -> Matrix:
    """Read a rectangular numeric CSV; a non-numeric first row becomes col_names."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except csv.Error as exc:
        raise FormatError(f"{path}: not parseable as CSV ({exc})") from None
    if not rows:
        raise FormatError(f"{path}: empty CSV")
    header: tuple[str, ...] | None = None
    start = 0
    if any(_parse_cell(c) is None for c in rows[0]):
        header = tuple(rows[0])
        start = 1
        if start == len(rows):
            raise FormatError(f"{path}: header row but no data rows")
    width = len(rows[start])
    data = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if len(row) != width:
            raise FormatError(
                f"{path}: ragged row at line {lineno}: {len(row)} cells, expected {width}"
            )
        parsed = []
        for col, cell in enumerate(row):
            v = _parse_cell(cell)
            if v is None:
                raise FormatError(
                    f"{path}: non-numeric cell {cell!r} at line {lineno}, column {col + 1}"
                )
            parsed.append(v)
        data.append(parsed)
    if header is not None and len(header) != width:
        raise FormatError(
            f"{path}: header has {len(header)} cells but rows have {width}"
        )
    arr = np.array(data, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise ValidationError(f"{path}: CSV contains non-finite values")
    return Matrix(arr, dtype="f64", col_names=header)


def write_matrix_csv(path, m: Matrix, header=None) -> None:
    """Write values as CSV with 17 significant digits (exact f64 round-trip)."""
    path = Path(path)
    if header is None:
        header = m.col_names
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header is not None:
            writer.writerow(list(header))
        for row in m.values:
            writer.writerow([f"{v:.17g}" for v in row])


# ---------------------------------------------------------------------------
# Vocabulary and word-group text formats
# ---------------------------------------------------------------------------

def read_vocab(path) -> TokenVocab:
    """Read one token per line, verbatim; line i pairs with embedding row i."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ValidationError(f"{path}: invalid UTF-8 ({exc})") from None
    lines = text.splitlines()
    if not lines:
        raise ValidationError(f"{path}: empty vocabulary file")
    blanks = [i for i, tok in enumerate(lines) if tok == ""]
    if blanks:
        warnings.warn(
            f"{path}: blank token at line(s) {[i + 1 for i in blanks]}, kept as empty string",
            stacklevel=2,
        )
    return TokenVocab(tuple(lines))


def write_vocab(path, vocab: TokenVocab) -> None:
    Path(path).write_text("\n".join(vocab.tokens) + "\n", encoding="utf-8")


def read_word_groups(path) -> WordGroups:
    """Parse group headers ("# name") followed by one word per line."""
    path = Path(path)
    groups: list[tuple[str, list[str]]] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            groups.append((stripped[1:].strip(), []))
        else:
            if not groups:
                raise FormatError(
                    f"{path}: word at line {lineno} appears before any '# group' header"
                )
            groups[-1][1].append(stripped)
    if not groups:
        raise FormatError(f"{path}: no group headers found")
    return WordGroups(tuple((name, tuple(words)) for name, words in groups))


def write_word_groups(path, wg: WordGroups) -> None:
    lines = []
    for name, words in wg.groups:
        lines.append(f"# {name}")
        lines.extend(words)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Patch-index grouping CSV (patch_index,group_key)
# ---------------------------------------------------------------------------

def read_grouping(path, n_patches: int) -> list[str]:
    """Read a patch_index,group_key CSV into a per-patch key list.

    The indices must form an exact partition of range(n_patches).
    """
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if rows and rows[0][:2] == ["patch_index", "group_key"]:
        rows = rows[1:]
    labels: list[str | None] = [None] * n_patches
    for lineno, row in enumerate(rows, start=1):
        if len(row) < 2:
            raise FormatError(f"{path}: line {lineno} needs patch_index,group_key")
        try:
            idx = int(row[0])
        except ValueError:
            raise FormatError(
                f"{path}: non-integer patch index {row[0]!r} at line {lineno}"
            ) from None
        if not 0 <= idx < n_patches:
            raise ValidationError(
                f"{path}: patch index {idx} at line {lineno} outside [0, {n_patches})"
            )
        if labels[idx] is not None:
            raise ValidationError(f"{path}: patch index {idx} assigned twice")
        labels[idx] = row[1]
    missing = [i for i, v in enumerate(labels) if v is None]
    if missing:
        raise ValidationError(
            f"{path}: patch indices {missing[:8]} have no group assignment"
        )
    return labels  # type: ignore[return-value]


def write_grouping(path, labels) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["patch_index", "group_key"])
        for i, key in enumerate(labels):
            writer.writerow([i, key])
