"""TSLX container, CSV fallback, vocab and grouping files.

The binary format is a fixed 24-byte header; every parse failure must name
the file and what was violated, and no code path may hand back a Matrix
that breaks the type's invariants.
"""

import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tslx.io import (
    FormatError,
    Matrix,
    TokenVocab,
    ValidationError,
    WordGroups,
    read_grouping,
    read_matrix,
    read_matrix_csv,
    read_vocab,
    read_word_groups,
    write_grouping,
    write_matrix,
    write_matrix_csv,
    write_vocab,
    write_word_groups,
)

HEADER = struct.Struct("<4sBBHQQ")


def make_file(tmp_path, name, magic=b"TSLX", version=1, dtype=2, reserved=0,
              rows=1, cols=1, payload=None):
    if payload is None:
        payload = struct.pack("<d", 1.5) * (rows * cols)
    path = tmp_path / name
    path.write_bytes(HEADER.pack(magic, version, dtype, reserved, rows, cols) + payload)
    return path


def test_matrix_type_invariants():
    m = Matrix(np.arange(6.0).reshape(2, 3))
    assert m.rows == 2 and m.cols == 3
    assert m.values.flags.c_contiguous and not m.values.flags.writeable
    with pytest.raises(ValidationError):
        Matrix(np.array([[np.nan]]))
    with pytest.raises(ValidationError):
        Matrix(np.zeros((0, 3)))
    with pytest.raises(ValidationError):
        Matrix(np.zeros((2, 2)), dtype="f16")
    with pytest.raises(ValidationError):
        Matrix(np.zeros((2, 2)), col_names=("a",))


def test_matrix_values_are_decoupled_from_input():
    src = np.ones((2, 2))
    m = Matrix(src)
    src[0, 0] = 99.0
    assert m.values[0, 0] == 1.0


def test_header_layout_and_size_invariant(tmp_path):
    m = Matrix(np.arange(12.0).reshape(3, 4))
    path = tmp_path / "a.tslx"
    write_matrix(path, m)
    raw = path.read_bytes()
    assert raw[:4] == b"TSLX"
    assert raw[4] == 1
    assert raw[5] == 2
    assert raw[6:8] == b"\x00\x00"
    assert struct.unpack("<Q", raw[8:16])[0] == 3
    assert struct.unpack("<Q", raw[16:24])[0] == 4
    assert len(raw) == 24 + 3 * 4 * 8


def test_roundtrip_f64_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    values = rng.normal(size=(7, 5)) * 10.0 ** rng.integers(-8, 8, size=(7, 5))
    path = tmp_path / "m.tslx"
    write_matrix(path, Matrix(values))
    back = read_matrix(path)
    assert back.dtype == "f64"
    assert np.array_equal(back.values, values)


def test_roundtrip_f32_widens_exactly(tmp_path):
    rng = np.random.default_rng(1)
    narrow = rng.normal(size=(4, 6)).astype(np.float32)
    path = tmp_path / "m.tslx"
    write_matrix(path, Matrix(narrow.astype(np.float64), dtype="f32"))
    back = read_matrix(path)
    assert back.dtype == "f32"
    # f32 payload widened to f64 must be the exact same reals
    assert np.array_equal(back.values, narrow.astype(np.float64))


@given(
    rows=st.integers(1, 12),
    cols=st.integers(1, 12),
    dtype=st.sampled_from(["f32", "f64"]),
    seed=st.integers(0, 2**32),
)
@settings(max_examples=60, deadline=None)
def test_roundtrip_property(tmp_path_factory, rows, cols, dtype, seed):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(rows, cols))
    if dtype == "f32":
        values = values.astype(np.float32).astype(np.float64)
    path = tmp_path_factory.mktemp("rt") / "m.tslx"
    write_matrix(path, Matrix(values, dtype=dtype))
    back = read_matrix(path)
    assert np.array_equal(back.values, values)
    assert back.dtype == dtype


def test_bad_magic_falls_back_to_csv_error(tmp_path):
    path = tmp_path / "m.tslx"
    path.write_bytes(b"XXXX" + b"\x00" * 28)
    with pytest.raises(FormatError) as err:
        read_matrix(path)
    assert "m.tslx" in str(err.value)


def test_version_dtype_reserved_checks(tmp_path):
    with pytest.raises(FormatError, match="version"):
        read_matrix(make_file(tmp_path, "v.tslx", version=9))
    with pytest.raises(FormatError, match="dtype"):
        read_matrix(make_file(tmp_path, "d.tslx", dtype=7))
    with pytest.raises(FormatError, match="reserved"):
        read_matrix(make_file(tmp_path, "r.tslx", reserved=3))


def test_truncated_and_oversized_payloads(tmp_path):
    with pytest.raises(FormatError, match="expected"):
        read_matrix(make_file(tmp_path, "t.tslx", rows=2, cols=2,
                              payload=struct.pack("<3d", 1, 2, 3)))
    with pytest.raises(FormatError, match="expected"):
        read_matrix(make_file(tmp_path, "o.tslx", rows=1, cols=1,
                              payload=struct.pack("<2d", 1, 2)))


def test_zero_dimensions_rejected(tmp_path):
    with pytest.raises(FormatError):
        read_matrix(make_file(tmp_path, "z.tslx", rows=0, cols=4, payload=b""))


def test_nonfinite_payload_rejected(tmp_path):
    bad = struct.pack("<d", float("inf"))
    with pytest.raises((FormatError, ValidationError)):
        read_matrix(make_file(tmp_path, "inf.tslx", payload=bad))


def test_fuzzed_corruption_never_violates_invariants(tmp_path):
    # Flip bytes all over a valid file; every outcome must be either a
    # toolkit error or a Matrix that satisfies the Matrix invariants.
    rng = np.random.default_rng(42)
    path = tmp_path / "good.tslx"
    write_matrix(path, Matrix(rng.normal(size=(3, 3))))
    good = bytearray(path.read_bytes())
    bad_path = tmp_path / "bad.tslx"
    for trial in range(300):
        corrupted = bytearray(good)
        for _ in range(int(rng.integers(1, 4))):
            pos = int(rng.integers(0, len(corrupted)))
            corrupted[pos] ^= int(rng.integers(1, 256))
        bad_path.write_bytes(bytes(corrupted))
        try:
            m = read_matrix(bad_path)
        except (FormatError, ValidationError):
            continue
        assert m.rows >= 1 and m.cols >= 1
        assert np.isfinite(m.values).all()
        assert m.values.shape == (m.rows, m.cols)


def test_csv_roundtrip_17_digits(tmp_path):
    values = np.array([[1 / 3, 1e-300], [math_pi := 3.141592653589793, -0.0]])
    path = tmp_path / "m.csv"
    write_matrix_csv(path, Matrix(values))
    back = read_matrix_csv(path)
    assert np.array_equal(back.values, values)
    assert math_pi == back.values[1][0]


def test_csv_header_autodetect(tmp_path):
    path = tmp_path / "h.csv"
    path.write_text("alpha,beta\n1,2\n3,4\n", encoding="utf-8")
    m = read_matrix_csv(path)
    assert m.col_names == ("alpha", "beta")
    assert np.array_equal(m.values, [[1.0, 2.0], [3.0, 4.0]])
    bare = tmp_path / "b.csv"
    bare.write_text("1,2\n3,4\n", encoding="utf-8")
    assert read_matrix_csv(bare).col_names is None


def test_csv_errors_name_line(tmp_path):
    ragged = tmp_path / "r.csv"
    ragged.write_text("1,2\n3\n", encoding="utf-8")
    with pytest.raises(FormatError, match="line 2"):
        read_matrix_csv(ragged)
    alpha = tmp_path / "a.csv"
    alpha.write_text("1,2\n3,x\n", encoding="utf-8")
    with pytest.raises(FormatError, match="line 2"):
        read_matrix_csv(alpha)


def test_read_matrix_csv_fallback(tmp_path):
    path = tmp_path / "m.csv"
    write_matrix_csv(path, Matrix(np.eye(2)))
    m = read_matrix(path)
    assert np.array_equal(m.values, np.eye(2))


def test_vocab_roundtrip_and_markers(tmp_path):
    vocab = TokenVocab(("Ġthe", "▁the", "the", "ÿ"))
    path = tmp_path / "v.txt"
    write_vocab(path, vocab)
    assert read_vocab(path).tokens == vocab.tokens


def test_vocab_blank_line_warns(tmp_path):
    path = tmp_path / "v.txt"
    path.write_text("a\n\nb\n", encoding="utf-8")
    with pytest.warns(UserWarning, match="blank"):
        vocab = read_vocab(path)
    assert vocab.tokens == ("a", "", "b")


def test_vocab_empty_rejected(tmp_path):
    path = tmp_path / "v.txt"
    path.write_text("", encoding="utf-8")
    with pytest.raises(ValidationError):
        read_vocab(path)


def test_word_groups_roundtrip(tmp_path):
    wg = WordGroups((("related", ("a", "b")), ("unrelated", ("c",))))
    path = tmp_path / "w.txt"
    write_word_groups(path, wg)
    assert read_word_groups(path).groups == wg.groups


def test_word_groups_validation(tmp_path):
    with pytest.raises(ValidationError):
        WordGroups((("g", ("a",)), ("g", ("b",))))
    with pytest.raises(ValidationError):
        WordGroups((("g", ()),))
    path = tmp_path / "w.txt"
    path.write_text("word-before-header\n", encoding="utf-8")
    with pytest.raises(FormatError):
        read_word_groups(path)


def test_grouping_roundtrip_and_partition_checks(tmp_path):
    path = tmp_path / "g.csv"
    write_grouping(path, ["a", "b", "a"])
    assert read_grouping(path, 3) == ["a", "b", "a"]
    with pytest.raises(ValidationError, match="no group"):
        read_grouping(path, 4)
    path.write_text("patch_index,group_key\n0,a\n0,b\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="twice"):
        read_grouping(path, 2)
    path.write_text("patch_index,group_key\n5,a\n", encoding="utf-8")
    with pytest.raises(ValidationError, match="outside"):
        read_grouping(path, 2)
