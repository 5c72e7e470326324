"""Round-trip and error tests for the plain-text matrix format."""

import io

import numpy as np
import pytest

from ristrace.matrixio import (
    MatrixFormatError,
    load_matrices,
    load_matrix,
    save_matrices,
    save_matrix,
)


def roundtrip(a):
    buf = io.StringIO()
    save_matrix(buf, a)
    buf.seek(0)
    return load_matrix(buf)


def test_roundtrip_exact():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    assert np.array_equal(roundtrip(a), a)


def test_roundtrip_extreme_values():
    a = np.array([[1e-308 + 1e308j, -0.0 + 0j], [np.pi, -1e-17j]])
    assert np.array_equal(roundtrip(a), a)


def test_header_carries_shape():
    buf = io.StringIO()
    save_matrix(buf, np.zeros((2, 4)))
    assert buf.getvalue().splitlines()[0] == "2 4"


def test_multiple_matrices_sequential():
    rng = np.random.default_rng(2)
    mats = [rng.standard_normal((2, 2)) + 0j, rng.standard_normal((3, 1)) + 1j]
    buf = io.StringIO()
    save_matrices(buf, mats)
    buf.seek(0)
    back = load_matrices(buf, 2)
    assert np.array_equal(back[0], mats[0])
    assert np.array_equal(back[1], mats[1])


def test_missing_header():
    with pytest.raises(MatrixFormatError):
        load_matrix(io.StringIO(""))


def test_bad_header():
    with pytest.raises(MatrixFormatError):
        load_matrix(io.StringIO("2 x\n1 0 1 0\n"))


def test_truncated_rows():
    with pytest.raises(MatrixFormatError):
        load_matrix(io.StringIO("2 2\n1 0 1 0\n"))


def test_wrong_entry_count():
    with pytest.raises(MatrixFormatError):
        load_matrix(io.StringIO("1 2\n1 0 1\n"))


def test_non_numeric_entry():
    with pytest.raises(MatrixFormatError):
        load_matrix(io.StringIO("1 1\n1 zebra\n"))


def test_rejects_non_finite_on_save():
    from ristrace.linalg import NonFiniteError

    with pytest.raises(NonFiniteError):
        save_matrix(io.StringIO(), np.array([[np.inf]]))
