"""Plain-text serialization for complex matrices.

Format: a header line ``<rows> <cols>``, then one line per row holding
``re im`` pairs separated by whitespace (row-major).  Floats are written
with shortest round-trip precision, so save/load is lossless.  Several
matrices may be stored back to back in one file; the loaders consume
exactly one matrix and leave the stream positioned at the next.
"""

from __future__ import annotations

from typing import IO, Iterator

import numpy as np

from .linalg import DimensionMismatchError, require_finite

__all__ = ["save_matrix", "load_matrix", "save_matrices", "load_matrices"]


class MatrixFormatError(ValueError):
    """The text stream does not follow the matrix format."""


def save_matrix(stream: IO[str], a: np.ndarray) -> None:
    """Write one matrix to an open text stream."""
    a = require_finite(a, "matrix")
    if a.ndim != 2:
        raise DimensionMismatchError("save_matrix expects a 2-D matrix")
    rows, cols = a.shape
    stream.write(f"{rows} {cols}\n")
    for r in range(rows):
        parts = []
        for c in range(cols):
            z = complex(a[r, c])
            parts.append(f"{z.real!r} {z.imag!r}")
        stream.write(" ".join(parts) + "\n")


def _data_lines(stream: IO[str]) -> Iterator[str]:
    for line in stream:
        line = line.strip()
        if line:
            yield line


def load_matrix(stream: IO[str]) -> np.ndarray:
    """Read one matrix from an open text stream."""
    return _load_one(_data_lines(stream))


def _load_one(lines: Iterator[str]) -> np.ndarray:
    try:
        header = next(lines)
    except StopIteration:
        raise MatrixFormatError("missing matrix header") from None
    fields = header.split()
    if len(fields) != 2:
        raise MatrixFormatError(f"bad matrix header: {header!r}")
    try:
        rows, cols = int(fields[0]), int(fields[1])
    except ValueError:
        raise MatrixFormatError(f"bad matrix header: {header!r}") from None
    if rows < 1 or cols < 1:
        raise MatrixFormatError(f"bad matrix dimensions: {rows}x{cols}")
    out = np.empty((rows, cols), dtype=complex)
    for r in range(rows):
        try:
            line = next(lines)
        except StopIteration:
            raise MatrixFormatError(f"matrix truncated at row {r}") from None
        vals = line.split()
        if len(vals) != 2 * cols:
            raise MatrixFormatError(
                f"row {r}: expected {2 * cols} numbers, got {len(vals)}"
            )
        try:
            nums = [float(x) for x in vals]
        except ValueError as exc:
            raise MatrixFormatError(f"row {r}: {exc}") from None
        out[r, :] = np.array(nums[0::2]) + 1j * np.array(nums[1::2])
    return out


def save_matrices(stream: IO[str], mats) -> None:
    for a in mats:
        save_matrix(stream, a)


def load_matrices(stream: IO[str], count: int) -> list[np.ndarray]:
    lines = _data_lines(stream)
    return [_load_one(lines) for _ in range(count)]
