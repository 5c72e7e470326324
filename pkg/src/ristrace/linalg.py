"""Dense complex linear algebra used throughout the simulator.

Hermitian eigendecomposition with a fixed eigenvector phase convention,
a power-iteration fast path for the dominant pair, Kronecker products,
columnwise vectorization, and squared Frobenius norms.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = [
    "NonFiniteError",
    "NotHermitianError",
    "NoConvergenceError",
    "DimensionMismatchError",
    "DimensionOverflowError",
    "EigenResult",
    "DominantPair",
    "require_finite",
    "is_hermitian",
    "fix_phase",
    "trace_gram",
    "hermitian_eig",
    "dominant_eigpair",
    "kron",
    "vec",
    "unvec",
]

# First eigenvector entry above this modulus anchors the phase convention.
PHASE_ANCHOR_TOL = 1e-12

# Relative Hermitian-symmetry tolerance accepted on input matrices.
HERMITIAN_RTOL = 1e-9


class NonFiniteError(ValueError):
    """An array contains NaN or infinite entries."""


class NotHermitianError(ValueError):
    """A matrix is not Hermitian within tolerance."""


class NoConvergenceError(RuntimeError):
    """An iterative eigensolver hit its iteration cap."""


class DimensionMismatchError(ValueError):
    """Array shapes do not conform for the requested operation."""


class DimensionOverflowError(ValueError):
    """A product dimension exceeds the configured cap."""


class EigenResult(NamedTuple):
    """Full Hermitian eigendecomposition, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]


class DominantPair(NamedTuple):
    """Dominant eigenpair estimate from power iteration.

    ``converged`` is False when the iteration cap was hit; the fields then
    hold the last iterate so callers can fall back to ``hermitian_eig``.
    """

    value: float
    vector: np.ndarray
    converged: bool
    iterations: int


def require_finite(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a complex ndarray, rejecting NaN/Inf entries."""
    a = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return a


def _require_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = require_finite(a, name)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")
    return a


def is_hermitian(a: np.ndarray, tol: float) -> bool:
    """True when max_ij |a_ij - conj(a_ji)| <= tol."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a - a.conj().T))) <= tol


def trace_gram(a: np.ndarray) -> float:
    """tr(A^H A) = sum of squared entry moduli (squared Frobenius norm)."""
    a = require_finite(a, "matrix")
    return float(np.real(np.vdot(a, a)))


def fix_phase(v: np.ndarray, tol: float = PHASE_ANCHOR_TOL) -> np.ndarray:
    """Rotate ``v`` so its first entry with modulus > tol is real non-negative.

    Idempotent; vectors with all entries at or below tol are returned as-is.
    """
    v = np.asarray(v, dtype=complex)
    mods = np.abs(v)
    idx = np.flatnonzero(mods > tol)
    if idx.size == 0:
        return v.copy()
    k = idx[0]
    out = v * (v[k].conjugate() / mods[k])
    # the rotated anchor is its own modulus; assign it exactly so repeated
    # application is a bitwise no-op
    out[k] = mods[k]
    return out


def _check_hermitian_input(a: np.ndarray, name: str) -> np.ndarray:
    a = _require_square(a, name)
    scale = float(np.linalg.norm(a))
    if not is_hermitian(a, HERMITIAN_RTOL * max(scale, 1.0)):
        raise NotHermitianError(f"{name} is not Hermitian within tolerance")
    return a


def hermitian_eig(a: np.ndarray) -> EigenResult:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues are real and sorted descending; eigenvector k (column k of
    the returned matrix) follows the phase convention of :func:`fix_phase`.
    Residuals satisfy ||A v - lambda v|| <= 1e-8 ||A||_F per pair.
    """
    a = _check_hermitian_input(a, "matrix")
    herm = 0.5 * (a + a.conj().T)
    try:
        w, v = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError(f"eigensolver failed: {exc}") from exc
    w = w[::-1].copy()
    v = v[:, ::-1]
    cols = [fix_phase(v[:, k]) for k in range(v.shape[1])]
    return EigenResult(eigenvalues=w, eigenvectors=np.column_stack(cols))


def dominant_eigpair(
    a: np.ndarray, tol: float = 1e-10, max_iter: int = 10000
) -> DominantPair:
    """Dominant eigenpair of a Hermitian PSD matrix by power iteration.

    Converged means ||A v - lambda v|| <= tol * ||A||_F.  The start vector is
    a fixed-seed complex Gaussian, so results are deterministic.
    """
    a = _check_hermitian_input(a, "matrix")
    n = a.shape[0]
    norm_f = float(np.linalg.norm(a))
    if norm_f == 0.0:
        e0 = np.zeros(n, dtype=complex)
        e0[0] = 1.0
        return DominantPair(0.0, e0, True, 0)

    rng = np.random.default_rng(0x5EED)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)

    lam = 0.0
    for it in range(1, max_iter + 1):
        w = a @ v
        lam = float(np.real(np.vdot(v, w)))
        if float(np.linalg.norm(w - lam * v)) <= tol * norm_f:
            return DominantPair(lam, fix_phase(v), True, it)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            # v is an exact null vector; for PSD input that is the bottom and
            # the top eigenvalue must also be 0 within the Frobenius check above.
            return DominantPair(0.0, fix_phase(v), True, it)
        v = w / nw
    return DominantPair(lam, fix_phase(v), False, max_iter)


def kron(a: np.ndarray, b: np.ndarray, max_side: int = 10000) -> np.ndarray:
    """Kronecker product with a guard on the product dimensions."""
    a = require_finite(a, "a")
    b = require_finite(b, "b")
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionMismatchError("kron expects 2-D matrices")
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > max_side or cols > max_side:
        raise DimensionOverflowError(
            f"kron result {rows}x{cols} exceeds cap {max_side} per side"
        )
    return np.kron(a, b)


def vec(a: np.ndarray) -> np.ndarray:
    """Columnwise (Fortran-order) vectorization of a matrix."""
    a = require_finite(a, "matrix")
    if a.ndim != 2:
        raise DimensionMismatchError("vec expects a 2-D matrix")
    return a.flatten(order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`: reshape a vector into rows x cols columnwise."""
    v = require_finite(v, "vector")
    if v.ndim != 1:
        raise DimensionMismatchError("unvec expects a 1-D vector")
    if v.size != rows * cols:
        raise DimensionMismatchError(
            f"cannot reshape length {v.size} into {rows}x{cols}"
        )
    return v.reshape((rows, cols), order="F")
