"""
Dense complex linear algebra for small Hermitian problems.

Vectors and matrices are plain ``numpy`` arrays of ``complex128``. The
helpers here validate shapes and finiteness, and wrap LAPACK's Hermitian
eigensolver behind a contract with deterministic ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt

from .errors import ConvergenceError, DimensionError, NonFiniteError, NotHermitianError

ComplexVector = npt.NDArray[np.complex128]
ComplexMatrix = npt.NDArray[np.complex128]

HERMITICITY_TOLERANCE = 1e-10


def as_vector(x: npt.ArrayLike) -> ComplexVector:
    """Coerce ``x`` into a finite, one-dimensional complex array."""
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1 or v.size < 1:
        raise DimensionError(f"expected a non-empty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteError("vector has non-finite entries")
    return v


def as_matrix(m: npt.ArrayLike, *, square: bool = True) -> ComplexMatrix:
    """Coerce ``m`` into a finite, two-dimensional complex array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.size < 1:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("matrix has non-finite entries")
    return a


def inner_product(x: npt.ArrayLike, y: npt.ArrayLike) -> complex:
    """Return ``<x|y> = sum(conj(x_i) * y_i)``.

    The product is conjugate-linear in the first argument.
    """
    xv, yv = as_vector(x), as_vector(y)
    if xv.shape != yv.shape:
        raise DimensionError(f"dimension mismatch: {xv.size} vs {yv.size}")
    return complex(np.vdot(xv, yv))


def is_hermitian(m: npt.ArrayLike, tol: float = HERMITICITY_TOLERANCE) -> bool:
    """True iff ``max |M - M^dagger|`` is at most ``tol`` entrywise."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = as_matrix(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending real eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: npt.NDArray[np.float64]
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _orthonormalize_blocks(values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    # Exact ties only; LAPACK output is already orthonormal, this guards reproducibility.
    out = vectors.copy()
    start = 0
    n = values.size
    while start < n:
        stop = start + 1
        while stop < n and values[stop] == values[start]:
            stop += 1
        if stop - start > 1:
            q, r = np.linalg.qr(out[:, start:stop])
            q = q * np.where(np.diag(r).real < 0, -1.0, 1.0)
            out[:, start:stop] = q
        start = stop
    return out


def eig_hermitian(m: npt.ArrayLike, tol: float = HERMITICITY_TOLERANCE) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix.

    Parameters
    ----------
    m : array_like
        Square complex matrix, Hermitian within ``tol`` (absolute, entrywise).
    tol : float
        Hermiticity tolerance.

    Returns
    -------
    EigenDecomposition
        Eigenvalues sorted ascending (stable on ties) with orthonormal
        eigenvector columns.

    Raises
    ------
    NotHermitianError
        If ``m`` fails the Hermiticity gate.
    ConvergenceError
        If the underlying LAPACK driver does not converge.
    """
    a = as_matrix(m)
    if not is_hermitian(a, tol):
        raise NotHermitianError(
            f"matrix is not Hermitian within {tol:g} "
            f"(max deviation {np.max(np.abs(a - a.conj().T)):.3e})"
        )
    sym = 0.5 * (a + a.conj().T)
    try:
        values, vectors = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"Hermitian eigensolver failed on {a.shape[0]}x{a.shape[0]} input: {exc}"
        ) from exc
    order = np.argsort(values, kind="stable")
    values = np.ascontiguousarray(values[order])
    vectors = _orthonormalize_blocks(values, np.ascontiguousarray(vectors[:, order]))
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenDecomposition(values, vectors)


def spectral_function(
    m: npt.ArrayLike | EigenDecomposition, f: Callable[[np.ndarray], np.ndarray]
) -> ComplexMatrix:
    """Return ``V diag(f(lambda)) V^dagger`` for Hermitian ``m``.

    ``f`` receives the full eigenvalue array and must be vectorized. A
    precomputed :class:`EigenDecomposition` may be passed instead of the matrix.
    """
    dec = m if isinstance(m, EigenDecomposition) else eig_hermitian(m)
    fv = np.asarray(f(dec.eigenvalues), dtype=np.complex128)
    v = dec.eigenvectors
    return (v * fv) @ v.conj().T
