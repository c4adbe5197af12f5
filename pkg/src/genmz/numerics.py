"""Small dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of complex dtype, indexed
``[output_mode, input_mode]``. Dimensions here never exceed a handful of
modes, so nothing is optimised for size.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimensionError, NotHermitianError

# entrywise tolerance for unitarity / Hermiticity predicates
DEFAULT_TOL = 1e-10


def as_square(A) -> np.ndarray:
    """Return ``A`` as a finite square complex array or raise."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DimensionError("matrix has non-finite entries")
    return M


def dagger(A) -> np.ndarray:
    return np.conj(np.asarray(A)).T


def hermitian_part(A) -> np.ndarray:
    """(A + A^dagger) / 2, the Hermitian part of a square matrix."""
    M = as_square(A)
    return 0.5 * (M + dagger(M))


def hermiticity_residual(A) -> float:
    M = as_square(A)
    return float(np.max(np.abs(M - dagger(M)), initial=0.0))


def unitarity_residual(U) -> float:
    M = as_square(U)
    return float(np.max(np.abs(dagger(M) @ M - np.eye(M.shape[0])), initial=0.0))


def is_hermitian(A, tol: float = DEFAULT_TOL) -> bool:
    return hermiticity_residual(A) <= tol


def is_unitary(U, tol: float = DEFAULT_TOL) -> bool:
    return unitarity_residual(U) <= tol


def is_diagonal(A, tol: float = DEFAULT_TOL) -> bool:
    M = as_square(A)
    off = M - np.diag(np.diag(M))
    return float(np.max(np.abs(off), initial=0.0)) <= tol


def hermitian_eigensystem(H, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian matrix.

    Each eigenvector column is phase-fixed so that its largest-modulus
    component is real and positive, which makes the output reproducible
    (a diagonal input returns the identity).
    """
    M = as_square(H)
    if hermiticity_residual(M) > tol:
        raise NotHermitianError(
            f"matrix is not Hermitian within {tol:g} (residual {hermiticity_residual(M):.3g})"
        )
    w, V = np.linalg.eigh(0.5 * (M + dagger(M)))
    for k in range(V.shape[1]):
        col = V[:, k]
        pivot = col[np.argmax(np.abs(col))]
        V[:, k] = col * (abs(pivot) / pivot)
    return w, V


def matrix_exponential(A) -> np.ndarray:
    """exp(A) for a square complex matrix.

    Skew-Hermitian arguments ``A = iH`` go through the Hermitian
    eigendecomposition, so the result is unitary to rounding. Anything
    else falls back to scaling-and-squaring with a degree-13 Pade
    approximant.
    """
    M = as_square(A)
    if np.max(np.abs(M + dagger(M)), initial=0.0) <= DEFAULT_TOL:
        w, V = hermitian_eigensystem(-1j * M)
        return (V * np.exp(1j * w)) @ dagger(V)
    return scipy.linalg.expm(M)


def unitary_distance(U, V) -> float:
    """Frobenius distance between ``U`` and ``V`` modulo a global phase.

    The phase is aligned with c = tr(V^dagger U)/|tr(V^dagger U)|; when that
    trace vanishes no alignment is attempted.
    """
    A = as_square(U)
    B = as_square(V)
    if A.shape != B.shape:
        raise DimensionError(f"dimension mismatch: {A.shape} vs {B.shape}")
    t = np.trace(dagger(B) @ A)
    c = t / abs(t) if abs(t) > 0.0 else 1.0
    return float(np.linalg.norm(A - c * B))
