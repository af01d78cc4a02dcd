"""Dense linear algebra used by every other module.

Matrices are plain 2-D ``numpy`` float arrays and spectra are 1-D complex
arrays.  Eigenvalues of real nonsymmetric matrices come from LAPACK's
``geev`` (balanced Hessenberg reduction followed by shifted QR), which is
the standard robust route for this problem class.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NumericalError, SingularMatrixError

# Reciprocal condition number below which a solve is refused.
RCOND_FLOOR = 1e-14


def as_matrix(m) -> np.ndarray:
    """Validate and return ``m`` as a finite 2-D float array."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.size == 0:
        raise DimensionError("matrix must be non-empty")
    if not np.all(np.isfinite(a)):
        raise DimensionError("matrix entries must be finite")
    return a


def as_square(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_spectrum(s) -> np.ndarray:
    """Return ``s`` as a 1-D complex array (an eigenvalue multiset)."""
    a = np.atleast_1d(np.asarray(s, dtype=complex))
    if a.ndim != 1 or a.size == 0:
        raise DimensionError("spectrum must be a non-empty 1-D collection")
    if not np.all(np.isfinite(a)):
        raise DimensionError("spectrum entries must be finite")
    return a


def eigenvalues(m) -> np.ndarray:
    """All eigenvalues of a square real matrix, with multiplicity, unordered.

    For real input the result is closed under complex conjugation (up to
    roundoff); callers sort or reduce as needed.
    """
    a = as_square(m)
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # QR iteration did not converge
        raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc


def singular_values(m) -> np.ndarray:
    """Singular values of ``m`` in descending order."""
    a = as_matrix(m)
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc


def solve_linear(m, b) -> np.ndarray:
    """Solve ``m x = b`` for square nonsingular ``m``.

    Refuses matrices whose reciprocal condition estimate falls below
    ``RCOND_FLOOR`` instead of returning garbage.
    """
    a = as_square(m)
    rhs = np.asarray(b, dtype=float)
    if rhs.shape[0] != a.shape[0]:
        raise DimensionError(
            f"rhs length {rhs.shape[0]} does not match matrix dimension {a.shape[0]}"
        )
    sv = singular_values(a)
    if sv[0] == 0.0 or sv[-1] / sv[0] < RCOND_FLOOR:
        raise SingularMatrixError(
            f"matrix is singular to working precision (rcond ~ {0.0 if sv[0] == 0 else sv[-1] / sv[0]:.2e})"
        )
    return np.linalg.solve(a, rhs)


def spectral_map(s, coeffs) -> np.ndarray:
    """Apply the polynomial with ascending ``coeffs`` to every eigenvalue.

    ``coeffs = (c0, c1, ..., cn)`` means ``P(X) = c0 + c1 X + ... + cn X^n``.
    By the spectral mapping theorem this is the spectrum of ``P(A)`` when
    ``s`` is the spectrum of ``A``; multiplicities are preserved.
    """
    lam = as_spectrum(s)
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.ndim != 1 or c.size == 0:
        raise DimensionError("polynomial coefficients must be a non-empty 1-D sequence")
    out = np.zeros_like(lam)
    for ck in c[::-1]:  # Horner
        out = out * lam + ck
    return out


def matrix_polynomial(m, coeffs) -> np.ndarray:
    """Evaluate the polynomial with ascending ``coeffs`` at a square matrix."""
    a = as_square(m)
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    out = np.zeros_like(a)
    eye = np.eye(a.shape[0])
    for ck in c[::-1]:
        out = out @ a + ck * eye
    return out


def reciprocal_condition(m) -> float:
    """sigma_min / sigma_max of ``m`` (0 for an exactly singular matrix)."""
    sv = singular_values(m)
    return 0.0 if sv[0] == 0.0 else float(sv[-1] / sv[0])
