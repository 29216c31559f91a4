"""Dense complex-matrix kernel used by every other module.

Thin, contract-enforcing wrappers around LAPACK (via numpy/scipy) for the
handful of operations the estimators rely on: Hermitian eigendecomposition,
Hermitian positive-definite solves, eigenvalue-thresholded pseudo-inverse,
and the spectral norm. Matrices are numpy complex arrays in the default
row-major (C) order throughout the package.

Conventions fixed here so results are reproducible across backends:
  * eigenvalues are always returned in non-increasing order;
  * each eigenvector is phase-normalized so that its largest-modulus entry
    is real and positive.

The tolerances below are package-wide defaults; every operation also takes
them as keyword arguments.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import DimensionError, InvalidInputError, SingularMatrixError

# Relative tolerance for accepting an input matrix as Hermitian.
HERMITIAN_RTOL = 1e-10
# Condition-number estimate beyond which solve_hpd refuses to answer.
MAX_CONDITION = 1e14
# Default relative eigenvalue cutoff of the pseudo-inverse.
PINV_RTOL = 1e-9


@dataclass(frozen=True)
class HermitianEig:
    """Eigendecomposition A = U diag(w) U^H with w sorted non-increasing."""

    eigenvalues: np.ndarray   # (M,) real, non-increasing
    eigenvectors: np.ndarray  # (M, M) complex, orthonormal columns


def _as_square_matrix(a, name="A"):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} contains NaN or Inf entries")
    return a


def _check_hermitian(a, rtol=HERMITIAN_RTOL):
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return a
    asym = np.linalg.norm(a - a.conj().T)
    if asym > rtol * scale:
        raise InvalidInputError(
            f"matrix is not Hermitian: relative asymmetry {asym / scale:.3e}"
        )
    return 0.5 * (a + a.conj().T)


def _fix_phases(vectors):
    """Rotate each column so its largest-modulus entry is real-positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    mags = np.abs(pivots)
    # All-zero columns cannot occur for unitary U; guard anyway.
    safe = np.where(mags > 0, pivots / np.where(mags > 0, mags, 1.0), 1.0)
    return vectors * safe.conj()


def hermitian_eig(a, rtol=HERMITIAN_RTOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues non-increasing.

    The input is validated (square, finite, Hermitian up to ``rtol``
    relative asymmetry), symmetrized, and decomposed with LAPACK.
    """
    a = _as_square_matrix(a)
    a = _check_hermitian(a, rtol)
    w, u = np.linalg.eigh(a)
    w = w[::-1]
    u = u[:, ::-1]
    return HermitianEig(eigenvalues=w, eigenvectors=_fix_phases(u))


def solve_hpd(a, b, max_condition=MAX_CONDITION):
    """Solve A X = B for Hermitian positive-definite A via Cholesky.

    Raises SingularMatrixError when the factorization fails or the
    condition estimate (from the Cholesky diagonal) exceeds ``max_condition``.
    """
    a = _as_square_matrix(a)
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != a.shape[0]:
        raise DimensionError(
            f"B has {b.shape[0]} rows, expected {a.shape[0]}"
        )
    if not np.all(np.isfinite(b)):
        raise InvalidInputError("B contains NaN or Inf entries")
    a = _check_hermitian(a)
    try:
        c, low = scipy.linalg.cho_factor(a, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"Cholesky factorization failed: {exc}") from exc
    diag = np.abs(np.diag(c))
    cond_est = (diag.max() / diag.min()) ** 2 if diag.min() > 0 else np.inf
    if cond_est > max_condition:
        raise SingularMatrixError(
            f"matrix is numerically singular (condition estimate {cond_est:.3e})"
        )
    return scipy.linalg.cho_solve((c, low), b, check_finite=False)


def pseudo_inverse(a, rel_tol=PINV_RTOL):
    """Moore-Penrose pseudo-inverse of a Hermitian PSD matrix.

    Eigenvalues above ``rel_tol`` times the largest are inverted, the rest
    are zeroed. An all-zero matrix maps to the zero matrix.
    """
    if not 0.0 < rel_tol < 1.0:
        raise InvalidInputError(f"rel_tol must lie in (0,1), got {rel_tol}")
    eig = hermitian_eig(a)
    w, u = eig.eigenvalues, eig.eigenvectors
    if w[0] <= 0.0:
        return np.zeros_like(u)
    keep = w > rel_tol * w[0]
    inv = np.zeros_like(w)
    inv[keep] = 1.0 / w[keep]
    return (u * inv) @ u.conj().T


def spectral_norm(a):
    """Largest singular value of a matrix (2-norm)."""
    a = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix contains NaN or Inf entries")
    if a.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {a.shape}")
    return float(np.linalg.norm(a, 2))
