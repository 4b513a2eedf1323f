"""Dense complex linear algebra shared by every other module.

All matrices are plain 2-D ``numpy.ndarray`` of complex128.  Dimensions stay
small (a few hundred after tensoring), so everything is dense; numpy/scipy
LAPACK routines do the heavy lifting behind the checked entry points below.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import NegativeSpectrumError, NotHermitianError, NotSquareError

# Max-abs tolerance on A - A^dag before an input counts as non-Hermitian.
# Decoherence arithmetic accumulates rounding, so inputs inside the tolerance
# are symmetrized before eigensolves.
HERMITICITY_TOL = 1e-10

# Eigenvalues of a nominally PSD matrix above -PSD_CLAMP_TOL are clamped to 0.
PSD_CLAMP_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a 2-D complex128 array with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise NotSquareError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def _square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_defect(a) -> float:
    """Max-abs of A - A^dag."""
    m = _square(a)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _hermitian_part(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    m = _square(a)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitianError(f"hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    return (m + m.conj().T) / 2


def kron(a, b) -> np.ndarray:
    """Kronecker product; block (i, j) equals A[i, j] * B."""
    return np.kron(as_matrix(a), as_matrix(b))


def herm_eigvals(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return np.linalg.eigvalsh(_hermitian_part(a, tol))


def det(a) -> complex:
    """Determinant via LAPACK's pivoted LU factorization."""
    return complex(np.linalg.det(_square(a)))


def trace_norm(a) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(_square(a), compute_uv=False).sum())


def matrix_exp(a) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with Pade approximants)."""
    return scipy.linalg.expm(_square(a))


def sqrtm_psd(a, clamp_tol: float = PSD_CLAMP_TOL) -> np.ndarray:
    """Hermitian square root of a PSD matrix.

    Eigenvalues in [-clamp_tol, 0) are clamped to 0; anything lower raises
    ``NegativeSpectrumError``.  Eigenvalues below the eigensolver's relative
    noise floor are treated as exact zeros: sqrt() would otherwise amplify
    O(eps) rounding on rank-deficient inputs into O(sqrt(eps)) errors.
    """
    h = _hermitian_part(a)
    w, v = np.linalg.eigh(h)
    if w[0] < -clamp_tol:
        raise NegativeSpectrumError(
            f"matrix has eigenvalue {w[0]:.3e} below -{clamp_tol:.1e}"
        )
    w = np.clip(w, 0.0, None)
    w[w < w.max() * 1e-14] = 0.0
    root = (v * np.sqrt(w)) @ v.conj().T
    return (root + root.conj().T) / 2
