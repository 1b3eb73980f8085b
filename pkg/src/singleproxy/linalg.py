"""Dense symmetric linear algebra shared by the estimators.

Every regularized inverse in the closed forms goes through :func:`solve_psd`
(a Cholesky solve, never an explicit inverse) and every matrix square root
through :func:`sqrt_psd` (a symmetric eigendecomposition).
"""

import numpy as np
from scipy import linalg

from .errors import DimensionError, NotPSDError, SingularMatrixError

EIG_TOL = 1e-10
JITTER_START = 1e-12
JITTER_STOP = 1e-6


def hadamard(a, b):
    """Entrywise product of two equally shaped matrices."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"hadamard: shape mismatch {a.shape} vs {b.shape}")
    return a * b


def _check_square(k, name="k"):
    k = np.asarray(k, dtype=float)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {k.shape}")
    return k


def _cholesky(k, shift):
    n = k.shape[0]
    a = k + shift * np.eye(n) if shift else k.copy()
    return linalg.cho_factor(a, lower=True, overwrite_a=True, check_finite=False)


def solve_psd(k, ridge, rhs):
    """Solve ``(k + ridge * I) X = rhs`` for symmetric PSD ``k``.

    Only the lower triangle of ``k`` is read. If the Cholesky factorization
    fails, a diagonal jitter of ``1e-12 * trace(k) / dim`` is added and grown
    tenfold up to ``1e-6 * trace(k) / dim`` before giving up with
    :class:`SingularMatrixError`.

    Parameters
    ----------
    k : (d, d) array_like
    ridge : float
        Nonnegative Tikhonov term.
    rhs : (d,) or (d, r) array_like

    Returns
    -------
    ndarray with the shape of ``rhs``.
    """
    k = _check_square(k)
    if ridge < 0 or not np.isfinite(ridge):
        raise ValueError(f"ridge must be a nonnegative finite number, got {ridge}")
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[0] != k.shape[0]:
        raise DimensionError(
            f"rhs has {rhs.shape[0]} rows but the system has dimension {k.shape[0]}"
        )
    dim = k.shape[0]
    if dim == 0:
        return rhs.copy()

    try:
        factor = _cholesky(k, ridge)
    except np.linalg.LinAlgError:
        scale = np.trace(k) / dim
        if not scale > 0:
            scale = 1.0
        jitter = JITTER_START * scale
        factor = None
        while jitter <= JITTER_STOP * scale * (1 + 1e-9):
            try:
                factor = _cholesky(k, ridge + jitter)
                break
            except np.linalg.LinAlgError:
                jitter *= 10
        if factor is None:
            last = jitter / 10
            raise SingularMatrixError(
                f"Cholesky factorization failed with jitter up to {last:.3e}", jitter=last
            ) from None
    return linalg.cho_solve(factor, rhs, check_finite=False)


def sqrt_psd(g, tol=EIG_TOL):
    """Symmetric PSD square root ``S`` with ``S @ S == g``.

    Eigenvalues in ``[-tol * lambda_max, 0)`` are treated as round-off and
    clipped to zero; anything more negative raises :class:`NotPSDError`.
    """
    g = _check_square(g, "g")
    if g.shape[0] == 0:
        return g.copy()
    evals, evecs = linalg.eigh(g, check_finite=False)
    lam_max = max(evals[-1], 0.0)
    if evals[0] < -tol * lam_max or (lam_max == 0.0 and evals[0] < 0):
        raise NotPSDError(
            f"matrix is not PSD: eigenvalue {evals[0]:.3e} (largest {lam_max:.3e})",
            eigenvalue=float(evals[0]),
        )
    root = np.sqrt(np.clip(evals, 0.0, None))
    s = (evecs * root) @ evecs.T
    return 0.5 * (s + s.T)
