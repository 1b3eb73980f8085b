"""Single Kernel Proxy Variable (SKPV) two-stage estimator.

Stage 1 regresses the proxy features on the (treatment, outcome) tensor
features, giving one conditional-mean-embedding weight vector per stage-2
point (the columns of ``B``). Stage 2 is kernel ridge regression of the
outcome on the induced kernel ``M = K_{A2 A2} * (B^T K_WW B)``.

Shapes: ``n`` stage-1 rows, ``m`` stage-2 rows; ``B`` is ``(n, m)`` and the
bridge evaluates as ``alpha^T (k_{A2}(a) * B^T k_W(w))`` with ``k_{A2}(a)`` of
length ``m`` and ``k_W(w)`` of length ``n``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import khatri_rao

from .errors import DimensionError
from .kernels import Bandwidths, as_points, gram
from .linalg import hadamard, solve_psd

DEFAULT_LAMBDA = 1e-3
DEFAULT_ETA = 1e-3


def _check_dim(x, ref, what):
    if x.shape[1] != ref.shape[1]:
        raise DimensionError(f"{what} dimension {x.shape[1]} does not match model ({ref.shape[1]})")


@dataclass(frozen=True, eq=False)
class SkpvModel:
    alpha: np.ndarray
    b_matrix: np.ndarray
    stage1_w: np.ndarray
    stage2_a: np.ndarray
    bandwidths: Bandwidths
    lam: float
    eta: float

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float).reshape(-1)
        b = np.asarray(self.b_matrix, dtype=float)
        w1 = as_points(self.stage1_w)
        a2 = as_points(self.stage2_a)
        if b.ndim != 2 or b.shape != (w1.shape[0], a2.shape[0]) or alpha.shape[0] != a2.shape[0]:
            raise DimensionError(
                f"inconsistent SKPV shapes: alpha {alpha.shape}, B {b.shape}, "
                f"stage-1 proxies {w1.shape[0]}, stage-2 treatments {a2.shape[0]}"
            )
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(b))):
            raise ValueError("SKPV model has non-finite entries")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "b_matrix", b)
        object.__setattr__(self, "stage1_w", w1)
        object.__setattr__(self, "stage2_a", a2)

    @property
    def default_proxies(self):
        return self.stage1_w

    def predict(self, a, w):
        """Bridge function at paired query points ``(a[q], w[q])``."""
        a, w = as_points(a), as_points(w)
        _check_dim(a, self.stage2_a, "treatment")
        _check_dim(w, self.stage1_w, "proxy")
        if a.shape[0] != w.shape[0]:
            raise DimensionError("need as many treatment queries as proxy queries")
        bw = self.bandwidths
        k_a = gram(a, self.stage2_a, bw.sigma_a)
        k_w = gram(w, self.stage1_w, bw.sigma_w) @ self.b_matrix
        return (k_a * k_w) @ self.alpha

    def structural(self, grid, proxies):
        """Average of the bridge over ``proxies`` at each treatment in ``grid``."""
        grid, proxies = as_points(grid), as_points(proxies)
        _check_dim(grid, self.stage2_a, "treatment")
        _check_dim(proxies, self.stage1_w, "proxy")
        mean_kw = gram(self.stage1_w, proxies, self.bandwidths.sigma_w).mean(axis=1)
        weights = self.alpha * (self.b_matrix.T @ mean_kw)
        return gram(grid, self.stage2_a, self.bandwidths.sigma_a) @ weights


def _resolve(d1, d2, bw):
    if d2 is None:
        d2 = d1.stage_two()
    if d1.a.shape[1] != d2.a.shape[1]:
        raise DimensionError("stage-1 and stage-2 treatments differ in dimension")
    if bw is None:
        bw = Bandwidths.from_data(d1.a, d1.y, d1.w)
    return d2, bw


def _check_reg(name, value):
    if not (np.isfinite(value) and value >= 0):
        raise ValueError(f"{name} must be a nonnegative finite number, got {value}")


def fit_stage1(d1, d2, lam=DEFAULT_LAMBDA, bw=None):
    """Conditional-mean-embedding weights ``B = (K_AA*K_YY + n lam I)^{-1} (K_{A A2}*K_{Y Y2})``.

    Column ``j`` holds the weights of the embedded proxy distribution given
    the ``j``-th stage-2 (treatment, outcome) pair.
    """
    _check_reg("lambda", lam)
    d2, bw = _resolve(d1, d2, bw)
    n = len(d1)
    k11 = hadamard(gram(d1.a, d1.a, bw.sigma_a), gram(d1.y, d1.y, bw.sigma_y))
    k12 = hadamard(gram(d1.a, d2.a, bw.sigma_a), gram(d1.y, d2.y, bw.sigma_y))
    return solve_psd(k11, n * lam, k12)


def stage2_matrix(d1, d2, b, bw):
    """The induced stage-2 Gram matrix ``M`` (symmetrized)."""
    k_ww = gram(d1.w, d1.w, bw.sigma_w)
    m_mat = hadamard(gram(d2.a, d2.a, bw.sigma_a), b.T @ k_ww @ b)
    return 0.5 * (m_mat + m_mat.T)


def stage2_alpha(m_mat, eta, y2):
    """``(M + m eta I)^{-1} y2``."""
    return solve_psd(m_mat, len(y2) * eta, y2)


def stage2_alpha_singh(m_mat, eta, y2):
    """``(M M + m eta M)^{-1} M y2``; fails or loses accuracy when ``M`` is near singular."""
    lhs = m_mat @ m_mat + len(y2) * eta * m_mat
    return solve_psd(0.5 * (lhs + lhs.T), 0.0, m_mat @ y2)


def _prepare(d1, d2, lam, eta, bw):
    _check_reg("eta", eta)
    d2, bw = _resolve(d1, d2, bw)
    b = fit_stage1(d1, d2, lam, bw)
    return d2, bw, b, stage2_matrix(d1, d2, b, bw)


def fit_skpv(d1, d2=None, lam=DEFAULT_LAMBDA, eta=DEFAULT_ETA, bw=None):
    """Fit the SKPV bridge function.

    Parameters
    ----------
    d1 : Dataset
        Stage-1 sample (treatment, outcome, proxy).
    d2 : StageTwoDataset, optional
        Stage-2 sample; defaults to the stage-1 rows without the proxy.
    lam, eta : float
        Stage-1 and stage-2 ridge parameters (scaled by ``n`` and ``m``).
    bw : Bandwidths, optional
        Defaults to the median heuristic on the stage-1 sample.

    Returns
    -------
    SkpvModel
        ``alpha = (M + m eta I)^{-1} y2``.
    """
    d2, bw, b, m_mat = _prepare(d1, d2, lam, eta, bw)
    alpha = stage2_alpha(m_mat, eta, d2.y)
    return SkpvModel(alpha, b, d1.w, d2.a, bw, float(lam), float(eta))


def fit_skpv_singh(d1, d2=None, lam=DEFAULT_LAMBDA, eta=DEFAULT_ETA, bw=None):
    """Same estimator through the normal equations ``(M M + m eta M) alpha = M y2``.

    Algebraically equal to :func:`fit_skpv` when ``M`` is invertible, but the
    system squares the condition number of ``M``; kept for comparisons.
    """
    d2, bw, b, m_mat = _prepare(d1, d2, lam, eta, bw)
    alpha = stage2_alpha_singh(m_mat, eta, d2.y)
    return SkpvModel(alpha, b, d1.w, d2.a, bw, float(lam), float(eta))


@dataclass(frozen=True, eq=False)
class GammaBridge:
    """Bridge in the ``n x m`` coefficient-matrix form ``k_W(w)^T Gamma k_{A2}(a)``."""

    gamma: np.ndarray
    stage1_w: np.ndarray
    stage2_a: np.ndarray
    bandwidths: Bandwidths

    def predict(self, a, w):
        a, w = as_points(a), as_points(w)
        bw = self.bandwidths
        k_w = gram(w, self.stage1_w, bw.sigma_w)
        k_a = gram(a, self.stage2_a, bw.sigma_a)
        return np.einsum("qi,ij,qj->q", k_w, self.gamma, k_a)


def gamma_from_rows(b, alpha):
    """Row ``i`` of Gamma is ``B[i, :] * alpha``."""
    return np.asarray(b) * np.asarray(alpha)[None, :]


def gamma_from_vec(b, alpha):
    """``vec(Gamma) = (B (column-wise Kronecker) I_m) alpha`` with row-major vec."""
    b = np.asarray(b)
    n, m = b.shape
    return (khatri_rao(b, np.eye(m)) @ np.asarray(alpha)).reshape(n, m)


def fit_skpv_mastouri(d1, d2=None, lam=DEFAULT_LAMBDA, eta=DEFAULT_ETA, bw=None):
    """SKPV in the ``n * m`` parameter form; predictions equal :func:`fit_skpv`."""
    d2, bw, b, m_mat = _prepare(d1, d2, lam, eta, bw)
    alpha = stage2_alpha(m_mat, eta, d2.y)
    return GammaBridge(gamma_from_rows(b, alpha), d1.w, d2.a, bw)


def predict_bridge(model, a, w):
    """Bridge value at a single ``(a, w)`` pair."""
    a = np.atleast_1d(np.asarray(a, dtype=float))[None, :]
    w = np.atleast_1d(np.asarray(w, dtype=float))[None, :]
    return float(model.predict(a, w)[0])
