"""Single Proxy Maximum Moment Restriction (SPMMR) estimator.

The adversarial maximum over unit-norm test functions in the (treatment,
outcome) RKHS has a closed form, leaving the V-statistic loss
``(1/n^2) r^T G r`` with residual ``r = y - h`` and ``G = K_AA * K_YY``.
Adding ``eta * |h|^2`` and solving in the span of ``k_A * k_W`` features
gives the dual coefficients.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .kernels import Bandwidths, as_points, gram
from .linalg import hadamard, solve_psd, sqrt_psd

DEFAULT_ETA = 1e-3


@dataclass(frozen=True, eq=False)
class SpmmrModel:
    alpha: np.ndarray
    anchors_a: np.ndarray
    anchors_w: np.ndarray
    bandwidths: Bandwidths
    eta: float

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float).reshape(-1)
        a = as_points(self.anchors_a)
        w = as_points(self.anchors_w)
        if not alpha.shape[0] == a.shape[0] == w.shape[0]:
            raise DimensionError(
                f"inconsistent SPMMR shapes: alpha {alpha.shape[0]}, anchors {a.shape[0]}/{w.shape[0]}"
            )
        if not np.all(np.isfinite(alpha)):
            raise ValueError("SPMMR model has non-finite coefficients")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "anchors_a", a)
        object.__setattr__(self, "anchors_w", w)

    @property
    def default_proxies(self):
        return self.anchors_w

    def _check(self, a, w):
        if a.shape[1] != self.anchors_a.shape[1]:
            raise DimensionError("treatment dimension does not match model")
        if w.shape[1] != self.anchors_w.shape[1]:
            raise DimensionError("proxy dimension does not match model")

    def predict(self, a, w):
        """Bridge function at paired query points ``(a[q], w[q])``."""
        a, w = as_points(a), as_points(w)
        self._check(a, w)
        if a.shape[0] != w.shape[0]:
            raise DimensionError("need as many treatment queries as proxy queries")
        bw = self.bandwidths
        feats = gram(a, self.anchors_a, bw.sigma_a) * gram(w, self.anchors_w, bw.sigma_w)
        return feats @ self.alpha

    def structural(self, grid, proxies):
        """Average of the bridge over ``proxies`` at each treatment in ``grid``."""
        grid, proxies = as_points(grid), as_points(proxies)
        self._check(grid, proxies)
        mean_kw = gram(self.anchors_w, proxies, self.bandwidths.sigma_w).mean(axis=1)
        return gram(grid, self.anchors_a, self.bandwidths.sigma_a) @ (self.alpha * mean_kw)


def _matrices(d, bw):
    k_aa = gram(d.a, d.a, bw.sigma_a)
    lmat = hadamard(k_aa, gram(d.w, d.w, bw.sigma_w))
    gmat = hadamard(k_aa, gram(d.y, d.y, bw.sigma_y))
    return lmat, gmat


def _check_eta(eta):
    if not (np.isfinite(eta) and eta >= 0):
        raise ValueError(f"eta must be a nonnegative finite number, got {eta}")


def fit_spmmr(d, eta=DEFAULT_ETA, bw=None):
    """Fit ``alpha = S (S L S + n^2 eta I)^{-1} S y`` with ``S = sqrt(G)``.

    ``L = K_AA * K_WW`` and ``G = K_AA * K_YY``; bandwidths default to the
    median heuristic on ``d``.
    """
    _check_eta(eta)
    if bw is None:
        bw = Bandwidths.from_data(d.a, d.y, d.w)
    n = len(d)
    lmat, gmat = _matrices(d, bw)
    s = sqrt_psd(gmat)
    inner = s @ lmat @ s
    inner = 0.5 * (inner + inner.T)
    alpha = s @ solve_psd(inner, n * n * eta, s @ d.y)
    return SpmmrModel(alpha, d.a, d.w, bw, float(eta))


def fit_spmmr_alt(d, eta=DEFAULT_ETA, bw=None):
    """Same estimator through ``(L G L + n^2 eta L) alpha = L G y``.

    Matches :func:`fit_spmmr` when ``L`` and ``G`` are nonsingular; poorly
    conditioned otherwise.
    """
    _check_eta(eta)
    if bw is None:
        bw = Bandwidths.from_data(d.a, d.y, d.w)
    n = len(d)
    lmat, gmat = _matrices(d, bw)
    lhs = lmat @ gmat @ lmat + n * n * eta * lmat
    lhs = 0.5 * (lhs + lhs.T)
    alpha = solve_psd(lhs, 0.0, lmat @ (gmat @ d.y))
    return SpmmrModel(alpha, d.a, d.w, bw, float(eta))


def mmr_loss(h_values, d, bw):
    """V-statistic moment loss ``(1/n^2) (y - h)^T (K_AA * K_YY) (y - h)``."""
    h = np.asarray(h_values, dtype=float).reshape(-1)
    n = len(d)
    if h.shape[0] != n:
        raise DimensionError(f"{h.shape[0]} bridge values for {n} samples")
    r = d.y - h
    gmat = hadamard(gram(d.a, d.a, bw.sigma_a), gram(d.y, d.y, bw.sigma_y))
    return float(r @ gmat @ r) / (n * n)


def objective(model, d):
    """Regularized empirical objective ``mmr_loss + eta * alpha^T L alpha`` at the training sample."""
    lmat, _ = _matrices(d, model.bandwidths)
    h = lmat @ model.alpha
    return mmr_loss(h, d, model.bandwidths) + model.eta * float(model.alpha @ lmat @ model.alpha)


def predict_bridge(model, a, w):
    """Bridge value at a single ``(a, w)`` pair."""
    a = np.atleast_1d(np.asarray(a, dtype=float))[None, :]
    w = np.atleast_1d(np.asarray(w, dtype=float))[None, :]
    return float(model.predict(a, w)[0])
