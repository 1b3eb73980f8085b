"""Kernel ridge regression of the outcome on the treatment.

This is the confounded baseline: it estimates ``E[Y | A = a]``, which differs
from the dose-response curve whenever the hidden confounder moves both.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .kernels import as_points, gram, median_heuristic
from .linalg import solve_psd

DEFAULT_LAMBDA = 1e-3


@dataclass(frozen=True, eq=False)
class KrrModel:
    anchors: np.ndarray
    alpha: np.ndarray
    sigma_a: float
    lam: float

    def __post_init__(self):
        anchors = as_points(self.anchors)
        alpha = np.asarray(self.alpha, dtype=float).reshape(-1)
        if anchors.shape[0] != alpha.shape[0]:
            raise DimensionError("KRR model: one coefficient per anchor required")
        if not np.all(np.isfinite(alpha)):
            raise ValueError("KRR model: non-finite coefficients")
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "alpha", alpha)

    def predict(self, a):
        """Vectorized prediction at treatments ``a`` (shape ``(q,)`` or ``(q, d)``)."""
        a = as_points(a)
        if a.shape[1] != self.anchors.shape[1]:
            raise DimensionError(
                f"treatment dimension {a.shape[1]} does not match model ({self.anchors.shape[1]})"
            )
        return gram(a, self.anchors, self.sigma_a) @ self.alpha


def fit_krr(a, y, lam=DEFAULT_LAMBDA, sigma_a=None):
    """Fit ``alpha = (K_AA + n * lam * I)^{-1} y``.

    ``sigma_a`` defaults to the median heuristic on ``a``.
    """
    a = as_points(a)
    y = np.asarray(y, dtype=float).reshape(-1)
    n = y.shape[0]
    if n < 2:
        raise ValueError("kernel ridge regression needs at least two samples")
    if a.shape[0] != n:
        raise DimensionError(f"{a.shape[0]} treatments but {n} outcomes")
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if sigma_a is None:
        sigma_a = median_heuristic(a)
    alpha = solve_psd(gram(a, a, sigma_a), n * lam, y)
    return KrrModel(anchors=a, alpha=alpha, sigma_a=float(sigma_a), lam=float(lam))


def predict_krr(model, a):
    """Prediction at a single treatment vector."""
    return float(model.predict(np.atleast_1d(np.asarray(a, dtype=float))[None, :])[0])
