"""Gaussian kernels, median-heuristic bandwidths and Gram matrices."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .errors import DegenerateSampleError, DimensionError

MEDIAN_MAX_POINTS = 2000
MEDIAN_SUBSAMPLE_SEED = 0


def as_points(x):
    """Coerce scalars / 1-D input to an ``(n, d)`` float array (1-D means d = 1)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return x.reshape(1, 1)
    if x.ndim == 1:
        return x[:, None]
    if x.ndim != 2:
        raise DimensionError(f"expected at most 2 dimensions, got shape {x.shape}")
    return x


def _check_sigma(sigma):
    if not (np.isfinite(sigma) and sigma > 0):
        raise ValueError(f"bandwidth must be positive and finite, got {sigma}")


@dataclass(frozen=True)
class Bandwidths:
    """Gaussian length scales for the treatment, outcome and proxy spaces."""

    sigma_a: float
    sigma_y: float
    sigma_w: float

    def __post_init__(self):
        for name in ("sigma_a", "sigma_y", "sigma_w"):
            _check_sigma(getattr(self, name))

    @classmethod
    def from_data(cls, a, y, w, scale=1.0):
        """Median heuristic applied to each variable separately, times ``scale``."""
        return cls(
            sigma_a=scale * median_heuristic(a),
            sigma_y=scale * median_heuristic(y),
            sigma_w=scale * median_heuristic(w),
        )

    def replace(self, **overrides):
        fields = {"sigma_a": self.sigma_a, "sigma_y": self.sigma_y, "sigma_w": self.sigma_w}
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return Bandwidths(**fields)


def gaussian_kernel(x, x2, sigma):
    """``exp(-|x - x2|^2 / (2 sigma^2))`` for a single pair of vectors."""
    _check_sigma(sigma)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    if x.shape != x2.shape:
        raise DimensionError(f"vector dimensions differ: {x.shape} vs {x2.shape}")
    d2 = float(np.sum((x - x2) ** 2))
    return float(np.exp(-d2 / (2.0 * sigma * sigma)))


def median_heuristic(points, max_points=MEDIAN_MAX_POINTS):
    """Median of the nonzero pairwise Euclidean distances.

    Samples larger than ``max_points`` are thinned to a fixed-seed uniform
    subsample first, which keeps the cost bounded and the result reproducible.
    """
    x = as_points(points)
    if x.shape[0] < 2:
        raise DegenerateSampleError("median heuristic needs at least two points")
    if x.shape[0] > max_points:
        rng = np.random.default_rng(MEDIAN_SUBSAMPLE_SEED)
        idx = np.sort(rng.choice(x.shape[0], size=max_points, replace=False))
        x = x[idx]
    d = pdist(x, "euclidean")
    d = d[d > 0]
    if d.size == 0:
        raise DegenerateSampleError("all pairwise distances are zero")
    return float(np.median(d))


def gram(xs, xs2, sigma):
    """Cross-Gram matrix ``K[i, j] = k(xs[i], xs2[j])``."""
    _check_sigma(sigma)
    x = as_points(xs)
    x2 = as_points(xs2)
    if x.shape[1] != x2.shape[1]:
        raise DimensionError(
            f"point dimensions differ: {x.shape[1]} vs {x2.shape[1]}"
        )
    d2 = cdist(x, x2, "sqeuclidean")
    return np.exp(-d2 / (2.0 * sigma * sigma))
