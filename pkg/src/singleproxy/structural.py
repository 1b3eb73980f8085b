"""Dose-response estimates from fitted bridge functions.

The structural function at treatment ``a`` is the bridge averaged over a
sample of proxies: ``f(a) = mean_i h(a, w_i)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .kernels import as_points
from .krr import KrrModel
from .skpv import SkpvModel
from .spmmr import SpmmrModel

METHODS = ("krr", "skpv", "spmmr")


def method_of(model):
    if isinstance(model, KrrModel):
        return "krr"
    if isinstance(model, SkpvModel):
        return "skpv"
    if isinstance(model, SpmmrModel):
        return "spmmr"
    raise TypeError(f"unsupported model type {type(model).__name__}")


@dataclass(frozen=True, eq=False)
class StructuralCurve:
    grid: np.ndarray
    values: np.ndarray
    method: str

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float).reshape(-1)
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if grid.shape != values.shape:
            raise DimensionError("grid and values differ in length")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("structural curve has non-finite values")
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)


def _proxies(bridge, proxies):
    if proxies is None:
        return bridge.default_proxies
    proxies = as_points(proxies)
    if proxies.shape[0] == 0:
        raise ValueError("need at least one proxy sample")
    return proxies


def estimate_structural(bridge, proxies, a):
    """Mean of the bridge ``h(a, w_i)`` over the supplied proxies, at one treatment ``a``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))[None, :]
    return float(bridge.structural(a, _proxies(bridge, proxies))[0])


def structural_curve(bridge, proxies, grid):
    """Evaluate the structural function along a strictly increasing scalar grid.

    ``proxies=None`` uses the model's own stage-1 proxies. A :class:`KrrModel`
    ignores the proxies and returns its regression curve.
    """
    grid = np.asarray(grid, dtype=float).reshape(-1)
    if grid.size == 0:
        raise ValueError("empty grid")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("grid must be strictly increasing")
    if isinstance(bridge, KrrModel):
        values = bridge.predict(grid)
    else:
        values = bridge.structural(grid, _proxies(bridge, proxies))
    return StructuralCurve(grid, values, method_of(bridge))


def curve_mse(curve, truth):
    values = curve.values if isinstance(curve, StructuralCurve) else np.asarray(curve, dtype=float)
    truth = np.asarray(truth, dtype=float).reshape(-1)
    if truth.shape != values.shape:
        raise DimensionError(f"curve has {values.size} points, truth has {truth.size}")
    return float(np.mean((values - truth) ** 2))


def percentile_grid(a, num=100, lower=2.5, upper=97.5):
    """``num`` evenly spaced points between two empirical percentiles of scalar treatments."""
    a = as_points(a)
    if a.shape[1] != 1:
        raise DimensionError("percentile grids are only defined for scalar treatments")
    lo, hi = np.percentile(a[:, 0], [lower, upper])
    if num == 1:
        return np.array([0.5 * (lo + hi)])
    return np.linspace(lo, hi, num)
