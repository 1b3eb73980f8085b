"""Synthetic confounded data with a single proxy.

    U ~ Uniform(-1, 1)
    A = Phi(U) + N(0, 0.1^2)
    Y = sin(2 pi U) + A^2 - 0.3 + N(0, noise_sigma^2)
    W = exp(U) + N(0, 0.05^2)

The true dose-response is ``a^2 - 0.3``. With ``noise_sigma = 0`` the outcome
is a deterministic function of (A, U); any positive noise breaks that.

Random numbers come from numpy's PCG64. Per-replication streams are derived
with :func:`replication_seed`, which hashes ``(seed, noise_index, rep)``
through :class:`numpy.random.SeedSequence` so a cell's stream never depends
on scheduling.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erf, ndtr

from .data import Dataset

A_NOISE = 0.1
W_NOISE = 0.05
PHI_CHOICES = ("cdf", "erf")


def gaussian_cdf(u):
    """Standard normal CDF."""
    return ndtr(u)


def true_structural(a):
    return np.asarray(a, dtype=float) ** 2 - 0.3


@dataclass(frozen=True)
class SynthConfig:
    n: int
    noise_sigma: float = 0.0
    seed: int = 0
    phi: str = "cdf"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not (np.isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.phi not in PHI_CHOICES:
            raise ValueError(f"phi must be one of {PHI_CHOICES}, got {self.phi!r}")


def replication_seed(seed, noise_index, rep):
    """Derived 64-bit seed for replication ``rep`` at noise level ``noise_index``."""
    ss = np.random.SeedSequence(seed, spawn_key=(noise_index, rep))
    return int(ss.generate_state(1, np.uint64)[0])


def generate(cfg, return_confounder=False):
    """Draw ``cfg.n`` rows. With ``return_confounder`` also return the hidden ``U``."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    n = cfg.n
    u = rng.uniform(-1.0, 1.0, n)
    eps_a = rng.standard_normal(n)
    eps_y = rng.standard_normal(n)
    eps_w = rng.standard_normal(n)
    link = gaussian_cdf if cfg.phi == "cdf" else erf
    a = link(u) + A_NOISE * eps_a
    y = np.sin(2 * np.pi * u) + a**2 - 0.3
    if cfg.noise_sigma > 0:
        y = y + cfg.noise_sigma * eps_y
    w = np.exp(u) + W_NOISE * eps_w
    d = Dataset(a, y, w)
    if return_confounder:
        return d, u
    return d
