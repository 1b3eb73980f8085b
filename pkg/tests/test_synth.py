import math

import mpmath
import numpy as np
import pytest

from singleproxy.synth import SynthConfig, gaussian_cdf, generate, replication_seed, true_structural


def test_deterministic_confounding_at_zero_noise():
    d, u = generate(SynthConfig(n=500, noise_sigma=0.0, seed=3), return_confounder=True)
    a = d.a[:, 0]
    np.testing.assert_array_equal(d.y - (np.sin(2 * np.pi * u) + a**2 - 0.3), 0.0)


def test_noise_is_additive_gaussian():
    cfg = SynthConfig(n=20000, noise_sigma=0.5, seed=4)
    d, u = generate(cfg, return_confounder=True)
    resid = d.y - (np.sin(2 * np.pi * u) + d.a[:, 0] ** 2 - 0.3)
    assert abs(resid.mean()) < 3 * 0.5 / math.sqrt(cfg.n)
    assert resid.std() == pytest.approx(0.5, rel=0.03)


def test_same_seed_same_data():
    d1, d2 = generate(SynthConfig(n=50, seed=9)), generate(SynthConfig(n=50, seed=9))
    for name in ("a", "y", "w"):
        np.testing.assert_array_equal(getattr(d1, name), getattr(d2, name))


def test_different_seeds_differ():
    d1, d2 = generate(SynthConfig(n=50, seed=1)), generate(SynthConfig(n=50, seed=2))
    assert not np.any(d1.a == d2.a)


def test_moments():
    n = 100_000
    d, u = generate(SynthConfig(n=n, seed=12), return_confounder=True)
    w, a = d.w[:, 0], d.a[:, 0]
    mean_w = (math.e - 1 / math.e) / 2
    assert abs(w.mean() - mean_w) <= 3 * w.std() / math.sqrt(n)
    assert abs(a.mean() - 0.5) <= 3 * a.std() / math.sqrt(n)


def test_treatment_range():
    d = generate(SynthConfig(n=20000, seed=5))
    lo, hi = gaussian_cdf(-1) - 0.6, gaussian_cdf(1) + 0.6
    assert np.all((d.a > lo) & (d.a < hi))


def test_erf_link_is_centered():
    d = generate(SynthConfig(n=20000, seed=6, phi="erf"))
    assert abs(d.a.mean()) < 0.02


def test_true_structural():
    assert true_structural(0.0) == pytest.approx(-0.3)
    assert true_structural(1.0) == pytest.approx(0.7)
    assert true_structural(-0.37) == true_structural(0.37)


def test_gaussian_cdf_basics():
    assert gaussian_cdf(0.0) == 0.5
    for u in np.linspace(-6, 6, 25):
        assert gaussian_cdf(u) + gaussian_cdf(-u) == pytest.approx(1.0, abs=1e-15)


def test_gaussian_cdf_against_quadrature():
    mpmath.mp.dps = 30
    for u in (-2.5, -0.3, 1.0, 3.0):
        ref = 0.5 + mpmath.quad(lambda t: mpmath.exp(-t**2 / 2), [0, u]) / mpmath.sqrt(2 * mpmath.pi)
        assert abs(gaussian_cdf(u) - float(ref)) <= 1e-12
    assert gaussian_cdf(1.0) == pytest.approx(0.841345, abs=1e-6)


@pytest.mark.parametrize("kwargs", [{"n": 1}, {"n": 10, "noise_sigma": -1.0}, {"n": 10, "phi": "tanh"}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SynthConfig(**kwargs)


def test_replication_seeds_distinct_and_stable():
    seeds = {replication_seed(0, k, r) for k in range(4) for r in range(20)}
    assert len(seeds) == 80
    assert replication_seed(7, 2, 3) == replication_seed(7, 2, 3)
    assert replication_seed(7, 2, 3) != replication_seed(8, 2, 3)
