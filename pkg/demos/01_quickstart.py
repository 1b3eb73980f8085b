"""
Recovering a dose-response curve with one proxy
===============================================

A hidden variable ``u`` pushes both the treatment ``a`` and the outcome ``y``.
Regressing ``y`` on ``a`` mixes the causal effect with that hidden push. A
proxy ``w`` that sees ``u`` lets us undo the mixing.
"""

# %%
# Draw a synthetic sample. The true curve is ``a**2 - 0.3``.
import numpy as np

from singleproxy import (fit_krr, fit_skpv, fit_spmmr, generate, percentile_grid,
                         structural_curve, SynthConfig, true_structural)

data = generate(SynthConfig(n=500, noise_sigma=0.0, seed=1))
grid = percentile_grid(data.a, num=9)
truth = true_structural(grid)

# %%
# Fit the plain regression and both proxy estimators with their defaults.
models = {
    "regression": fit_krr(data.a, data.y),
    "skpv": fit_skpv(data),
    "spmmr": fit_spmmr(data),
}

# %%
# Each curve averages the fitted bridge over the observed proxies.
print(f"{'a':>7s} {'truth':>8s}" + "".join(f"{name:>12s}" for name in models))
curves = {name: structural_curve(m, None, grid) for name, m in models.items()}
for i, a in enumerate(grid):
    print(f"{a:7.3f} {truth[i]:8.3f}" + "".join(f"{c.values[i]:12.3f}" for c in curves.values()))

# %%
# Mean squared error against the truth on this grid.
for name, c in curves.items():
    print(f"{name:>10s}: {np.mean((c.values - truth) ** 2):.4f}")
