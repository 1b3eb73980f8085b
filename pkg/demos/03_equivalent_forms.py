"""
Three ways to write the same estimator
======================================

The dual-coefficient form of the two-stage estimator can also be written with
an ``n x m`` coefficient matrix, or solved through its normal equations. All
three predict the same bridge when the induced Gram matrix is well conditioned.
"""

# %%
import numpy as np

from singleproxy import (Bandwidths, fit_skpv, fit_skpv_mastouri, fit_skpv_singh, fit_spmmr,
                         fit_spmmr_alt, generate, SynthConfig)

data = generate(SynthConfig(n=40, seed=8))
bw = Bandwidths.from_data(data.a, data.y, data.w)
rng = np.random.default_rng(0)
qa, qw = rng.uniform(0, 1, 200), rng.uniform(0.4, 2.7, 200)

# %%
ref = fit_skpv(data, bw=bw).predict(qa, qw)
for name, fit in [("matrix form", fit_skpv_mastouri), ("normal equations", fit_skpv_singh)]:
    diff = np.max(np.abs(fit(data, bw=bw).predict(qa, qw) - ref)) / np.max(np.abs(ref))
    print(f"SKPV {name:>17s}: max relative difference {diff:.1e}")

# %%
# The moment-restriction estimator has a square-root form and a normal-equation form.
ref = fit_spmmr(data, bw=bw).predict(qa, qw)
diff = np.max(np.abs(fit_spmmr_alt(data, bw=bw).predict(qa, qw) - ref)) / np.max(np.abs(ref))
print(f"SPMMR normal equations: max relative difference {diff:.1e}")
