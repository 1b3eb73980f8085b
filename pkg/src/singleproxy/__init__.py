"""Kernel single-proxy causal effect estimation.

Two closed-form estimators of the bridge function ``h(a, w)`` solving
``E[h(a, W) | A = a, Y = y] = y``: the two-stage SKPV estimator and the
maximum-moment-restriction SPMMR estimator. Averaging the bridge over the
proxy recovers the dose-response curve.
"""

from .data import Dataset, StageTwoDataset, load_csv, save_csv, split_stages
from .errors import DataError, DegenerateSampleError, DimensionError, NotPSDError, SingularMatrixError
from .kernels import Bandwidths, gaussian_kernel, gram, median_heuristic
from .krr import KrrModel, fit_krr, predict_krr
from .linalg import hadamard, solve_psd, sqrt_psd
from .skpv import SkpvModel, fit_skpv, fit_skpv_mastouri, fit_skpv_singh, fit_stage1
from .spmmr import SpmmrModel, fit_spmmr, fit_spmmr_alt, mmr_loss
from .structural import StructuralCurve, curve_mse, estimate_structural, percentile_grid, structural_curve
from .synth import SynthConfig, gaussian_cdf, generate, true_structural

__version__ = "0.1.0"
