"""Monte Carlo noise sweep comparing the regression baseline, SKPV and SPMMR.

Each (noise level, replication) cell draws its own data from a derived seed,
fits every requested method with median-heuristic bandwidths, evaluates the
structural curve on a percentile grid and scores it against ``a^2 - 0.3``.
BLAS is pinned to one thread inside every task so results do not depend on
how many worker processes run them.
"""

import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from threadpoolctl import threadpool_limits

from . import krr, skpv, spmmr
from .kernels import Bandwidths
from .structural import curve_mse, percentile_grid, structural_curve
from .synth import SynthConfig, generate, replication_seed, true_structural

METHODS = ("regression", "skpv", "spmmr")
DEFAULT_NOISE = (0.0, 0.1, 0.5, 1.0)
SCHEMA_VERSION = 1


def run_replication(task):
    """Fit all methods on one synthetic draw. ``task`` is a plain dict (picklable)."""
    with threadpool_limits(limits=1):
        cfg = SynthConfig(n=task["n"], noise_sigma=task["noise"], seed=task["seed"], phi=task["phi"])
        d = generate(cfg)
        bw = Bandwidths.from_data(d.a, d.y, d.w, scale=task["bandwidth_scale"])
        grid = percentile_grid(d.a, num=task["grid_num"])
        truth = true_structural(grid)
        out = {"mse": {}, "errors": {}}
        for method in task["methods"]:
            try:
                if method == "regression":
                    model = krr.fit_krr(d.a, d.y, lam=task["krr_lambda"], sigma_a=bw.sigma_a)
                elif method == "skpv":
                    model = skpv.fit_skpv(d, lam=task["lambda"], eta=task["eta"], bw=bw)
                elif method == "spmmr":
                    model = spmmr.fit_spmmr(d, eta=task["spmmr_eta"], bw=bw)
                else:
                    raise ValueError(f"unknown method {method!r}")
                out["mse"][method] = curve_mse(structural_curve(model, None, grid), truth)
            except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
                out["errors"][method] = f"{type(exc).__name__}: {exc}"
        return out


def _summarize(values, std_mode):
    if not values:
        return None, None
    arr = np.asarray(values)
    std = float(np.std(arr))
    if std_mode == "stderr":
        std /= np.sqrt(arr.size)
    return float(np.mean(arr)), std


def run_benchmark(
    n=1000,
    reps=20,
    noise=DEFAULT_NOISE,
    seed=0,
    methods=METHODS,
    lam=skpv.DEFAULT_LAMBDA,
    eta=skpv.DEFAULT_ETA,
    spmmr_eta=spmmr.DEFAULT_ETA,
    krr_lambda=krr.DEFAULT_LAMBDA,
    bandwidth_scale=1.0,
    phi="cdf",
    grid_num=100,
    std_mode="stderr",
    parallelism=1,
    timing=False,
):
    """Run the sweep and return the report as a JSON-ready dict.

    ``std_mode="stderr"`` reports the population standard deviation of the
    per-replication MSEs divided by ``sqrt(reps)``; ``"raw"`` reports the
    deviation itself. Per-replication MSEs are always included.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if std_mode not in ("stderr", "raw"):
        raise ValueError(f"std_mode must be 'stderr' or 'raw', got {std_mode!r}")
    methods = tuple(methods)
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods: {sorted(unknown)}")
    noise = [float(s) for s in noise]
    start = time.perf_counter()

    tasks = []
    for k, sigma in enumerate(noise):
        for r in range(reps):
            tasks.append({
                "noise_index": k, "rep": r, "noise": sigma,
                "seed": replication_seed(seed, k, r), "n": n, "phi": phi,
                "methods": methods, "lambda": lam, "eta": eta, "spmmr_eta": spmmr_eta,
                "krr_lambda": krr_lambda, "bandwidth_scale": bandwidth_scale,
                "grid_num": grid_num,
            })
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(run_replication, tasks))
    else:
        results = [run_replication(t) for t in tasks]

    cells = []
    for method in methods:
        for k, sigma in enumerate(noise):
            mses, failures = [], []
            for task, res in zip(tasks, results):
                if task["noise_index"] != k:
                    continue
                if method in res["mse"]:
                    mses.append(res["mse"][method])
                else:
                    failures.append({"rep": task["rep"], "error": res["errors"][method]})
            mean, std = _summarize(mses, std_mode)
            cells.append({
                "method": method, "noise": sigma, "mean_mse": mean, "std_mse": std,
                "replications": len(mses), "mse": mses, "failures": failures,
            })

    report = {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "n": n, "reps": reps, "noise": noise, "seed": seed, "methods": list(methods),
            "lambda": lam, "eta": eta, "spmmr_eta": spmmr_eta, "krr_lambda": krr_lambda,
            "bandwidth": {"rule": "median", "scale": bandwidth_scale},
            "phi": phi, "std": std_mode,
        },
        "grid": {"kind": "percentile", "num": grid_num, "lower": 2.5, "upper": 97.5},
        "seeds": [
            {"noise_index": t["noise_index"], "rep": t["rep"], "seed": t["seed"]} for t in tasks
        ],
        "cells": cells,
    }
    if timing:
        report["wall_clock_seconds"] = time.perf_counter() - start
    return report


def cell(report, method, noise):
    """Look up one (method, noise) cell of a report."""
    for c in report["cells"]:
        if c["method"] == method and c["noise"] == noise:
            return c
    raise KeyError((method, noise))
