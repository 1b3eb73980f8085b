"""Independent reference computations used by the tests.

Everything here is built from scalar loops and ``math.exp``; none of it calls
into the package's Gram, solve or square-root code paths.
"""

import itertools
import math

import numpy as np
from scipy.optimize import minimize


def k(x, x2, sigma):
    x = np.atleast_1d(x)
    x2 = np.atleast_1d(x2)
    return math.exp(-sum((float(p) - float(q)) ** 2 for p, q in zip(x, x2)) / (2 * sigma * sigma))


def loop_gram(xs, xs2, sigma):
    return np.array([[k(p, q, sigma) for q in xs2] for p in xs])


def loop_median(points):
    pts = [np.atleast_1d(p) for p in points]
    d = sorted(
        math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(p, q)))
        for p, q in itertools.combinations(pts, 2)
    )
    d = [v for v in d if v > 0]
    mid = len(d) // 2
    return d[mid] if len(d) % 2 else 0.5 * (d[mid - 1] + d[mid])


def skpv_feature_gram(d1, a2, y2, lam, bw):
    """Inner products of the stage-2 features phi_A(a2_j) (x) mu(a2_j, y2_j).

    The embedding weights are solved one query at a time with a generic
    dense solver.
    """
    n = len(d1.y)
    kaa = loop_gram(d1.a, d1.a, bw.sigma_a)
    kyy = loop_gram(d1.y, d1.y, bw.sigma_y)
    kww = loop_gram(d1.w, d1.w, bw.sigma_w)
    lhs = kaa * kyy + n * lam * np.eye(n)
    betas = []
    for aj, yj in zip(a2, y2):
        rhs = np.array([k(d1.a[i], aj, bw.sigma_a) * k(d1.y[i], yj, bw.sigma_y) for i in range(n)])
        betas.append(np.linalg.solve(lhs, rhs))
    m = len(y2)
    feat = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            feat[i, j] = k(a2[i], a2[j], bw.sigma_a) * (betas[i] @ kww @ betas[j])
    return feat


def argmin_quadratic(fun, grad, dim, x0=None):
    """BFGS on an unconstrained smooth objective, driven to a tight gradient tolerance."""
    x0 = np.zeros(dim) if x0 is None else x0
    res = minimize(fun, x0, jac=grad, method="BFGS", options={"gtol": 1e-13, "maxiter": 100000})
    return res.x


def skpv_stage2_argmin(feat, y2, eta):
    """Minimize (1/m) sum_i (y_i - <h, psi_i>)^2 + eta |h|^2 with h = sum_j alpha_j psi_j."""
    m = len(y2)

    def fun(alpha):
        r = y2 - feat @ alpha
        return r @ r / m + eta * alpha @ feat @ alpha

    def grad(alpha):
        return -2.0 / m * feat @ (y2 - feat @ alpha) + 2.0 * eta * feat @ alpha

    return argmin_quadratic(fun, grad, m)


def spmmr_argmin(d, eta, bw):
    """Minimize the double-sum moment loss plus eta |h|^2 over dual coordinates."""
    n = len(d.y)
    ka = loop_gram(d.a, d.a, bw.sigma_a)
    ky = loop_gram(d.y, d.y, bw.sigma_y)
    kw = loop_gram(d.w, d.w, bw.sigma_w)
    lmat = ka * kw

    def fun(alpha):
        h = lmat @ alpha
        r = d.y - h
        total = 0.0
        for i in range(n):
            for j in range(n):
                total += r[i] * r[j] * ka[i, j] * ky[i, j]
        return total / n**2 + eta * alpha @ lmat @ alpha

    def grad(alpha):
        r = d.y - lmat @ alpha
        g = ka * ky
        return -2.0 / n**2 * lmat @ (g @ r) + 2.0 * eta * lmat @ alpha

    return argmin_quadratic(fun, grad, n)
