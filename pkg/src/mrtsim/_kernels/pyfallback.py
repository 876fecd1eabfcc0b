"""Pure-numpy implementations of the hot kernels.

This backend is always importable; the compiled extension in ``_native``
implements the same contracts element-for-element. None of these functions
consume randomness: random draws stay in the orchestration layer so that the
backend choice cannot perturb any seeded stream.
"""

from __future__ import annotations

import numpy as np
from scipy import special, stats

from .tables import QuadTables

BACKEND_NAME = "python"

_LOG_SQRT_PI = 0.5 * np.log(np.pi)


def exp_average_many(
    hist: np.ndarray,
    counts: np.ndarray,
    gamma: float,
    lookback: int,
    empty_value: float,
) -> np.ndarray:
    """Row-wise discounted average of most-recent-first histories.

    ``hist`` is ``(n, lookback)``; ``counts[i]`` leading entries of row ``i``
    are valid. Full rows get the geometric weights normalized to sum 1,
    partial rows their plain average, empty rows ``empty_value``.
    """
    n = hist.shape[0]
    out = np.full(n, float(empty_value))
    c_gamma = (1.0 - gamma) / (1.0 - gamma**lookback)
    weights = c_gamma * gamma ** np.arange(lookback)

    full = counts >= lookback
    if np.any(full):
        out[full] = hist[full] @ weights
    partial = (counts > 0) & ~full
    if np.any(partial):
        idx = np.nonzero(partial)[0]
        mask = np.arange(lookback)[None, :] < counts[idx, None]
        out[idx] = (hist[idx] * mask).sum(axis=1) / counts[idx]
    return out


def rho_many(
    x: np.ndarray, lmin: float, lmax: float, c: float, b: float, k: float
) -> np.ndarray:
    """Generalized logistic lmin + (lmax-lmin) / (1 + c e^{-b x})^k, overflow-safe."""
    x = np.asarray(x, dtype=np.float64)
    log_denom = k * np.logaddexp(0.0, np.log(c) - b * x)
    return lmin + (lmax - lmin) * np.exp(-log_denom)


def _sat_many(z: np.ndarray, k: float) -> np.ndarray:
    """Saturation curve (1 + e^{-z})^{-k} on the sigmoid's own coordinate."""
    return np.exp(-k * np.logaddexp(0.0, -z))


def action_prob_many(
    mean: np.ndarray,
    var: np.ndarray,
    lmin: float,
    lmax: float,
    c: float,
    b: float,
    k: float,
    tables: QuadTables,
) -> np.ndarray:
    """E[rho(X)] for X ~ Normal(mean, var), element-wise over a batch.

    Substituting z = b x - ln c reduces the integrand to the saturation curve
    under z ~ Normal(mu_z, sigma_z^2). Narrow sigma_z uses Gauss-Hermite;
    wide sigma_z uses the fixed Gauss-Legendre grid in z plus the exact
    Gaussian mass above the grid (where the curve is saturated). Variances in
    [-1e-10, 0] count as degenerate; anything below that signals corruption.
    """
    mean = np.asarray(mean, dtype=np.float64)
    var = np.asarray(var, dtype=np.float64)
    if np.any(var < -1e-10):
        raise ValueError("negative advantage variance beyond tolerance")
    var = np.maximum(var, 0.0)

    mu_z = b * mean - np.log(c)
    sigma_z = b * np.sqrt(var)
    expectation = np.empty(mean.shape[0])

    degenerate = sigma_z == 0.0
    if np.any(degenerate):
        expectation[degenerate] = _sat_many(mu_z[degenerate], k)

    narrow = (~degenerate) & (sigma_z <= tables.sigma_switch)
    if np.any(narrow):
        z = mu_z[narrow, None] + np.sqrt(2.0) * sigma_z[narrow, None] * tables.gh_x[None, :]
        expectation[narrow] = _sat_many(z, k) @ tables.gh_w * np.exp(-_LOG_SQRT_PI)

    wide = (~degenerate) & ~narrow
    if np.any(wide):
        mu_w = mu_z[wide, None]
        sd_w = sigma_z[wide, None]
        density = np.exp(-0.5 * ((tables.gl_z[None, :] - mu_w) / sd_w) ** 2) / (
            sd_w * np.sqrt(2.0 * np.pi)
        )
        body = (_sat_many(tables.gl_z, k)[None, :] * density) @ tables.gl_w
        upper_tail = special.ndtr((mu_z[wide] - tables.t_hi) / sigma_z[wide])
        expectation[wide] = body + upper_tail

    pi = lmin + (lmax - lmin) * expectation
    return np.clip(pi, lmin, lmax)


def poisson_ppf_many(u: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """min{k >= 0 : CDF(k) >= u} for Poisson(lam), element-wise.

    Sampling by inversion keeps every outcome draw at exactly one uniform,
    which keeps random streams aligned across experiment arms.
    """
    u = np.asarray(u, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    out = stats.poisson.ppf(u, lam)
    # scipy returns -1 at u=0 and nan at lam=0; pin both to the semantics above.
    out = np.where(u <= stats.poisson.cdf(0, lam), 0.0, out)
    return np.where(lam <= 0.0, 0.0, out)
