"""Minibatch energy distance, its gradient with respect to the generated
batch, and the 1-D Wasserstein distance.

Estimator convention: the cross term averages over all n*m pairs, the two
within-set terms average over distinct ordered pairs only.
"""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .metrics import MetricSpec, profile, profile_slope_over_r


def as_samples(a, name: str = "samples") -> np.ndarray:
    """Coerce to a finite (n, d) float array; 1-D input becomes a column."""
    x = np.asarray(a, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError(f"{name} must be 1-D or 2-D, got shape {x.shape}")
    if x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite entries")
    return x


def pairwise_norms(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 1:
        return np.abs(a - b.T)
    return cdist(a, b)


def _check(gen, real):
    gen = as_samples(gen, "gen")
    real = as_samples(real, "real")
    if gen.shape[1] != real.shape[1]:
        raise ValueError(f"dimension mismatch: {gen.shape[1]} vs {real.shape[1]}")
    if gen.shape[0] < 2 or real.shape[0] < 2:
        raise ValueError("energy distance needs at least two rows per sample")
    return gen, real


def _within_mean(x: np.ndarray, metric: MetricSpec) -> float:
    n = x.shape[0]
    d = profile(metric, pairwise_norms(x, x))
    # diagonal is phi(0) = 0 for every supported metric
    return float(d.sum() / (n * (n - 1)))


def energy_terms(gen, real, metric: MetricSpec, include_real_within: bool = True):
    """Return (cross mean, within-gen mean, within-real mean)."""
    gen, real = _check(gen, real)
    cross = float(profile(metric, pairwise_norms(gen, real)).mean())
    wg = _within_mean(gen, metric)
    wr = _within_mean(real, metric) if include_real_within else 0.0
    return cross, wg, wr


def energy_distance(gen, real, metric: MetricSpec, include_real_within: bool = True) -> float:
    """Energy distance 2 E d(X,Y) - E d(X,X') - E d(Y,Y') estimated from batches.

    With ``include_real_within=False`` the constant real-real term is skipped.
    """
    cross, wg, wr = energy_terms(gen, real, metric, include_real_within)
    return 2.0 * cross - wg - wr


def energy_distance_and_grad(gen, real, metric: MetricSpec, include_real_within: bool = True):
    """Energy distance and its (n, d) gradient with respect to ``gen``."""
    gen, real = _check(gen, real)
    n, m = gen.shape[0], real.shape[0]

    r_cross = pairwise_norms(gen, real)
    w_cross = profile_slope_over_r(metric, r_cross)
    cross = float(profile(metric, r_cross).mean())

    r_gen = pairwise_norms(gen, gen)
    w_gen = profile_slope_over_r(metric, r_gen)
    np.fill_diagonal(w_gen, 0.0)
    wg = float(profile(metric, r_gen).sum() / (n * (n - 1)))

    wr = _within_mean(real, metric) if include_real_within else 0.0

    # sum_j w_ij (g_i - y_j) = g_i * sum_j w_ij - (W y)_i
    g_cross = gen * w_cross.sum(axis=1, keepdims=True) - w_cross @ real
    g_gen = gen * w_gen.sum(axis=1, keepdims=True) - w_gen @ gen
    grad = (2.0 / (n * m)) * g_cross - (2.0 / (n * (n - 1))) * g_gen
    return 2.0 * cross - wg - wr, grad


def energy_distance_grad(gen, real, metric: MetricSpec) -> np.ndarray:
    return energy_distance_and_grad(gen, real, metric, include_real_within=False)[1]


def wasserstein1_1d(a, b) -> float:
    """W1 between two equal-size 1-D samples via sorted matching."""
    a = as_samples(a, "a")
    b = as_samples(b, "b")
    if a.shape[1] != 1 or b.shape[1] != 1:
        raise ValueError("wasserstein1_1d expects one-dimensional samples")
    if a.shape[0] != b.shape[0]:
        raise ValueError("wasserstein1_1d expects equal sample counts")
    return float(np.mean(np.abs(np.sort(a[:, 0]) - np.sort(b[:, 0]))))
