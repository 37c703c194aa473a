"""Generalized Pareto distribution: survival function, inverse transform
sampling and the empirical conditional excess distribution."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import uniform_open_closed

# |xi| below this uses the exponential limit of the GPD formulas
XI_BRANCH = 1e-8


class UndefinedConditionalError(ValueError):
    """No observation exceeds the requested threshold."""


@dataclass(frozen=True)
class GpdParams:
    xi: float
    sigma: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.xi):
            raise ValueError(f"xi must be finite, got {self.xi}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


def gpd_ccdf(z, params: GpdParams):
    """Survival function S(z; xi, sigma) = P(Z > z).

    Accepts scalars or arrays. For xi < 0 the support ends at -sigma/xi and
    the result is 0 beyond it.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(np.isnan(z)):
        raise ValueError("gpd_ccdf requires z >= 0")
    xi, sigma = params.xi, params.sigma
    if abs(xi) < XI_BRANCH:
        out = np.exp(-z / sigma)
    else:
        t = xi * z / sigma
        with np.errstate(divide="ignore", invalid="ignore"):
            # log1p keeps the small-xi regime accurate
            out = np.where(t > -1.0, np.exp(-np.log1p(np.maximum(t, -1.0)) / xi), 0.0)
    return out[()] if out.ndim == 0 else out


def gpd_quantile(u, xi: float):
    """Inverse survival function with unit scale: (u**-xi - 1) / xi."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0) or np.any(u > 1) or np.any(np.isnan(u)):
        raise ValueError("gpd_quantile requires 0 < u <= 1")
    if abs(xi) < XI_BRANCH:
        out = -np.log(u)
    else:
        # expm1/log keeps precision for small |xi|
        out = np.expm1(-xi * np.log(u)) / xi
    return out[()] if out.ndim == 0 else out


def sample_gpd(n: int, xi: float, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` unit-scale GPD variates as an (n, 1) array."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u = uniform_open_closed(rng, (n, 1))
    return gpd_quantile(u, xi)


def empirical_conditional_excess(samples, u: float, y: float) -> float:
    """Fraction of exceedances of ``u`` that fall in (u, u + y]."""
    x = np.asarray(samples, dtype=float).ravel()
    if y < 0:
        raise ValueError("y must be nonnegative")
    exceed = x[x > u]
    if exceed.size == 0:
        raise UndefinedConditionalError(f"no sample exceeds u={u}")
    return float(np.count_nonzero(exceed <= u + y) / exceed.size)
