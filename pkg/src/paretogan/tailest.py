"""Hill-type tail index estimation for one-dimensional samples."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

Side = Literal["positive", "negative", "magnitude"]

XI_MIN, XI_MAX = 0.05, 10.0
MIN_SAMPLES = 20


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class TailEstimate:
    xi_hat: float
    k_used: int
    n: int
    side: str

    def to_dict(self) -> dict:
        return {"xi_hat": self.xi_hat, "k_used": self.k_used, "n": self.n, "side": self.side}


def hill_estimator(samples, k: int) -> float:
    """Hill estimator on the ``k`` largest of strictly positive ``samples``.

    Returns (1/k) * sum_{i<=k} [log X_(i) - log X_(k+1)] with X_(1) the maximum.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if np.any(~(x > 0)):
        raise ValueError("hill_estimator requires strictly positive samples")
    n = x.size
    if not (1 <= k < n):
        raise ValueError(f"k must satisfy 1 <= k < n (k={k}, n={n})")
    # k+1 largest values, descending
    top = -np.partition(-x, k)[: k + 1]
    top = np.sort(top)[::-1]
    return float(np.mean(np.log(top[:k] / top[k])))


def default_k(m: int) -> int:
    k = math.ceil(m ** (2.0 / 3.0))
    return min(max(k, 1), m - 1)


def side_values(samples, side: Side) -> np.ndarray:
    x = np.asarray(samples, dtype=float).ravel()
    if side == "positive":
        return x[x > 0]
    if side == "negative":
        return -x[x < 0]
    if side == "magnitude":
        a = np.abs(x)
        return a[a > 0]
    raise ValueError(f"unknown side {side!r}")


def estimate_tail_index(samples, side: Side = "magnitude", k: Optional[int] = None,
                        clamp: bool = True) -> TailEstimate:
    """Estimate the tail index of one tail (or of magnitudes) of ``samples``.

    ``k`` defaults to ceil(m**(2/3)) for the m retained values. The estimate is
    clamped to [0.05, 10] unless ``clamp`` is False.
    """
    vals = side_values(samples, side)
    m = vals.size
    if m < MIN_SAMPLES:
        raise InsufficientDataError(
            f"{m} samples on side {side!r}; at least {MIN_SAMPLES} required")
    if k is None:
        k = default_k(m)
    xi = hill_estimator(vals, k)
    if clamp:
        xi = float(np.clip(xi, XI_MIN, XI_MAX))
    return TailEstimate(xi_hat=xi, k_used=int(k), n=int(m), side=side)
