"""Ground metrics on R^d used by the energy loss: Euclidean, bounded
Euclidean ``r / (alpha + r)`` and root Euclidean ``r ** (1 / gamma)``.

Every metric here is a function of the Euclidean norm r = ||x - y|| only, so
the loss code works with a scalar profile ``phi(r)`` and its derivative.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

GRAD_EPS = 1e-6


@dataclass(frozen=True)
class MetricSpec:
    kind: Literal["euclidean", "bounded", "root"] = "euclidean"
    alpha: float = 1.0
    gamma: float = 1.0
    epsilon: float = GRAD_EPS

    def __post_init__(self):
        if self.kind not in ("euclidean", "bounded", "root"):
            raise ValueError(f"unknown metric kind {self.kind!r}")
        if self.kind == "bounded" and not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if self.kind == "root" and not self.gamma >= 1:
            raise ValueError("gamma must be >= 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")

    @classmethod
    def root(cls, gamma: float, epsilon: float = GRAD_EPS) -> "MetricSpec":
        return cls(kind="root", gamma=float(gamma), epsilon=epsilon)

    @classmethod
    def bounded(cls, alpha: float, epsilon: float = GRAD_EPS) -> "MetricSpec":
        return cls(kind="bounded", alpha=float(alpha), epsilon=epsilon)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "epsilon": self.epsilon}
        if self.kind == "bounded":
            d["alpha"] = self.alpha
        if self.kind == "root":
            d["gamma"] = self.gamma
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MetricSpec":
        return cls(kind=d["kind"], alpha=d.get("alpha", 1.0), gamma=d.get("gamma", 1.0),
                   epsilon=d.get("epsilon", GRAD_EPS))


def profile(m: MetricSpec, r):
    """Metric value as a function of the Euclidean distance ``r`` (unclamped)."""
    r = np.asarray(r, dtype=float)
    if m.kind == "euclidean":
        return r
    if m.kind == "bounded":
        return r / (m.alpha + r)
    if m.gamma == 1.0:
        return r
    if m.gamma == 2.0:
        return np.sqrt(r)
    return np.power(r, 1.0 / m.gamma)


def profile_slope_over_r(m: MetricSpec, r):
    """phi'(r) / r evaluated at max(r, epsilon).

    The gradient of d(x, y) in x is this factor times (x - y).
    """
    rc = np.maximum(np.asarray(r, dtype=float), m.epsilon)
    if m.kind == "euclidean":
        return 1.0 / rc
    if m.kind == "bounded":
        return m.alpha / (m.alpha + rc) ** 2 / rc
    return np.power(rc, 1.0 / m.gamma - 2.0) / m.gamma


def _pair(x, y):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return x, y


def metric_eval(m: MetricSpec, x, y) -> float:
    x, y = _pair(x, y)
    return float(profile(m, np.linalg.norm(x - y)))


def metric_grad_x(m: MetricSpec, x, y) -> np.ndarray:
    """Gradient of d(x, y) with respect to x; finite everywhere."""
    x, y = _pair(x, y)
    diff = x - y
    return profile_slope_over_r(m, np.linalg.norm(diff)) * diff
