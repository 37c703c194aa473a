"""Evaluation statistics for generated samples: two-sample KS, the log-log
CCDF area metric (one- and two-sided), distance to a warped linear manifold
and CCDF curve export."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .generator import signed_power

FLOOR_REL = 1e-12


def _col(a, name="samples") -> np.ndarray:
    x = np.asarray(a, dtype=float)
    if x.ndim == 2:
        if x.shape[1] != 1:
            raise ValueError(f"{name} must be one-dimensional")
        x = x[:, 0]
    return x.ravel()


def ks_statistic(a, b) -> float:
    """sup_x |F_a(x) - F_b(x)| over right-continuous empirical CDFs."""
    a = np.sort(_col(a, "a"))
    b = np.sort(_col(b, "b"))
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_statistic needs non-empty samples")
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


@dataclass
class CcdfCurve:
    values: np.ndarray
    probs: np.ndarray

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["value", "exceedance_prob"])
            for v, p in zip(self.values, self.probs):
                w.writerow([repr(float(v)), repr(float(p))])


def ccdf_export(samples) -> CcdfCurve:
    """Descending values paired with i/n, i = 1..n (ties kept in order)."""
    x = _col(samples)
    if x.size < 1:
        raise ValueError("ccdf_export needs at least one sample")
    vals = np.sort(x, kind="stable")[::-1]
    return CcdfCurve(vals, np.arange(1, x.size + 1) / x.size)


def _floor_nonpositive(x: np.ndarray):
    bad = ~(x > 0)
    nbad = int(np.count_nonzero(bad))
    if nbad:
        pos = x[~bad]
        if pos.size == 0:
            raise ValueError("no positive values to anchor the floor")
        x = np.where(bad, FLOOR_REL * np.median(pos), x)
    return x, nbad


@dataclass
class AreaResult:
    area: float
    floor_events: int = 0


def loglog_area_detail(real, gen) -> AreaResult:
    r = _col(real, "real")
    g = _col(gen, "gen")
    if r.size < 2 or g.size < 2:
        raise ValueError("loglog_area needs at least two samples on each side")
    r, fr = _floor_nonpositive(r)
    g, fg = _floor_nonpositive(g)
    n, m = r.size, g.size
    # logs taken on whole contiguous arrays before indexing: numpy's vectorised and
    # scalar log paths can differ in the last bit, which would break area(x, x) == 0
    log_r = np.log(np.sort(r)[::-1].copy())
    log_g = np.log(np.sort(g)[::-1].copy())
    i = np.arange(1, n + 1)
    # ceil(i*m/n) in exact integer arithmetic
    idx = -((-i * m) // n)
    diff = np.abs(log_r - log_g[idx - 1])
    weights = np.log1p(1.0 / i)
    return AreaResult(float(np.sum(diff * weights)), fr + fg)


def loglog_area(real, gen) -> float:
    """Area between log-log empirical CCDF curves of positive samples.

    Sum over the n real order statistics of |log real_(i) - log gen_(ceil(i m/n))|
    weighted by log((i+1)/i), both sorted descending.
    """
    return loglog_area_detail(real, gen).area


@dataclass
class TwoSidedArea:
    """Average of the positive-tail and negative-tail area metrics.

    ``one_sided`` is set when some side has fewer than two samples in either
    set; ``area`` then averages the sides that could be computed and
    ``missing_sides`` names the others. ``gen_missing_tail`` marks the case
    where the real data has a tail that the generated data lacks.
    """
    area: float
    sides: dict = field(default_factory=dict)
    one_sided: bool = False
    missing_sides: tuple = ()
    gen_missing_tail: bool = False
    floor_events: int = 0

    @property
    def ranking_area(self) -> float:
        """Area for model comparison; a tail absent from the generator counts as infinite."""
        return math.inf if self.gen_missing_tail else self.area

    def to_dict(self) -> dict:
        return {"area": self.area, "ranking_area": self.ranking_area, "sides": self.sides,
                "one_sided": self.one_sided,
                "missing_sides": list(self.missing_sides),
                "gen_missing_tail": self.gen_missing_tail, "floor_events": self.floor_events}


def two_sided_area(real, gen) -> TwoSidedArea:
    r = _col(real, "real")
    g = _col(gen, "gen")
    sides, missing, floors, gen_missing = {}, [], 0, False
    for name, rs, gs in (("positive", r[r > 0], g[g > 0]), ("negative", -r[r < 0], -g[g < 0])):
        if rs.size >= 2 and gs.size >= 2:
            res = loglog_area_detail(rs, gs)
            sides[name] = res.area
            floors += res.floor_events
        else:
            missing.append(name)
            gen_missing = gen_missing or (rs.size >= 2 and gs.size < 2)
    if not sides:
        raise ValueError("neither tail has two samples in both sets")
    return TwoSidedArea(float(np.mean(list(sides.values()))), sides, bool(missing),
                        tuple(missing), gen_missing, floors)


class ManifoldSpec:
    """Warped linear manifold X = signed_power(C y, t) with projector onto col(C)."""

    def __init__(self, C, t):
        C = np.asarray(C, dtype=float)
        t = np.asarray(t, dtype=float).ravel()
        if C.ndim != 2 or C.shape[0] != t.size:
            raise ValueError("C must be d x c and t length d")
        if np.any(~(t > 0)):
            raise ValueError("t entries must be positive")
        if np.linalg.matrix_rank(C) < C.shape[1]:
            raise ValueError("C must have full column rank")
        self.C = C
        self.t = t
        # orthonormal basis of col(C): P = Q Q^T equals C (C^T C)^-1 C^T
        self._Q, _ = np.linalg.qr(C)

    @property
    def d(self) -> int:
        return self.C.shape[0]

    @property
    def c(self) -> int:
        return self.C.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self._Q @ self._Q.T

    def unwarp(self, x) -> np.ndarray:
        return signed_power(np.asarray(x, dtype=float), 1.0 / self.t)

    def warp(self, y) -> np.ndarray:
        """Rows of signed_power(C y, t) for latent rows ``y``."""
        return signed_power(np.atleast_2d(y) @ self.C.T, self.t)

    def to_dict(self) -> dict:
        return {"C": self.C.tolist(), "t": self.t.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "ManifoldSpec":
        return cls(d["C"], d["t"])


def manifold_distances(x, spec: ManifoldSpec) -> np.ndarray:
    """MDist for each row of ``x``."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != spec.d:
        raise ValueError(f"rows have dimension {x.shape[1]}, manifold lives in {spec.d}")
    v = spec.unwarp(x)
    resid = v - (v @ spec._Q) @ spec._Q.T
    return np.linalg.norm(resid, axis=1)


def manifold_distance(x_hat, spec: ManifoldSpec) -> float:
    """Euclidean distance from the unwarped point to its projection onto col(C)."""
    x_hat = np.asarray(x_hat, dtype=float).ravel()
    return float(manifold_distances(x_hat[None, :], spec)[0])


def mean_log_mdist(x, spec: ManifoldSpec, floor: float = 1e-300) -> float:
    """Mean natural log of MDist; exact zeros are floored to keep it finite."""
    return float(np.mean(np.log(np.maximum(manifold_distances(x, spec), floor))))
