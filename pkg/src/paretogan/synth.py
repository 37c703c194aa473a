"""Synthetic heavy-tailed datasets and CSV input/output."""
from __future__ import annotations

import csv
import logging
import os
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ._rng import make_rng
from .evaluation import ManifoldSpec
from .generator import signed_power

log = logging.getLogger(__name__)


class DataFormatError(ValueError):
    pass


def cauchy_quantile(u, location: float = 0.0, scale: float = 1.0):
    return location + scale * np.tan(np.pi * (np.asarray(u, dtype=float) - 0.5))


def _open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform(0, 1) with the endpoints rejected."""
    u = rng.random(size)
    bad = u == 0.0
    while np.any(bad):
        u[bad] = rng.random(int(bad.sum()))
        bad = u == 0.0
    return u


def sample_cauchy(n: int, location: float = 0.0, scale: float = 1.0, rng=None) -> np.ndarray:
    if not scale > 0:
        raise ValueError("scale must be positive")
    rng = make_rng(rng)
    return cauchy_quantile(_open_uniform(rng, (n, 1)), location, scale)


@dataclass(frozen=True)
class CauchyMixtureSpec:
    locations: Tuple[float, ...] = (-5.0, 5.0)
    scales: Tuple[float, ...] = (1.0, 1.0)
    weights: Tuple[float, ...] = (0.5, 0.5)

    def __post_init__(self):
        if not (len(self.locations) == len(self.scales) == len(self.weights) >= 1):
            raise ValueError("components need matching location/scale/weight lists")
        if any(not s > 0 for s in self.scales):
            raise ValueError("scales must be positive")
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or not abs(w.sum() - 1.0) < 1e-9:
            raise ValueError("weights must be nonnegative and sum to 1")

    def to_dict(self) -> dict:
        return {"locations": list(self.locations), "scales": list(self.scales),
                "weights": list(self.weights)}


DEFAULT_MIXTURE = CauchyMixtureSpec()


def sample_cauchy_mixture(spec: CauchyMixtureSpec = DEFAULT_MIXTURE, n: int = 1000, rng=None):
    rng = make_rng(rng)
    w = np.asarray(spec.weights, dtype=float)
    if len(w) == 1:
        return sample_cauchy(n, spec.locations[0], spec.scales[0], rng)
    # inverse CDF on the cumulative weights; zero-weight components are never chosen
    comp = np.searchsorted(np.cumsum(w)[:-1], rng.random(n), side="right")
    u = _open_uniform(rng, n)
    loc = np.asarray(spec.locations, dtype=float)[comp]
    sc = np.asarray(spec.scales, dtype=float)[comp]
    return cauchy_quantile(u, loc, sc)[:, None]


def joint2d_from_latent(a, b) -> np.ndarray:
    """Rows (a + b, sign(a - b)|a - b|**0.5)."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    return np.stack([a + b, signed_power(a - b, 0.5)], axis=1)


def sample_joint2d(n: int, rng=None) -> np.ndarray:
    """Dependent pair with tail indices 1 and 1/2 built from two Cauchy draws."""
    rng = make_rng(rng)
    ab = cauchy_quantile(_open_uniform(rng, (n, 2)))
    return joint2d_from_latent(ab[:, 0], ab[:, 1])


def make_manifold_spec(c: int, d: int, rng) -> ManifoldSpec:
    if not c < d:
        raise ValueError("latent dimension c must be smaller than d")
    rng = make_rng(rng)
    C = rng.standard_normal((d, c))
    t = rng.uniform(0.5, 3.0, size=d)
    return ManifoldSpec(C, t)


def sample_manifold_rows(spec: ManifoldSpec, n: int, rng) -> np.ndarray:
    rng = make_rng(rng)
    y = cauchy_quantile(_open_uniform(rng, (n, spec.c)))
    return spec.warp(y)


def sample_highd_manifold(c: int, d: int, n: int, seed) -> Tuple[np.ndarray, ManifoldSpec]:
    """n rows of signed_power(C y, t) with Cauchy latents, plus the (C, t) spec.

    C and t come from the first child stream of ``seed``, the rows from the
    second, so the spec does not depend on n.
    """
    ss = np.random.SeedSequence(seed)
    spec_ss, rows_ss = ss.spawn(2)
    spec = make_manifold_spec(c, d, make_rng(spec_ss))
    return sample_manifold_rows(spec, n, make_rng(rows_ss)), spec


def _parse_row(cells: Sequence[str], cols: Optional[Sequence[int]]):
    picked = [cells[i] for i in cols] if cols is not None else cells
    vals = [float(c) for c in picked]
    if not all(np.isfinite(vals)):
        raise ValueError("non-finite")
    return vals


def load_csv(path, columns: Optional[Sequence[int]] = None, delimiter: str = ","):
    """Read numeric columns from a CSV file into an (n, d) array.

    A non-numeric first line is treated as a header. Rows that fail to parse
    are skipped; the returned tuple is ``(data, n_rejected)``.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(path)
    rows, rejected = [], 0
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        for lineno, cells in enumerate(reader):
            if not cells or all(not c.strip() for c in cells):
                continue
            try:
                rows.append(_parse_row(cells, columns))
            except (ValueError, IndexError):
                if lineno == 0:
                    continue
                rejected += 1
    if rejected:
        log.warning("%s: rejected %d unparsable rows", path, rejected)
    if not rows:
        raise DataFormatError(f"{path}: no usable rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DataFormatError(f"{path}: ragged rows")
    return np.asarray(rows, dtype=float), rejected


def save_csv(path, data, header: Optional[Sequence[str]] = None, delimiter: str = ",") -> None:
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    if header is None:
        header = [f"x{k}" for k in range(data.shape[1])]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter)
        w.writerow(header)
        for row in data:
            w.writerow([repr(float(v)) for v in row])
