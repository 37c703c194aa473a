"""Seeded random streams.

Every sampler in the package takes a ``numpy.random.Generator`` backed by
PCG64. Child streams are addressed by ``SeedSequence`` spawn keys so independent
runs (learning-rate grid entries, validation noise, data splits) never share
state. Both algorithms are part of numpy's stability guarantee for a fixed
seed, which keeps acceptance runs reproducible.
"""
from __future__ import annotations

import numpy as np

RNG_ALGORITHM = "numpy.random.PCG64 seeded via numpy.random.SeedSequence"


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def child_seeds(seed: int, *path: int) -> np.random.SeedSequence:
    """Deterministic child sequence addressed by ``path`` under ``seed``."""
    return np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(p) for p in path))


def uniform_open_closed(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform variates on (0, 1]."""
    return 1.0 - rng.random(size)
