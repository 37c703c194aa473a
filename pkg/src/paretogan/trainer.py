"""Minibatch training of a generator against data with the energy loss.

Each learning rate in the grid is an independent run with its own seeded
streams; validation uses one fixed noise batch shared by all runs, and the
report keeps the checkpoint with the lowest validation loss overall.
"""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ._rng import child_seeds, make_rng
from .energy import as_samples, energy_distance_and_grad, pairwise_norms
from .generator import (GeneratorSpec, generate_grad_chain, loss_space_view, sample_noise,
                        apply_transform)
from .metrics import MetricSpec, profile
from .net import AdamState, NetParams, adam_step, net_forward_cached, net_init

log = logging.getLogger(__name__)

DEFAULT_LRS = (1e-4, 1e-5, 1e-6)
BLOCK = 1024


class DegenerateDataError(ValueError):
    pass


def split_normalize(data, fractions: Tuple[float, float] = (0.05, 0.05), seed: int = 0):
    """Shuffle rows into train/val/test and divide by the mean training magnitude.

    Returns ``(train, val, test, scale)``; ``scale`` is a float for one column
    and a per-column array otherwise.
    """
    x = as_samples(data, "data")
    f_train, f_val = fractions
    if not (0 < f_train < 1 and 0 < f_val < 1 and f_train + f_val < 1):
        raise ValueError("fractions must be in (0, 1) with train + val < 1")
    n = x.shape[0]
    n_train, n_val = int(round(n * f_train)), int(round(n * f_val))
    if n_train < 1 or n_val < 1 or n - n_train - n_val < 1:
        raise ValueError(f"{n} rows are too few for fractions {fractions}")
    perm = make_rng(child_seeds(seed, 7)).permutation(n)
    train, val, test = (x[perm[:n_train]], x[perm[n_train:n_train + n_val]],
                        x[perm[n_train + n_val:]])
    scale = np.mean(np.abs(train), axis=0)
    if np.any(scale == 0):
        raise DegenerateDataError("training split has zero mean magnitude")
    out_scale = float(scale[0]) if x.shape[1] == 1 else scale
    return train / scale, val / scale, test / scale, out_scale


def _blocked_mean(a: np.ndarray, b: np.ndarray, metric: MetricSpec, exclude_diag: bool) -> float:
    """Mean metric over all (or all distinct, when a is b) row pairs, in fixed blocks."""
    total = 0.0
    for s in range(0, a.shape[0], BLOCK):
        total += float(profile(metric, pairwise_norms(a[s:s + BLOCK], b)).sum())
    denom = a.shape[0] * (b.shape[0] - 1) if exclude_diag else a.shape[0] * b.shape[0]
    return total / denom


def energy_distance_large(gen: np.ndarray, real: np.ndarray, metric: MetricSpec,
                          real_within: Optional[float] = None) -> float:
    """Energy distance for batches too large for one dense distance matrix."""
    if real_within is None:
        real_within = _blocked_mean(real, real, metric, True)
    return (2.0 * _blocked_mean(gen, real, metric, False)
            - _blocked_mean(gen, gen, metric, True) - real_within)


@dataclass
class TrainConfig:
    gspec: GeneratorSpec
    batch_size: int = 256
    iterations: int = 20000
    learning_rates: Tuple[float, ...] = DEFAULT_LRS
    validation_every: int = 500
    seed: int = 0
    fractions: Tuple[float, float] = (0.05, 0.05)
    val_noise_size: int = 4096
    threads: int = 1

    def __post_init__(self):
        self.learning_rates = tuple(float(lr) for lr in self.learning_rates)
        self.fractions = tuple(self.fractions)
        if self.batch_size < 2:
            raise ValueError("batch_size must be >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not self.learning_rates or any(not lr > 0 for lr in self.learning_rates):
            raise ValueError("need at least one positive learning rate")
        if self.validation_every < 1:
            raise ValueError("validation_every must be >= 1")
        f_train, f_val = self.fractions
        if not (0 < f_train < 1 and 0 < f_val < 1 and f_train + f_val < 1):
            raise ValueError("fractions must be in (0, 1) with train + val < 1")

    def to_dict(self) -> dict:
        return {"gspec": self.gspec.to_dict(), "batch_size": self.batch_size,
                "iterations": self.iterations, "learning_rates": list(self.learning_rates),
                "validation_every": self.validation_every, "seed": self.seed,
                "fractions": list(self.fractions), "val_noise_size": self.val_noise_size}


@dataclass
class Checkpoint:
    gspec: GeneratorSpec
    params: NetParams
    adam: AdamState
    step: int
    run_id: int = 0
    val_loss: float = float("nan")
    scale: Optional[list] = None
    val_noise_seed: Optional[list] = None

    def to_dict(self) -> dict:
        return {"gspec": self.gspec.to_dict(), "params": self.params.to_lists(),
                "adam": self.adam.to_dict(), "step": self.step, "run_id": self.run_id,
                "val_loss": self.val_loss, "scale": self.scale,
                "val_noise_seed": self.val_noise_seed}

    @classmethod
    def from_dict(cls, d: dict) -> "Checkpoint":
        gspec = GeneratorSpec.from_dict(d["gspec"])
        return cls(gspec, NetParams.from_lists(gspec.net, d["params"]),
                   AdamState.from_dict(gspec.net, d["adam"]), int(d["step"]),
                   int(d.get("run_id", 0)), float(d.get("val_loss", float("nan"))),
                   d.get("scale"), d.get("val_noise_seed"))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path) -> "Checkpoint":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class RunRecord:
    run_id: int
    lr: float
    curve: List[Tuple[int, float, float]] = field(default_factory=list)
    best_val_loss: float = float("inf")
    best_iteration: int = 0
    diverged: bool = False
    message: str = ""
    exp_caps: int = 0

    def to_dict(self) -> dict:
        return {"run_id": self.run_id, "lr": self.lr,
                "curve": [list(c) for c in self.curve], "best_val_loss": self.best_val_loss,
                "best_iteration": self.best_iteration, "diverged": self.diverged,
                "message": self.message, "exp_caps": self.exp_caps}


@dataclass
class TrainReport:
    runs: List[RunRecord]
    best_run: Optional[int]
    best_val_loss: float
    wall_time: float
    checkpoint: Optional[Checkpoint] = None
    checkpoint_path: Optional[str] = None

    @property
    def all_diverged(self) -> bool:
        return all(r.diverged for r in self.runs)

    def to_dict(self, timing: bool = True) -> dict:
        d = {"runs": [r.to_dict() for r in self.runs], "best_run": self.best_run,
             "best_val_loss": self.best_val_loss, "checkpoint": self.checkpoint_path}
        if timing:
            d["wall_time"] = self.wall_time
        return d

    def curves_csv_rows(self):
        yield ("iteration", "run_id", "train_loss", "val_loss")
        for r in self.runs:
            for it, tl, vl in r.curve:
                yield (it, r.run_id, repr(tl), repr(vl))


def to_loss_space(gspec: GeneratorSpec, data: np.ndarray) -> np.ndarray:
    if gspec.loss_space == "log":
        if np.any(~(data > 0)):
            raise ValueError("log loss space requires strictly positive data")
        return np.log(data)
    return data


def validation_noise(config: TrainConfig) -> np.ndarray:
    return sample_noise(config.gspec.noise, config.val_noise_size,
                        make_rng(child_seeds(config.seed, 0)))


def validation_loss(gspec: GeneratorSpec, params: NetParams, val_loss_space: np.ndarray,
                    noise: np.ndarray, real_within: Optional[float] = None) -> float:
    raw, _ = net_forward_cached(params, noise)
    gen = loss_space_view(gspec, raw)
    if not np.all(np.isfinite(gen)):
        return float("nan")
    return energy_distance_large(gen, val_loss_space, gspec.loss_metric, real_within)


def _run(config: TrainConfig, run_id: int, lr: float, train_ls: np.ndarray,
         val_ls: np.ndarray, val_noise: np.ndarray, val_within: float):
    gspec = config.gspec
    metric = gspec.loss_metric
    params = net_init(gspec.net, make_rng(child_seeds(config.seed, 1, run_id)))
    adam = AdamState.fresh(params)
    rng = make_rng(child_seeds(config.seed, 2, run_id))
    rec = RunRecord(run_id, lr)
    best: Optional[Checkpoint] = None
    n_train = train_ls.shape[0]
    for it in range(1, config.iterations + 1):
        z = sample_noise(gspec.noise, config.batch_size, rng)
        real = train_ls[rng.integers(0, n_train, size=config.batch_size)]
        raw, cache = net_forward_cached(params, z)
        if gspec.loss_space == "data":
            rec.exp_caps += apply_transform(gspec.transform, raw)[1]
        gen = loss_space_view(gspec, raw)
        if not np.all(np.isfinite(gen)):
            rec.diverged, rec.message = True, f"non-finite generator output at iteration {it}"
            break
        loss, grad = energy_distance_and_grad(gen, real, metric, include_real_within=False)
        grads = generate_grad_chain(gspec, params, z, grad, cache=cache, raw=raw)
        if not (np.isfinite(loss) and np.all(np.isfinite(grads.flat()))):
            rec.diverged, rec.message = True, f"non-finite loss or gradient at iteration {it}"
            break
        validate = it % config.validation_every == 0 or it == config.iterations
        if validate:
            train_loss = loss - _blocked_mean(real, real, metric, True)
        params, adam = adam_step(params, grads, adam, lr)
        if validate:
            vl = validation_loss(gspec, params, val_ls, val_noise, val_within)
            if not np.isfinite(vl):
                rec.diverged, rec.message = True, f"non-finite validation loss at iteration {it}"
                break
            rec.curve.append((it, float(train_loss), float(vl)))
            if vl < rec.best_val_loss:
                rec.best_val_loss, rec.best_iteration = float(vl), it
                best = Checkpoint(gspec, params.copy(), adam, it, run_id, float(vl))
    if rec.diverged:
        log.warning("run %d (lr=%g) diverged: %s", run_id, lr, rec.message)
    return rec, best


def train(config: TrainConfig, train_data, val_data) -> TrainReport:
    """Train one model per learning rate and keep the best validation checkpoint."""
    t0 = time.perf_counter()
    gspec = config.gspec
    train_data = as_samples(train_data, "train_data")
    val_data = as_samples(val_data, "val_data")
    if train_data.shape[1] != gspec.net.output_dim or val_data.shape[1] != gspec.net.output_dim:
        raise ValueError("data dimension does not match the generator output dimension")
    train_ls = to_loss_space(gspec, train_data)
    val_ls = to_loss_space(gspec, val_data)
    val_noise = validation_noise(config)
    val_within = _blocked_mean(val_ls, val_ls, gspec.loss_metric, True)

    jobs = list(enumerate(config.learning_rates))

    def job(item):
        run_id, lr = item
        return _run(config, run_id, lr, train_ls, val_ls, val_noise, val_within)

    if config.threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as ex:
            results = list(ex.map(job, jobs))
    else:
        results = [job(j) for j in jobs]

    runs = [r for r, _ in results]
    best_run, best_val, best_ckpt = None, float("inf"), None
    for rec, ckpt in results:
        if ckpt is not None and rec.best_val_loss < best_val:
            best_run, best_val, best_ckpt = rec.run_id, rec.best_val_loss, ckpt
    if best_ckpt is not None:
        best_ckpt.val_noise_seed = [config.seed, 0]
    return TrainReport(runs, best_run, best_val, time.perf_counter() - t0, best_ckpt)
