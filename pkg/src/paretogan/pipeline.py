"""End-to-end experiment steps shared by the CLI and the demos:
data loading, generator construction from training data, training with
artifact output, and evaluation of a checkpoint against test data."""
from __future__ import annotations

import csv
import json
import os
from typing import Optional

import numpy as np

from ._rng import child_seeds, make_rng
from .evaluation import (ManifoldSpec, ccdf_export, ks_statistic, loglog_area_detail,
                         mean_log_mdist, two_sided_area)
from .generator import GeneratorSpec, build_generator, generate
from .net import NetSpec
from .synth import (CauchyMixtureSpec, load_csv, sample_cauchy_mixture, sample_highd_manifold,
                    sample_joint2d, save_csv)
from .tailest import estimate_tail_index
from .trainer import Checkpoint, TrainConfig, TrainReport, split_normalize, train


def load_dataset(cfg: dict):
    """Return ``(data, manifold_spec or None)`` for the config's data source."""
    src = cfg["data"]
    if "csv" in src:
        data, _ = load_csv(src["csv"], src.get("columns"), src.get("delimiter", ","))
        return data, None
    syn = src["synth"]
    kind, n = syn["kind"], syn.get("n", 100000)
    seed = syn.get("seed", cfg.get("seed", 0))
    if kind == "cauchy-mixture":
        base = CauchyMixtureSpec()
        spec = CauchyMixtureSpec(tuple(syn.get("locations", base.locations)),
                                 tuple(syn.get("scales", base.scales)),
                                 tuple(syn.get("weights", base.weights)))
        return sample_cauchy_mixture(spec, n, make_rng(seed)), None
    if kind == "joint2d":
        return sample_joint2d(n, make_rng(seed)), None
    data, mspec = sample_highd_manifold(syn.get("c", 5), syn.get("d", 20), n, seed)
    return data, mspec


def build_gspec(cfg: dict, train_data: np.ndarray) -> GeneratorSpec:
    """Generator for the configured variant, with tail estimates from ``train_data``.

    gamma "auto" means 2 for one-dimensional data and max(xi_hat) + 1 otherwise.
    """
    d = train_data.shape[1]
    net = NetSpec(cfg["net"]["noise_dim"], tuple(cfg["net"]["hidden_widths"]), d)
    xi_hats = gamma = None
    if cfg["variant"] == "pareto":
        side, k = cfg["tail"]["side"], cfg["tail"]["k"]
        xi_hats = [estimate_tail_index(train_data[:, j], side, k).xi_hat for j in range(d)]
        gamma = cfg["gamma"]
        if gamma == "auto":
            gamma = 2.0 if d == 1 else None
    return build_generator(cfg["variant"], net, xi_hats, gamma,
                           positive_data=bool(np.all(train_data > 0)))


def train_config(cfg: dict, gspec: GeneratorSpec, threads: int = 1) -> TrainConfig:
    t = cfg["train"]
    return TrainConfig(gspec, t["batch_size"], t["iterations"], tuple(t["learning_rates"]),
                       t["validation_every"], cfg["seed"], tuple(t["fractions"]),
                       t["val_noise_size"], threads)


def write_report(report: TrainReport, out_dir: str) -> None:
    with open(os.path.join(out_dir, "report.json"), "w") as fh:
        json.dump(report.to_dict(), fh, indent=1)
    with open(os.path.join(out_dir, "loss_curves.csv"), "w", newline="") as fh:
        csv.writer(fh).writerows(report.curves_csv_rows())


def run_experiment(cfg: dict, out_dir: str, threads: int = 1):
    """Split, normalize, build, train and write all artifacts into ``out_dir``.

    Returns ``(report, test_data, manifold_spec)`` with test data in original units.
    """
    os.makedirs(out_dir, exist_ok=True)
    data, mspec = load_dataset(cfg)
    tr, va, te, scale = split_normalize(data, tuple(cfg["train"]["fractions"]), cfg["seed"])
    gspec = build_gspec(cfg, tr)
    report = train(train_config(cfg, gspec, threads), tr, va)
    scale_list = np.atleast_1d(scale).tolist()
    test_raw = te * np.asarray(scale_list)
    save_csv(os.path.join(out_dir, "test.csv"), test_raw)
    if mspec is not None:
        with open(os.path.join(out_dir, "manifold_spec.json"), "w") as fh:
            json.dump(mspec.to_dict(), fh)
    if report.checkpoint is not None:
        report.checkpoint.scale = scale_list
        path = os.path.join(out_dir, "checkpoint.json")
        report.checkpoint.save(path)
        report.checkpoint_path = "checkpoint.json"
    write_report(report, out_dir)
    return report, test_raw, mspec


def generate_data_units(ckpt: Checkpoint, n: int, seed: int) -> np.ndarray:
    """Generated rows rescaled to the units of the original data."""
    gen = generate(ckpt.gspec, ckpt.params, n, make_rng(child_seeds(seed, 11)))
    scale = np.asarray(ckpt.scale if ckpt.scale is not None else [1.0])
    return gen * scale


def evaluate(ckpt: Checkpoint, test_data: np.ndarray, seed: int = 0,
             n_generated: Optional[int] = None, manifold: Optional[ManifoldSpec] = None,
             ccdf_dir: Optional[str] = None, gen: Optional[np.ndarray] = None) -> dict:
    """Metric bundle comparing generated samples with ``test_data`` per dimension."""
    test_data = np.asarray(test_data, dtype=float)
    if test_data.ndim == 1:
        test_data = test_data[:, None]
    if gen is None:
        gen = generate_data_units(ckpt, n_generated or test_data.shape[0], seed)
    if gen.shape[1] != test_data.shape[1]:
        raise ValueError("test data dimension does not match the checkpoint")
    dims = []
    for k in range(test_data.shape[1]):
        r, g = test_data[:, k], gen[:, k]
        entry = {"dim": k, "ks": ks_statistic(r, g)}
        try:
            one = loglog_area_detail(r, g)
            entry["area"], entry["area_floor_events"] = one.area, one.floor_events
        except ValueError:
            entry["area"], entry["area_floor_events"] = None, 0
        entry["two_sided"] = two_sided_area(r, g).to_dict()
        dims.append(entry)
        if ccdf_dir is not None:
            suffix = "" if test_data.shape[1] == 1 else f"_x{k}"
            ccdf_export(r).to_csv(os.path.join(ccdf_dir, f"ccdf_real{suffix}.csv"))
            ccdf_export(g).to_csv(os.path.join(ccdf_dir, f"ccdf_gen{suffix}.csv"))
    two = [d["two_sided"] for d in dims]
    metrics = {
        "variant": ckpt.gspec.variant,
        "n_real": int(test_data.shape[0]),
        "n_generated": int(gen.shape[0]),
        "dims": dims,
        "mean_ks": float(np.mean([d["ks"] for d in dims])),
        "mean_two_sided_area": float(np.mean([t["area"] for t in two])),
        "n_one_sided": int(sum(t["one_sided"] for t in two)),
        "n_gen_missing_tail": int(sum(t["gen_missing_tail"] for t in two)),
        "floor_events": int(sum(d["area_floor_events"] + d["two_sided"]["floor_events"]
                                for d in dims)),
    }
    if manifold is not None:
        metrics["mdist"] = {"mean_log_mdist_generated": mean_log_mdist(gen, manifold),
                            "mean_log_mdist_real": mean_log_mdist(test_data, manifold)}
    return metrics
