"""Command line interface.

Exit codes: 0 success, 2 usage or invalid config, 3 unreadable or unusable
data, 4 every training run diverged.
"""
from __future__ import annotations

import argparse
import copy
import csv
import json
import logging
import os
import sys
from typing import List, Optional

import numpy as np

from ._rng import make_rng
from .config import ConfigError, load_config
from .evaluation import ManifoldSpec
from .pipeline import evaluate, run_experiment
from .synth import (CauchyMixtureSpec, DataFormatError, load_csv, sample_cauchy_mixture,
                    sample_highd_manifold, sample_joint2d, save_csv)
from .tailest import InsufficientDataError, estimate_tail_index
from .trainer import Checkpoint

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DIVERGED = 0, 2, 3, 4
SIDES = {"pos": "positive", "neg": "negative", "mag": "magnitude"}

log = logging.getLogger("paretogan")


class _Fail(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _read_columns(path, cols, delimiter):
    try:
        return load_csv(path, cols, delimiter)
    except (OSError, DataFormatError, UnicodeDecodeError) as exc:
        raise _Fail(EXIT_DATA, f"cannot read {path}: {exc}")


def _dump(obj, out: Optional[str], name: str):
    text = json.dumps(obj, indent=1)
    print(text)
    if out:
        os.makedirs(out, exist_ok=True)
        with open(os.path.join(out, name), "w") as fh:
            fh.write(text + "\n")


def cmd_estimate_tail(args) -> int:
    data, rejected = _read_columns(args.csv, args.col, args.delimiter)
    sides = [SIDES[args.side]] if args.side else list(SIDES.values())
    report = {"file": args.csv, "rejected_rows": rejected, "columns": []}
    ok = 0
    for j in range(data.shape[1]):
        entry = {"column": args.col[j] if args.col else j, "estimates": {}}
        for side in sides:
            try:
                entry["estimates"][side] = estimate_tail_index(data[:, j], side, args.k).to_dict()
                ok += 1
            except InsufficientDataError as exc:
                entry["estimates"][side] = {"error": str(exc)}
        report["columns"].append(entry)
    if ok == 0:
        raise _Fail(EXIT_DATA, "no side had enough data for a tail estimate")
    _dump(report, args.out, "tail_estimates.json")
    return EXIT_OK


def _config_for(args):
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        raise _Fail(EXIT_DATA, f"cannot read config: {exc}")
    except ConfigError as exc:
        raise _Fail(EXIT_USAGE, str(exc))
    if args.variant:
        cfg["variant"] = args.variant
    if args.seed is not None:
        cfg["seed"] = args.seed
    return cfg


def _train_into(cfg, out, threads):
    try:
        report, test, mspec = run_experiment(cfg, out, threads)
    except (OSError, DataFormatError, InsufficientDataError) as exc:
        raise _Fail(EXIT_DATA, str(exc))
    return report, test, mspec


def cmd_train(args) -> int:
    cfg = _config_for(args)
    out = args.out or cfg.get("out")
    if not out:
        raise _Fail(EXIT_USAGE, "an output directory is required (--out or config 'out')")
    report, _, _ = _train_into(cfg, out, args.threads)
    summary = {"out": out, "best_run": report.best_run, "best_val_loss": report.best_val_loss,
               "diverged_runs": [r.run_id for r in report.runs if r.diverged]}
    print(json.dumps(summary))
    return EXIT_DIVERGED if report.all_diverged else EXIT_OK


def cmd_eval(args) -> int:
    try:
        ckpt = Checkpoint.load(args.checkpoint)
    except (OSError, ValueError, KeyError) as exc:
        raise _Fail(EXIT_DATA, f"cannot load checkpoint: {exc}")
    test, _ = _read_columns(args.csv, args.col, args.delimiter)
    manifold = None
    if args.manifold_spec:
        try:
            with open(args.manifold_spec) as fh:
                manifold = ManifoldSpec.from_dict(json.load(fh))
        except (OSError, ValueError, KeyError) as exc:
            raise _Fail(EXIT_DATA, f"cannot load manifold spec: {exc}")
    os.makedirs(args.out, exist_ok=True)
    try:
        metrics = evaluate(ckpt, test, args.seed or 0, args.n, manifold,
                           ccdf_dir=args.out)
    except ValueError as exc:
        raise _Fail(EXIT_DATA, str(exc))
    _dump(metrics, args.out, "metrics.json")
    return EXIT_OK


def sweep_width(cfg: dict, widths, variants, seeds, out: str, threads: int = 1):
    """Train and evaluate one model per (variant, width, seed); returns result rows."""
    rows = []
    for variant in variants:
        for width in widths:
            for seed in seeds:
                c = copy.deepcopy(cfg)
                c["variant"], c["seed"] = variant, seed
                c["net"]["hidden_widths"] = [width] * len(cfg["net"]["hidden_widths"])
                run_dir = os.path.join(out, f"{variant}_w{width}_s{seed}")
                report, test, mspec = _train_into(c, run_dir, threads)
                if report.checkpoint is None:
                    rows.append({"variant": variant, "width": width, "seed": seed,
                                 "area": float("nan"), "gen_missing_tail": None})
                    continue
                m = evaluate(report.checkpoint, test, seed, c["eval"]["n_generated"], mspec)
                with open(os.path.join(run_dir, "metrics.json"), "w") as fh:
                    json.dump(m, fh, indent=1)
                rows.append({"variant": variant, "width": width, "seed": seed,
                             "area": m["mean_two_sided_area"],
                             "gen_missing_tail": m["n_gen_missing_tail"] > 0})
    with open(os.path.join(out, "sweep.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["variant", "width", "seed", "area", "gen_missing_tail"])
        for r in rows:
            w.writerow([r["variant"], r["width"], r["seed"], repr(r["area"]), r["gen_missing_tail"]])
    return rows


def cmd_sweep_width(args) -> int:
    cfg = _config_for(args)
    seeds = args.seeds or [cfg["seed"]]
    variants = args.variants.split(",") if args.variants else [cfg["variant"]]
    bad = [v for v in variants if v not in ("uniform", "normal", "lognormal", "pareto")]
    if bad:
        raise _Fail(EXIT_USAGE, f"unknown variants {bad}")
    os.makedirs(args.out, exist_ok=True)
    rows = sweep_width(cfg, args.widths, variants, seeds, args.out, args.threads)
    if rows and all(np.isnan(r["area"]) for r in rows):
        return EXIT_DIVERGED
    return EXIT_OK


def cmd_synth(args) -> int:
    seed = args.seed if args.seed is not None else 0
    os.makedirs(args.out, exist_ok=True)
    if args.kind == "cauchy-mixture":
        spec = CauchyMixtureSpec()
        data = sample_cauchy_mixture(spec, args.n, make_rng(seed))
        with open(os.path.join(args.out, "mixture_spec.json"), "w") as fh:
            json.dump(spec.to_dict(), fh)
    elif args.kind == "joint2d":
        data = sample_joint2d(args.n, make_rng(seed))
    else:
        if not args.c < args.d:
            raise _Fail(EXIT_USAGE, "manifold needs c < d")
        data, mspec = sample_highd_manifold(args.c, args.d, args.n, seed)
        with open(os.path.join(args.out, "manifold_spec.json"), "w") as fh:
            json.dump(mspec.to_dict(), fh)
    save_csv(os.path.join(args.out, "samples.csv"), data)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paretogan",
                                description="Heavy-tailed generative modelling with Pareto GANs.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_required=True):
        sp.add_argument("--seed", type=int, default=None, help="random seed")
        sp.add_argument("--out", required=out_required, default=None, help="output directory")

    e = sub.add_parser("estimate-tail", help="Hill tail-index estimates per column and side")
    e.add_argument("--csv", required=True, help="input CSV file")
    e.add_argument("--col", type=int, action="append", help="column index (repeatable)")
    e.add_argument("--side", choices=sorted(SIDES), help="restrict to one side")
    e.add_argument("--k", type=int, default=None, help="number of upper order statistics")
    e.add_argument("--delimiter", default=",", help="CSV delimiter")
    common(e, out_required=False)
    e.set_defaults(func=cmd_estimate_tail)

    t = sub.add_parser("train", help="train a generator from a JSON experiment config")
    t.add_argument("--config", required=True, help="experiment config JSON")
    t.add_argument("--variant", choices=["pareto", "normal", "lognormal", "uniform"],
                   help="override the config's generator variant")
    t.add_argument("--threads", type=int, default=1, help="parallel learning-rate runs")
    common(t, out_required=False)
    t.set_defaults(func=cmd_train)

    v = sub.add_parser("eval", help="evaluate a checkpoint against test data")
    v.add_argument("--checkpoint", required=True, help="checkpoint JSON from train")
    v.add_argument("--csv", required=True, help="test data CSV")
    v.add_argument("--col", type=int, action="append", help="column index (repeatable)")
    v.add_argument("--delimiter", default=",", help="CSV delimiter")
    v.add_argument("--n", type=int, default=None, help="generated sample count")
    v.add_argument("--manifold-spec", default=None, help="manifold spec JSON for MDist")
    common(v)
    v.set_defaults(func=cmd_eval)

    w = sub.add_parser("sweep-width", help="area metric across hidden-layer widths")
    w.add_argument("--config", required=True, help="base experiment config JSON")
    w.add_argument("--widths", type=_int_list, required=True, help="comma-separated widths")
    w.add_argument("--variants", default=None, help="comma-separated variants")
    w.add_argument("--seeds", type=_int_list, default=None, help="comma-separated seeds")
    w.add_argument("--variant", default=None, help=argparse.SUPPRESS)
    w.add_argument("--threads", type=int, default=1, help="parallel learning-rate runs")
    common(w)
    w.set_defaults(func=cmd_sweep_width)

    s = sub.add_parser("synth", help="write synthetic samples")
    s.add_argument("kind", choices=["cauchy-mixture", "joint2d", "manifold"])
    s.add_argument("-n", type=int, default=100000, help="number of rows")
    s.add_argument("-c", type=int, default=5, help="manifold latent dimension")
    s.add_argument("-d", type=int, default=20, help="manifold ambient dimension")
    common(s)
    s.set_defaults(func=cmd_synth)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
