import json

import numpy as np
import pytest

from paretogan._rng import make_rng
from paretogan.generator import build_generator, build_pareto_generator, generate
from paretogan.metrics import MetricSpec
from paretogan.net import NetSpec
from paretogan.energy import energy_distance
from paretogan.trainer import (Checkpoint, DegenerateDataError, TrainConfig,
                               energy_distance_large, split_normalize, to_loss_space, train,
                               validation_loss, validation_noise)


class TestSplitNormalize:
    def test_mean_magnitude(self):
        data = np.array([2.0, -2.0, 4.0, -4.0] + [100.0] * 36)
        # fractions chosen so the train split has exactly 4 rows; scale is the mean
        # magnitude of whichever rows land there
        tr, va, te, scale = split_normalize(data, (0.1, 0.1), seed=0)
        raw = tr * scale
        assert scale == pytest.approx(np.mean(np.abs(raw)))
        assert raw.shape == (4, 1)

    def test_scale_three(self):
        data = np.array([2.0, -2.0, 4.0, -4.0] * 10)
        for seed in range(50):
            tr, _, _, scale = split_normalize(data, (0.1, 0.1), seed)
            if sorted((tr * scale).ravel().tolist()) == [-4.0, -2.0, 2.0, 4.0]:
                assert scale == 3.0
                break
        else:
            pytest.fail("no seed put one of each value into train")

    def test_sizes(self):
        data = make_rng(0).normal(size=10**5)
        tr, va, te, _ = split_normalize(data, (0.05, 0.05), 1)
        assert (tr.shape[0], va.shape[0], te.shape[0]) == (5000, 5000, 90000)

    def test_partition_and_determinism(self):
        data = np.arange(1.0, 201.0)
        a = split_normalize(data, (0.1, 0.2), 3)
        b = split_normalize(data, (0.1, 0.2), 3)
        for x, y in zip(a[:3], b[:3]):
            np.testing.assert_array_equal(x, y)
        rows = np.concatenate([s.ravel() * a[3] for s in a[:3]])
        np.testing.assert_allclose(np.sort(rows), data)

    def test_per_column_scale(self):
        data = np.column_stack([np.ones(100), 10 * np.ones(100)])
        tr, _, _, scale = split_normalize(data, (0.2, 0.2), 0)
        np.testing.assert_array_equal(scale, [1.0, 10.0])
        np.testing.assert_array_equal(tr, np.ones_like(tr))

    def test_degenerate(self):
        with pytest.raises(DegenerateDataError):
            split_normalize(np.zeros(100), (0.1, 0.1), 0)

    def test_too_few_rows(self):
        with pytest.raises(ValueError):
            split_normalize(np.ones(5), (0.05, 0.05), 0)


def test_energy_distance_large_matches_direct():
    rng = make_rng(0)
    a, b = rng.standard_cauchy((300, 1)), rng.standard_cauchy((2500, 1))
    for m in (MetricSpec(), MetricSpec.root(2.0)):
        assert energy_distance_large(a, b, m) == pytest.approx(energy_distance(a, b, m), rel=1e-10)


def _normal_cfg(**kw):
    gs = build_generator("normal", NetSpec(2, (8, 8), 1))
    base = dict(batch_size=16, iterations=1, learning_rates=(1e-3,), validation_every=1,
                val_noise_size=64)
    base.update(kw)
    return TrainConfig(gs, **base)


class TestTrain:
    def setup_method(self):
        x = make_rng(1).standard_cauchy((400, 1))
        self.tr, self.va, _, _ = split_normalize(x, (0.4, 0.3), 0)

    def test_one_iteration(self):
        rep = train(_normal_cfg(), self.tr, self.va)
        assert len(rep.runs) == 1 and len(rep.runs[0].curve) == 1
        assert rep.checkpoint is not None and rep.checkpoint.step == 1
        assert rep.best_val_loss == rep.runs[0].curve[0][2]

    def test_best_is_minimum(self):
        rep = train(_normal_cfg(iterations=60, validation_every=10, learning_rates=(1e-2, 1e-3)),
                    self.tr, self.va)
        all_val = [c[2] for r in rep.runs for c in r.curve]
        assert rep.best_val_loss == min(all_val)
        assert len(rep.runs[0].curve) == 6

    def test_deterministic(self):
        cfg = _normal_cfg(iterations=30, validation_every=10, learning_rates=(1e-2, 1e-3))
        a = train(cfg, self.tr, self.va).to_dict(timing=False)
        b = train(cfg, self.tr, self.va).to_dict(timing=False)
        assert json.dumps(a) == json.dumps(b)

    def test_threads_do_not_change_results(self):
        cfg = _normal_cfg(iterations=30, validation_every=10, learning_rates=(1e-2, 1e-3))
        a = train(cfg, self.tr, self.va).to_dict(timing=False)
        cfg.threads = 2
        b = train(cfg, self.tr, self.va).to_dict(timing=False)
        assert json.dumps(a) == json.dumps(b)

    def test_checkpoint_reproduces_val_loss(self, tmp_path):
        cfg = _normal_cfg(iterations=40, validation_every=10, learning_rates=(1e-2,))
        rep = train(cfg, self.tr, self.va)
        rep.checkpoint.save(tmp_path / "c.json")
        ck = Checkpoint.load(tmp_path / "c.json")
        vl = validation_loss(ck.gspec, ck.params, to_loss_space(ck.gspec, self.va),
                             validation_noise(cfg))
        assert vl == pytest.approx(rep.best_val_loss, abs=1e-9)

    def test_divergence_contained(self):
        cfg = _normal_cfg(iterations=20, validation_every=5, learning_rates=(1e300, 1e-3))
        rep = train(cfg, self.tr, self.va)
        assert rep.runs[0].diverged and rep.runs[0].message
        assert not rep.runs[1].diverged and rep.best_run == 1
        solo = train(_normal_cfg(iterations=20, validation_every=5, learning_rates=(1e-3,)),
                     self.tr, self.va)
        # the healthy run is independent of what happened to its sibling
        assert [c[2] for c in solo.runs[0].curve] != [] and not rep.all_diverged

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            train(_normal_cfg(), np.ones((10, 2)), np.ones((10, 2)))

    def test_lognormal_requires_positive(self):
        gs = build_generator("lognormal", NetSpec(2, (8,), 1))
        with pytest.raises(ValueError):
            train(TrainConfig(gs, 8, 1, (1e-3,)), self.tr, self.va)

    def test_config_invariants(self):
        gs = build_generator("normal", NetSpec(2, (8,), 1))
        for kw in (dict(batch_size=1), dict(iterations=0), dict(learning_rates=()),
                   dict(fractions=(0.6, 0.5))):
            with pytest.raises(ValueError):
                TrainConfig(gs, **kw)


def test_zero_variance_target():
    c = 3.0
    data = np.full((200, 1), c)
    gs = build_generator("normal", NetSpec(4, (16, 16), 1))
    cfg = TrainConfig(gs, batch_size=64, iterations=2000, learning_rates=(1e-2,),
                      validation_every=100, val_noise_size=256)
    rep = train(cfg, data[:100], data[100:])
    improved = [v for _, _, v in rep.runs[0].curve]
    running_best = np.minimum.accumulate(improved)
    assert np.all(np.diff(running_best) <= 0)
    gen = generate(gs, rep.checkpoint.params, 1000, make_rng(5))
    assert abs(gen.mean() - c) < 0.1 * c


def test_pareto_loss_runs_in_data_space():
    x = make_rng(2).standard_cauchy((400, 1))
    tr, va, _, _ = split_normalize(x, (0.4, 0.3), 0)
    gs = build_pareto_generator([1.0], NetSpec(2, (8,), 1), gamma=2.0)
    rep = train(TrainConfig(gs, 32, 20, (1e-3,), 10, val_noise_size=128), tr, va)
    assert np.isfinite(rep.best_val_loss) and rep.runs[0].exp_caps == 0
