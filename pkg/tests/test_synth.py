import numpy as np
import pytest

from paretogan._rng import make_rng
from paretogan.synth import (CauchyMixtureSpec, DataFormatError, cauchy_quantile,
                             joint2d_from_latent, load_csv, sample_cauchy, sample_cauchy_mixture,
                             sample_highd_manifold, sample_joint2d, save_csv)
from paretogan.evaluation import ManifoldSpec, manifold_distances
from paretogan.tailest import estimate_tail_index


class TestCauchy:
    def test_quantiles(self):
        assert cauchy_quantile(0.5, 3.0, 2.0) == 3.0
        assert cauchy_quantile(0.75) == pytest.approx(1.0)

    def test_tail_index(self):
        x = sample_cauchy(10**6, rng=make_rng(0))
        assert abs(estimate_tail_index(x).xi_hat - 1.0) < 0.15

    def test_bad_scale(self):
        with pytest.raises(ValueError):
            sample_cauchy(5, scale=0.0)


class TestMixture:
    def test_single_component(self):
        spec = CauchyMixtureSpec((2.0,), (3.0,), (1.0,))
        np.testing.assert_array_equal(sample_cauchy_mixture(spec, 100, make_rng(1)),
                                      sample_cauchy(100, 2.0, 3.0, make_rng(1)))

    def test_zero_weight(self):
        spec = CauchyMixtureSpec((0.0, 1e9), (1e-9, 1.0), (1.0, 0.0))
        x = sample_cauchy_mixture(spec, 10**4, make_rng(2))
        assert np.all(np.abs(x) < 1e3)

    def test_symmetry(self):
        x = sample_cauchy_mixture(n=10**6, rng=make_rng(3))
        assert -5 < np.median(x) < 5
        assert abs(np.mean(x > 0) - 0.5) < 0.002

    def test_defaults(self):
        spec = CauchyMixtureSpec()
        assert spec.locations == (-5.0, 5.0) and spec.weights == (0.5, 0.5)

    def test_invalid(self):
        with pytest.raises(ValueError):
            CauchyMixtureSpec((0.0, 1.0), (1.0, 1.0), (0.3, 0.3))


class TestJoint2d:
    def test_equal_latents(self):
        assert joint2d_from_latent([1.7], [1.7])[0, 1] == 0.0

    def test_injected(self):
        np.testing.assert_allclose(joint2d_from_latent([2.0], [1.0]), [[3.0, 1.0]])

    def test_tail_indices(self):
        x = sample_joint2d(10**6, make_rng(4))
        assert abs(estimate_tail_index(x[:, 0]).xi_hat - 1.0) < 0.15
        assert abs(estimate_tail_index(x[:, 1]).xi_hat - 0.5) < 0.15

    def test_sign_symmetry(self):
        x = sample_joint2d(10**6, make_rng(5))
        assert abs(np.mean(x[:, 0] > 0) - 0.5) < 0.002

    def test_deterministic(self):
        np.testing.assert_array_equal(sample_joint2d(100, make_rng(6)),
                                      sample_joint2d(100, make_rng(6)))


class TestManifold:
    def test_zero_latent(self):
        spec = ManifoldSpec(np.array([[1.0], [2.0]]), np.array([1.0, 2.0]))
        np.testing.assert_array_equal(spec.warp(np.zeros(1)), [[0.0, 0.0]])

    def test_scalar_case(self):
        spec = ManifoldSpec(np.array([[2.0]]), np.array([1.0]))
        assert spec.warp(np.array([3.0]))[0, 0] == 6.0

    def test_signed_power_convention(self):
        spec = ManifoldSpec(np.array([[-1.0], [1.0]]), np.array([2.0, 1.0]))
        assert spec.warp(np.array([3.0]))[0, 0] == -9.0

    def test_shapes_and_ranges(self):
        x, spec = sample_highd_manifold(5, 20, 1000, 7)
        assert x.shape == (1000, 20) and spec.C.shape == (20, 5)
        assert np.all((spec.t >= 0.5) & (spec.t <= 3.0))

    def test_rows_on_manifold(self):
        x, spec = sample_highd_manifold(5, 20, 5000, 8)
        scale = np.linalg.norm(spec.unwarp(x), axis=1)
        assert np.all(manifold_distances(x, spec) <= 1e-8 * np.maximum(1.0, scale))

    def test_spec_independent_of_n(self):
        _, a = sample_highd_manifold(3, 6, 10, 9)
        _, b = sample_highd_manifold(3, 6, 1000, 9)
        np.testing.assert_array_equal(a.C, b.C)

    def test_c_less_than_d(self):
        with pytest.raises(ValueError):
            sample_highd_manifold(5, 5, 10, 0)


class TestCsv:
    def test_header(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("x\n1\n2\n")
        data, rejected = load_csv(p)
        np.testing.assert_array_equal(data, [[1.0], [2.0]])
        assert rejected == 0

    def test_malformed_row(self, tmp_path):
        p = tmp_path / "b.csv"
        rows = [str(i) for i in range(10)]
        rows[4] = "oops"
        p.write_text("\n".join(rows) + "\n")
        data, rejected = load_csv(p)
        assert data.shape == (9, 1) and rejected == 1

    def test_round_trip(self, tmp_path):
        x = make_rng(0).standard_cauchy((50, 3))
        save_csv(tmp_path / "c.csv", x)
        y, _ = load_csv(tmp_path / "c.csv")
        np.testing.assert_allclose(y, x, rtol=0, atol=1e-12)

    def test_columns_and_delimiter(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("a;b;c\n1;2;3\n4;5;6\n")
        data, _ = load_csv(p, [2, 0], delimiter=";")
        np.testing.assert_array_equal(data, [[3, 1], [6, 4]])

    def test_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_csv(tmp_path / "none.csv")

    def test_no_rows(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("x\nfoo\n")
        with pytest.raises(DataFormatError):
            load_csv(p)
