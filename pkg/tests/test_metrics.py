import numpy as np
import pytest

from paretogan._rng import make_rng
from paretogan.metrics import MetricSpec, metric_eval, metric_grad_x

KINDS = [MetricSpec(), MetricSpec.bounded(1.0), MetricSpec.bounded(3.0), MetricSpec.root(1.5),
         MetricSpec.root(2.0), MetricSpec.root(3.0)]


@pytest.mark.parametrize("m", KINDS)
def test_identity(m):
    x = np.array([1.0, -2.0, 0.5])
    assert metric_eval(m, x, x) == 0.0


def test_bounded_value():
    assert metric_eval(MetricSpec.bounded(1.0), [1.0], [0.0]) == 0.5


def test_root_value():
    assert metric_eval(MetricSpec.root(2.0), [4.0, 0.0], [0.0, 0.0]) == 2.0


def test_root_grad():
    np.testing.assert_allclose(metric_grad_x(MetricSpec.root(2.0), [4.0], [0.0]), [0.25])


def test_euclidean_grad():
    np.testing.assert_allclose(metric_grad_x(MetricSpec(), [3.0, 4.0], [0.0, 0.0]), [0.6, 0.8])


@pytest.mark.parametrize("m", KINDS)
def test_coincident_grad_is_zero(m):
    g = metric_grad_x(m, [1.0, 2.0], [1.0, 2.0])
    assert np.all(np.isfinite(g)) and np.all(g == 0.0)


@pytest.mark.parametrize("m", KINDS)
def test_dimension_mismatch(m):
    with pytest.raises(ValueError):
        metric_eval(m, [1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        metric_grad_x(m, [1.0, 2.0], [1.0])


@pytest.mark.parametrize("kwargs", [dict(kind="root", gamma=0.5), dict(kind="bounded", alpha=0.0),
                                    dict(kind="euclidean", epsilon=0.0), dict(kind="rbf")])
def test_invalid_spec(kwargs):
    with pytest.raises(ValueError):
        MetricSpec(**kwargs)


@pytest.mark.parametrize("m", KINDS)
def test_gradient_finite_differences(m):
    rng = make_rng(7)
    h = 1e-6
    for _ in range(20):
        x, y = rng.normal(size=3) * 3, rng.normal(size=3) * 3
        if np.linalg.norm(x - y) <= 10 * m.epsilon:
            continue
        g = metric_grad_x(m, x, y)
        fd = np.array([(metric_eval(m, x + h * e, y) - metric_eval(m, x - h * e, y)) / (2 * h)
                       for e in np.eye(3)])
        np.testing.assert_allclose(g, fd, rtol=1e-5, atol=1e-9)


def test_symmetry():
    rng = make_rng(8)
    for m in KINDS:
        x, y = rng.normal(size=(2, 4))
        assert metric_eval(m, x, y) == metric_eval(m, y, x)


def test_bounded_below_one():
    rng = make_rng(9)
    r = np.abs(rng.standard_cauchy(10**5)) * 1e3
    for alpha in (0.1, 1.0):
        m = MetricSpec.bounded(alpha)
        assert all(metric_eval(m, [v], [0.0]) < 1 for v in r[:2000])
        assert np.all(r / (alpha + r) < 1)


@pytest.mark.parametrize("gamma", [1.0, 1.5, 2.0, 3.0])
def test_triangle_inequality(gamma):
    rng = make_rng(10)
    a, b, c = rng.standard_cauchy((3, 10**5))
    d = lambda u, v: np.abs(u - v) ** (1 / gamma)
    assert np.all(d(a, c) <= d(a, b) + d(b, c) + 1e-12 * (1 + d(a, c)))
    m = MetricSpec.root(gamma)
    for i in range(200):
        assert metric_eval(m, [a[i]], [c[i]]) <= metric_eval(m, [a[i]], [b[i]]) + \
            metric_eval(m, [b[i]], [c[i]]) + 1e-12


def test_root_ordering():
    rng = make_rng(11)
    for _ in range(500):
        x, y = rng.normal(size=(2, 2)) * rng.choice([0.1, 10.0])
        g1, g2 = sorted(rng.uniform(1, 4, size=2))
        r = np.linalg.norm(x - y)
        d1 = metric_eval(MetricSpec.root(g1), x, y)
        d2 = metric_eval(MetricSpec.root(g2), x, y)
        if r >= 1:
            assert d2 <= d1 + 1e-15
        else:
            assert d2 >= d1 - 1e-15
