"""Metric axioms and window monotonicity on random truncated points."""

import random

import numpy as np
import pytest

from meandim.metrics import (
    LINF_FINITE,
    SUM_WEIGHTED_ABS,
    SUM_WEIGHTED_MAX,
    SUM_WEIGHTED_TORUS,
    MetricDescriptor,
    PointCloud,
    distance,
    torus_gap,
)

SCALAR_KINDS = (SUM_WEIGHTED_ABS, SUM_WEIGHTED_TORUS, LINF_FINITE)


def random_point(rng, kind, dim=12):
    if kind == SUM_WEIGHTED_MAX:
        return rng.random((2, dim))
    return rng.random(dim)


@pytest.mark.parametrize("kind", SCALAR_KINDS + (SUM_WEIGHTED_MAX,))
@pytest.mark.parametrize("iterates", [None, 1, 4])
def test_metric_axioms_on_random_triples(kind, iterates):
    rng = np.random.default_rng(hash((kind, iterates)) % 2**32)
    metric = MetricDescriptor(kind=kind, iterates=iterates)
    for _ in range(1000):
        x, y, z = (random_point(rng, kind) for _ in range(3))
        dxy = distance(x, y, metric)
        dyx = distance(y, x, metric)
        assert abs(dxy - dyx) <= 1e-12
        assert distance(x, x, metric) == 0.0
        assert dxy <= distance(x, z, metric) + distance(z, y, metric) + 1e-12


@pytest.mark.parametrize("kind", (SUM_WEIGHTED_ABS, SUM_WEIGHTED_TORUS, SUM_WEIGHTED_MAX))
def test_window_monotone(kind):
    rng = np.random.default_rng(5)
    for _ in range(200):
        x, y = random_point(rng, kind, 16), random_point(rng, kind, 16)
        values = [
            distance(x, y, MetricDescriptor(kind=kind, iterates=n)) for n in range(1, 6)
        ]
        assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


def test_dynamic_dominates_static():
    rng = np.random.default_rng(6)
    for _ in range(100):
        x, y = rng.random(10), rng.random(10)
        static = distance(x, y, MetricDescriptor(kind=SUM_WEIGHTED_ABS))
        dynamic = distance(x, y, MetricDescriptor(kind=SUM_WEIGHTED_ABS, iterates=5))
        assert dynamic >= static - 1e-15


def test_torus_gap_wraps():
    assert torus_gap(0.1, 0.9) == pytest.approx(0.2, abs=1e-15)
    assert torus_gap(0.0, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert float(torus_gap(0.25, 0.25)) == 0.0


def test_weighted_abs_hand_value():
    x = np.array([1.0, 0.0, 0.0])
    y = np.array([0.0, 1.0, 0.0])
    metric = MetricDescriptor(kind=SUM_WEIGHTED_ABS)
    assert distance(x, y, metric) == pytest.approx(0.5 + 0.25, abs=1e-15)
    shifted = MetricDescriptor(kind=SUM_WEIGHTED_ABS, iterates=2)
    # the shift drops the first coordinate: max(0.75, 0.5)
    assert distance(x, y, shifted) == pytest.approx(0.75, abs=1e-15)


def test_pair_metric_takes_coordinatewise_max():
    x = np.array([[1.0, 0.0], [0.0, 0.0]])
    y = np.array([[0.0, 0.0], [0.5, 0.0]])
    metric = MetricDescriptor(kind=SUM_WEIGHTED_MAX)
    assert distance(x, y, metric) == pytest.approx(0.5 * 1.0, abs=1e-15)


def test_cloud_pairwise_and_min():
    rng = np.random.default_rng(7)
    cloud = PointCloud(
        points=rng.random((9, 6)),
        metric=MetricDescriptor(kind=LINF_FINITE),
    )
    mat = cloud.pairwise()
    n = len(cloud)
    direct = min(mat[i][j] for i in range(n) for j in range(n) if i != j)
    assert cloud.min_pairwise() == pytest.approx(direct, abs=1e-15)
    assert np.allclose(mat, mat.T)
