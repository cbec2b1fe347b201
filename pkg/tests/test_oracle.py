"""Oracle operations: covering brackets, box machinery, measures, witnesses."""

import itertools
import math
import random

import numpy as np
import pytest

from meandim import carpet as cp
from meandim import oracle as orc
from meandim import weighted as wt
from meandim.errors import (
    DegenerateScale,
    DomainError,
    HypothesisViolated,
    ParameterOverflow,
)
from meandim.metrics import LINF_FINITE, MetricDescriptor, PointCloud

R_EXAMPLE = [(0, 0), (1, 1), (2, 0)]


def line_cloud(values):
    return PointCloud(
        points=np.array(values).reshape(-1, 1),
        metric=MetricDescriptor(kind=LINF_FINITE),
    )


class TestCoveringBounds:
    def test_equispaced_points_bracket_the_optimum(self):
        cloud = line_cloud([j / 8 for j in range(8)])
        bounds = orc.covering_bounds(cloud, 0.26)
        optimum = orc.exact_min_cover(cloud, 0.26)
        assert bounds.lower <= optimum <= bounds.upper
        assert optimum == 3  # groups of three span 0.25 < 0.26

    def test_singleton(self):
        cloud = line_cloud([0.4])
        bounds = orc.covering_bounds(cloud, 0.1)
        assert bounds.lower == bounds.upper == 1

    def test_brackets_contain_exhaustive_optimum_random(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            n = int(rng.integers(2, 13))
            cloud = line_cloud(sorted(rng.random(n).tolist()))
            eps = float(rng.uniform(0.05, 0.6))
            bounds = orc.covering_bounds(cloud, eps)
            optimum = orc.exact_min_cover(cloud, eps)
            assert bounds.lower <= optimum <= bounds.upper

    def test_beta_family_lower_bound(self):
        from meandim import selfsim as ss

        spec = ss.beta_system(2, 2.0)
        fam = ss.covering_lower_bound(spec, 2, 2)
        bounds = orc.covering_bounds(fam.points, fam.eps)
        assert bounds.lower >= fam.n_words**2

    def test_degenerate_scale(self):
        cloud = PointCloud(
            points=np.array([[0.0], [1.0]]),
            metric=MetricDescriptor(kind=LINF_FINITE),
            truncation_error=0.1,
        )
        with pytest.raises(DegenerateScale):
            orc.covering_bounds(cloud, 0.3)


class TestHausdorffUpper:
    def test_two_quarter_sets(self):
        # 2 (1/4)^s = 1 at s = 1/2
        assert orc.hausdorff_upper_at_scale([0.25, 0.25], 0.3) == pytest.approx(
            0.5, abs=1e-9
        )

    def test_single_set_is_zero(self):
        assert orc.hausdorff_upper_at_scale([0.17], 0.3) == 0.0

    def test_qbox_cover_exponent(self):
        # six boxes of diameter 1/3: s* = log 6 / log 3
        assert orc.hausdorff_upper_at_scale([1 / 3] * 6, 0.4) == pytest.approx(
            math.log(6) / math.log(3), abs=1e-9
        )

    def test_diameter_validation(self):
        with pytest.raises(DomainError):
            orc.hausdorff_upper_at_scale([0.5], 0.3)  # diam >= eps
        with pytest.raises(DomainError):
            orc.hausdorff_upper_at_scale([1.1], 2.0)  # diam >= 1
        with pytest.raises(DomainError):
            orc.hausdorff_upper_at_scale([0.0, 0.2], 0.3)  # nonpositive diam


class TestQBoxFamily:
    def test_example_counts_exact(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        for n in range(1, 4):
            omega_n = 3**n
            image_n = 2**n
            for m in range(1, 6):
                fam = orc.qbox_family(spec, n, m)
                t = fam.floor_wm
                assert fam.count == fam.count_formula == omega_n**t * image_n ** (m - t)
                assert fam.diam_certified
                assert fam.separation_certified

    def test_m_one_fixes_only_y(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        fam = orc.qbox_family(spec, 1, 1)
        assert fam.floor_wm == 0
        assert fam.count == 2  # |Omega'|_1|

    def test_singleton_relation(self):
        spec = cp.carpet_from_tuples(3, 2, [(1, 0)])
        for n, m in ((1, 1), (2, 3), (3, 5)):
            assert orc.qbox_family(spec, n, m).count == 1

    def test_box_iteration_matches_count_and_anchors(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        fam = orc.qbox_family(spec, 1, 2)
        boxes = list(fam.iter_boxes())
        assert len(boxes) == fam.count
        anchors = {box.anchor for box in boxes}
        assert len(anchors) == fam.count
        for box in boxes:
            assert box.diam_bound == fam.diam_bound
            assert box.diam_bound < 3 * 2.0**-2

    def test_separation_observed(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        for n, m in ((1, 2), (2, 3), (2, 4)):
            fam = orc.qbox_family(spec, n, m)
            rep = orc.verify_family_separation(fam)
            assert rep["ok"]
            assert rep["observed_min"] == pytest.approx(2.0**-m, abs=1e-12)

    def test_sampled_separation_on_large_family(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        fam = orc.qbox_family(spec, 3, 4)
        rep = orc.verify_family_separation(fam, samples=500)
        assert rep["mode"] == "sampled_pairs"
        assert rep["ok"]

    def test_witness_cloud_distinct_points(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        cloud = orc.qbox_family(spec, 2, 3).witness_cloud()
        seen = {tuple(p) for p in cloud.points.tolist()}
        assert len(seen) == len(cloud)


class TestSandwich:
    def test_ratio_brackets_the_formula(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        target = cp.mean_dims(spec, 6).mdim_m.value
        sw = orc.covering_sandwich(spec, 3, 4)
        assert sw["lower_ratio"] <= target + 0.15
        assert sw["upper_ratio"] >= target - 0.15

    def test_greedy_agrees_on_materialized_family(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        sw = orc.covering_sandwich(spec, 2, 4)
        assert sw["greedy"]["lower"] == sw["count"]


class TestMassDistribution:
    def test_example_certificate(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        z1 = 1.0 + 2.0**spec.w
        s = math.log2(z1) - 0.1
        rep = orc.mass_distribution_check(spec, 1, range(4, 11), s)
        assert rep["all_passed"]
        assert rep["identity_ok"]
        for m, cell in rep["per_m"].items():
            assert cell["mass_ok"]
            assert cell["largest_s"] >= s

    def test_hand_computed_level_one_measure(self):
        # f_1 over the three tuples: t(0) = 2, t(1) = 1, Z_1 = 2^w + 1
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        w = spec.w
        z1 = 2.0**w + 1.0
        table = wt.fiber_counts(spec.system, 1)
        total = math.fsum(
            t ** (w - 1.0) / z1 * t for t in table.level(1).values()
        )
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_uniform_relation_gives_uniform_measure(self):
        rel = [(u, v) for u in range(3) for v in range(2)]
        spec = cp.carpet_from_tuples(3, 2, rel)
        rep = orc.mass_distribution_check(spec, 1, [4], s=0.5)
        assert rep["identity_ok"]
        cell = rep["per_m"][4]
        assert cell["mass_ok"]
        assert cell["box_count"] == 6 ** cell["floor_wm"] * 2 ** (4 - cell["floor_wm"])

    def test_too_large_s_fails(self):
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        rep = orc.mass_distribution_check(spec, 1, [6], s=2.5)
        assert not rep["all_passed"]


class TestDuplicationBound:
    def test_any_excess_collection_contains_a_separated_pair(self):
        # among any 4^N + 1 boxes with distinct fixed digits, two are
        # >= b^-M apart: with N = 1, any 5 of the 6 level-(1,2) boxes work
        spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
        fam = orc.qbox_family(spec, 1, 2)
        cloud = fam.witness_cloud()
        pts = cloud.points
        target = 2.0**-2
        for combo in itertools.combinations(range(len(pts)), 4**1 + 1):
            found = any(
                cloud.distance(i, j) >= target - 1e-12
                for i, j in itertools.combinations(combo, 2)
            )
            assert found


class TestMeasureCoverUpper:
    def test_equal_boxes_pass_with_equality(self):
        diam = 0.003
        n_boxes = 4
        s = math.log(n_boxes) / math.log(1.0 / diam)
        witnesses = [
            orc.WitnessSet(diam=diam, mass=1.0 / n_boxes, covers=frozenset([i]))
            for i in range(n_boxes)
        ]
        rep = orc.measure_cover_upper(n_boxes, witnesses, eps=0.02, c=0.5, s=s)
        assert rep["ok"]
        assert rep["dimension_bound"] == pytest.approx(1.5 * s, abs=1e-12)
        assert rep["mass_margin"] == pytest.approx(0.0, abs=1e-12)

    def test_reciprocal_witnesses_feed_the_lemma(self):
        n_window, m = 2, 2
        eps = 0.1
        delta = orc.reciprocal_witness_delta(m, eps)
        tail = orc.reciprocal_tail_depth(m, delta)
        witnesses = []
        for i in range(20):
            x = orc.sample_reciprocal_point(n_window + tail, 10_000, seed=i)
            wit = orc.reciprocal_product_witness(x, n_window, m, eps)
            assert wit["passed"]
            witnesses.append(
                orc.WitnessSet(
                    diam=wit["diam_bound"],
                    mass=wit["mass"],
                    covers=frozenset([i]),
                )
            )
        s = 6.0 * (n_window + tail) / m
        rep = orc.measure_cover_upper(20, witnesses, eps=eps, c=1.0, s=s)
        assert rep["ok"]

    def test_oversized_witness_rejected(self):
        witnesses = [orc.WitnessSet(diam=0.05, mass=1.0, covers=frozenset([0]))]
        with pytest.raises(HypothesisViolated):
            orc.measure_cover_upper(1, witnesses, eps=0.1, c=0.5, s=0.5)

    def test_uncovered_point_rejected(self):
        witnesses = [orc.WitnessSet(diam=0.001, mass=1.0, covers=frozenset([0]))]
        with pytest.raises(HypothesisViolated):
            orc.measure_cover_upper(2, witnesses, eps=0.1, c=0.5, s=0.1)


class TestProductMeasure:
    def test_normalization_enforced(self):
        with pytest.raises(DomainError):
            orc.ProductMeasure(values=(0, 1), masses=(0.5, 0.4))

    def test_cylinder_mass(self):
        mu = orc.ProductMeasure(values=(0, 1, 2), masses=(0.5, 0.25, 0.25))
        assert mu.cylinder_mass([{0}, None, {1, 2}]) == pytest.approx(0.25, abs=1e-15)


class TestReciprocalSpace:
    def test_interval_mass_hand_values(self):
        a = orc.INV_SQ_WEIGHT
        assert orc.inverse_square_mass(0.99, 1.0) == pytest.approx(a, abs=1e-15)
        assert orc.inverse_square_mass(1 / 3 - 1e-12, 0.5) == pytest.approx(
            a * (1 / 4 + 1 / 9), abs=1e-12
        )
        assert orc.inverse_square_mass(-0.01, 0.0) == pytest.approx(0.5, abs=1e-15)
        assert orc.inverse_square_mass(-1.0, 2.0) <= 1.0

    def test_full_line_mass_is_one(self):
        assert orc.inverse_square_mass(-1.0, 2.0) == pytest.approx(1.0, abs=1e-9)

    def test_all_zero_point(self):
        delta = orc.reciprocal_witness_delta(2, 0.1)
        tail = orc.reciprocal_tail_depth(2, delta)
        wit = orc.reciprocal_product_witness([0.0] * (3 + tail), 3, 2, 0.1)
        assert wit["passed"]
        assert all(c == "zero_atom" for c in wit["cases"])

    def test_all_ones_point(self):
        delta = orc.reciprocal_witness_delta(2, 0.12)
        tail = orc.reciprocal_tail_depth(2, delta)
        wit = orc.reciprocal_product_witness([1.0] * (2 + tail), 2, 2, 0.12)
        assert wit["passed"]
        assert all(c == "large_value" for c in wit["cases"])
        # per-coordinate bound of the large-value case, checked directly
        r = wit["r"]
        assert orc.INV_SQ_WEIGHT > (2 * r) ** (3 / 2)

    def test_single_coordinate_case_analysis(self):
        delta = orc.reciprocal_witness_delta(1, 0.1)
        tail = orc.reciprocal_tail_depth(1, delta)
        x = [0.5] + [0.0] * tail
        wit = orc.reciprocal_product_witness(x, 1, 1, 0.1)
        assert wit["passed"]
        assert wit["cases"][0] in ("large_value", "thin_class")
        assert all(c == "zero_atom" for c in wit["cases"][1:])

    def test_100_random_points(self):
        for i in range(100):
            m = 2 + (i % 2)
            n_window = 1 + (i % 3)
            eps = 0.05 + 0.01 * (i % 5)
            delta = orc.reciprocal_witness_delta(m, eps)
            tail = orc.reciprocal_tail_depth(m, delta)
            x = orc.sample_reciprocal_point(n_window + tail, 100_000, seed=i)
            wit = orc.reciprocal_product_witness(x, n_window, m, eps)
            assert wit["passed"]

    def test_large_m_overflows(self):
        with pytest.raises(ParameterOverflow):
            orc.reciprocal_product_witness([0.0] * 10, 1, 7, 0.1)

    def test_set_dims(self):
        rep = orc.reciprocal_set_dims(100_000, [1e-4])
        assert 0.40 <= rep["minkowski_scale"][1e-4] <= 0.60
        assert rep["hausdorff_scale_upper"][1e-4] == 0.0
        assert rep["witness"][1e-4]["weight_below_one"]

    def test_tiny_k_set(self):
        rep = orc.reciprocal_set_dims(1, [0.5])  # K = {0, 1}
        assert rep["covering_number_0.5"] == 2

    def test_eps_below_truncation_rejected(self):
        with pytest.raises(DegenerateScale):
            orc.reciprocal_set_dims(100, [1e-4])


def test_all_zero_point_records_threshold_scale():
    # with every coordinate in the smallest class, mass >= (1/2)^(N+L);
    # the claim follows whenever m stays below 6 log2(1 / (2r))
    delta = orc.reciprocal_witness_delta(2, 0.1)
    tail = orc.reciprocal_tail_depth(2, delta)
    wit = orc.reciprocal_product_witness([0.0] * (3 + tail), 3, 2, 0.1)
    m_star = 6.0 * math.log2(1.0 / (2.0 * wit["r"]))
    assert wit["m"] <= m_star
    assert wit["mass"] >= 0.5 ** wit["n_total"] - 1e-12


def test_reciprocal_minkowski_trend_toward_half():
    rep = orc.reciprocal_set_dims(100_000, [1e-2, 1e-3, 1e-4])
    values = [rep["minkowski_scale"][e] for e in (1e-2, 1e-3, 1e-4)]
    # approaches 1/2 from above as the scale shrinks
    assert values[0] > values[1] > values[2] > 0.5


def test_qbox_cover_exponent_matches_hand_value():
    spec = cp.carpet_from_tuples(3, 2, R_EXAMPLE)
    fam = orc.qbox_family(spec, 1, 2)
    assert orc.qbox_cover_exponent(fam) == pytest.approx(
        math.log(6) / math.log(3), abs=1e-9
    )


def test_uniform_relation_measure_is_uniform():
    rel = [(u, v) for u in range(3) for v in range(2)]
    spec = cp.carpet_from_tuples(3, 2, rel)
    table = wt.fiber_counts(spec.system, 1)
    z1 = math.fsum(t**spec.w for t in table.level(1).values())
    for t in table.level(1).values():
        assert t ** (spec.w - 1.0) / z1 == pytest.approx(1.0 / 6.0, abs=1e-12)


def test_square_base_qbox_fixes_all_layers():
    # a == b means w == 1: every layer fixes a full (u, v) word
    spec = cp.carpet_from_tuples(2, 2, [(0, 0), (1, 1), (0, 1)])
    fam = orc.qbox_family(spec, 2, 3)
    assert fam.floor_wm == 3
    assert fam.count == 9**3
    assert fam.separation_certified and fam.diam_certified
    rep = orc.verify_family_separation(fam, samples=300)
    assert rep["ok"]


def test_measure_cover_scale_precondition():
    witnesses = [orc.WitnessSet(diam=0.001, mass=1.0, covers=frozenset([0]))]
    with pytest.raises(HypothesisViolated):
        orc.measure_cover_upper(1, witnesses, eps=0.5, c=0.5, s=0.1)  # 6 eps^c >= 1
