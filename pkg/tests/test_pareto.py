import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rhomnk.errors import DimensionMismatch, PointBelowReference
from rhomnk.pareto import (
    dominates,
    hypervolume,
    hypervolume_mc,
    hypervolume_sliced,
    nondominated_filter,
)


def brute_filter(points):
    pts = {tuple(p) for p in np.asarray(points).tolist()}
    keep = []
    for p in pts:
        if not any(q != p and all(a >= b for a, b in zip(q, p)) for q in pts):
            keep.append(p)
    return sorted(keep)


def staircase_2d(points):
    front = sorted(brute_filter(points), reverse=True)  # x descending
    xs = [p[0] for p in front] + [0.0]
    return sum((xs[i] - xs[i + 1]) * front[i][1] for i in range(len(front)))


def inclusion_exclusion(points):
    pts = np.asarray(points)
    total = 0.0
    for r in range(1, len(pts) + 1):
        for subset in itertools.combinations(range(len(pts)), r):
            total += (-1) ** (r + 1) * np.prod(pts[list(subset)].min(axis=0))
    return total


unit_points = lambda m, max_size: arrays(  # noqa: E731
    np.float64,
    st.tuples(st.integers(1, max_size), st.just(m)),
    elements=st.floats(0.0, 1.0, allow_nan=False, exclude_max=True),
)


class TestDominance:
    def test_examples(self):
        assert dominates((0.6, 0.5), (0.5, 0.5))
        assert not dominates((0.5, 0.5), (0.5, 0.5))
        assert not dominates((0.6, 0.4), (0.5, 0.5))
        assert not dominates((0.5, 0.5), (0.6, 0.4))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            dominates((1, 2), (1, 2, 3))


class TestFilter:
    def test_dominated_point_removed(self):
        out = nondominated_filter([(0.2, 0.8), (0.8, 0.2), (0.15, 0.15)])
        assert sorted(map(tuple, out.tolist())) == [(0.2, 0.8), (0.8, 0.2)]

    def test_incomparable_middle_point_kept(self):
        # (0.3, 0.3) beats (0.2, 0.8) on the first objective and (0.8, 0.2) on the second
        out = nondominated_filter([(0.2, 0.8), (0.8, 0.2), (0.3, 0.3)])
        assert sorted(map(tuple, out.tolist())) == [(0.2, 0.8), (0.3, 0.3), (0.8, 0.2)]

    def test_singleton(self):
        np.testing.assert_array_equal(nondominated_filter([(0.1, 0.2, 0.3)]), [[0.1, 0.2, 0.3]])

    def test_duplicates_collapse(self):
        assert nondominated_filter([(0.5, 0.5), (0.5, 0.5)]).shape == (1, 2)

    def test_matches_brute_force(self):
        pts = np.random.default_rng(0).random((100, 3))
        assert sorted(map(tuple, nondominated_filter(pts).tolist())) == brute_filter(pts)

    def test_mixed_dimensions(self):
        with pytest.raises(ValueError):
            nondominated_filter([(0.1, 0.2), (0.1, 0.2, 0.3)])

    @given(unit_points(3, 30))
    def test_idempotent(self, pts):
        once = nondominated_filter(pts)
        np.testing.assert_array_equal(nondominated_filter(once), once)


class TestHypervolume:
    def test_single_box(self):
        assert hypervolume([(0.5, 0.5)], (0, 0)) == 0.25

    def test_two_boxes(self):
        assert hypervolume([(1, 0.5), (0.5, 1)], (0, 0)) == 0.75

    def test_empty(self):
        assert hypervolume([]) == 0.0

    def test_dominated_points_add_nothing(self):
        assert hypervolume([(0.5, 0.5), (0.4, 0.4), (0.5, 0.5)]) == 0.25

    def test_reference_shift(self):
        assert hypervolume([(1.5, 1.5)], (1.0, 1.0)) == 0.25

    def test_below_reference(self):
        with pytest.raises(PointBelowReference):
            hypervolume([(0.5, -0.1)], (0, 0))

    def test_reference_dimension(self):
        with pytest.raises(DimensionMismatch):
            hypervolume([(0.5, 0.1)], (0, 0, 0))

    def test_three_d_against_monte_carlo(self):
        pts = np.random.default_rng(42).random((5, 3))
        est, se = hypervolume_mc(pts, np.zeros(3), 1_000_000, np.random.default_rng(43))
        assert abs(hypervolume(pts) - est) <= 2.576 * se

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_against_inclusion_exclusion(self, m):
        rng = np.random.default_rng(m)
        for _ in range(20):
            pts = rng.random((int(rng.integers(1, 8)), m))
            assert hypervolume(pts) == pytest.approx(inclusion_exclusion(pts), abs=1e-12)

    def test_one_dimension(self):
        assert hypervolume([(0.3,), (0.7,)]) == 0.7

    @given(unit_points(2, 25))
    def test_closed_form_2d(self, pts):
        assert abs(hypervolume(pts) - staircase_2d(pts)) <= 1e-12
        assert abs(hypervolume_sliced(pts) - staircase_2d(pts)) <= 1e-12

    @given(unit_points(3, 12), st.randoms(use_true_random=False))
    def test_permutation_invariant(self, pts, rnd):
        order = list(range(len(pts)))
        rnd.shuffle(order)
        assert hypervolume(pts[order]) == hypervolume(pts)

    @given(unit_points(3, 10), arrays(np.float64, 3, elements=st.floats(0, 1, exclude_max=True)))
    def test_insertion_monotone(self, pts, p):
        assert hypervolume(np.vstack([pts, p])) >= hypervolume(pts)

    @pytest.mark.parametrize(
        "pts, p",
        [
            # zero-width and tiny boxes that only reorder the slab sums
            ([(0.5, 2**-23, 2**-23), (2**-23, 2**-23, 0.353572051)], (0.0, 0.25, 0.25)),
            ([(0.8125, 0.3008977, 0.84375)], (1.41240485e-223, 0.5, 0.25)),
            ([(0.3287355, 0.3287355, 0.3287355, 0.29176421)], (0.5, 5e-324, 0.25, 0.25)),
        ],
    )
    def test_insertion_monotone_degenerate(self, pts, p):
        assert hypervolume(pts + [p]) >= hypervolume(pts)

    def test_single_box_is_correctly_rounded(self):
        p = (0.8125, 0.3008977, 0.84375)
        assert hypervolume([p]) == float(
            Fraction(p[0]) * Fraction(p[1]) * Fraction(p[2])
        )

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_sweep_matches_full_recursion_exactly(self, m):
        rng = np.random.default_rng(m)
        for _ in range(200):
            pts = rng.random((int(rng.integers(1, 15)), m))
            if rng.random() < 0.5:
                pts = np.round(pts, 1)  # ties in every coordinate
            assert hypervolume(pts) == hypervolume_sliced(pts)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            hypervolume([(np.inf, 0.5)])
        with pytest.raises(ValueError):
            hypervolume([(np.nan, 0.5)])

    @settings(max_examples=200)
    @given(unit_points(3, 10), st.data())
    def test_dominance_preserving(self, pts, data):
        shrink = data.draw(arrays(np.float64, pts.shape, elements=st.floats(0, 1)))
        worse = pts * shrink
        assert hypervolume(pts) >= hypervolume(worse)


class TestMonteCarlo:
    def test_empty(self):
        assert hypervolume_mc([], None, 1000, 0) == (0.0, 0.0)

    def test_full_box(self):
        assert hypervolume_mc([(1.0, 1.0)], (0, 0), 5000, 0) == (1.0, 0.0)

    def test_quarter(self):
        est, se = hypervolume_mc([(0.5, 0.5)], (0, 0), 1_000_000, np.random.default_rng(7))
        # the bounding box equals the single box, so the estimate is exact here
        assert abs(est - 0.25) <= 3 * se + 1e-15

    def test_full_hit_rate_reproduces_exact_box(self):
        p = (0.060154367331235685 ** (1 / 3),) * 3
        est, se = hypervolume_mc([p, (0.1, 0.1, 0.1)], None, 1000, 0)
        assert se == 0.0
        assert est == hypervolume([p])

    def test_staircase_within_three_se(self):
        pts = [(1, 0.5), (0.5, 1)]
        est, se = hypervolume_mc(pts, (0, 0), 1_000_000, np.random.default_rng(8))
        assert se > 0
        assert abs(est - 0.75) <= 3 * se

    def test_below_reference(self):
        with pytest.raises(PointBelowReference):
            hypervolume_mc([(0.5, -0.1)], (0, 0), 10, 0)
