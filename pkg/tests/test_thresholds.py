import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from _oracles import best_contiguous_partition, sse
from gridwindows.errors import EmptyValues
from gridwindows.thresholds import ThresholdPair, derive_thresholds, kmeans_1d_exact


def test_three_tight_groups():
    values = [1, 1, 1, 5, 5, 5, 9, 9, 9]
    cost, cuts = best_contiguous_partition(values, 3)
    assert cuts == (3, 6) and cost == 0
    km = kmeans_1d_exact(values, 3)
    assert km.centroids == (1.0, 5.0, 9.0)
    assert not km.degenerate


def test_constant_is_degenerate():
    km = kmeans_1d_exact([7] * 10, 3)
    assert km.degenerate and km.centroids == (7.0,)


def test_two_points():
    km = kmeans_1d_exact([0, 10], 2)
    assert km.centroids == (0.0, 10.0) and km.cost == 0.0


def test_empty():
    with pytest.raises(EmptyValues):
        kmeans_1d_exact([], 3)


def test_labels_follow_input_order():
    km = kmeans_1d_exact([9, 1, 5, 1, 9, 5], 3)
    assert km.labels.tolist() == [2, 0, 1, 0, 2, 1]


def test_thresholds_from_groups():
    thr = derive_thresholds([1, 1, 1, 5, 5, 5, 9, 9, 9])
    assert (thr.green, thr.red) == (3.0, 7.0)


def test_thresholds_constant():
    thr = derive_thresholds([40] * 24)
    assert thr.green == thr.red == 40 and thr.degenerate


def test_thresholds_three_bands():
    values = [30] * 8 + [50] * 8 + [70] * 8
    _, cuts = best_contiguous_partition(values, 3)
    assert cuts == (8, 16)
    thr = derive_thresholds(values)
    assert (thr.green, thr.red) == (40.0, 60.0)


def test_two_levels_degenerate():
    thr = derive_thresholds([10] * 12 + [20] * 12)
    assert thr.degenerate and thr.green == thr.red == 15.0


def test_pair_rejects_inverted():
    with pytest.raises(ValueError):
        ThresholdPair(5.0, 4.0, (1.0, 2.0, 3.0))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=12), st.integers(1, 3))
def test_matches_exhaustive(values, k):
    assume(len(set(values)) >= k)
    km = kmeans_1d_exact(values, k)
    cost, cuts = best_contiguous_partition(values, k)
    assert abs(km.cost - cost) <= 1e-9 * max(1.0, cost)
    # hypothesis finds tied optima; any tied partition must cost the same
    v = sorted(values)
    sizes = np.bincount(km.labels, minlength=k)
    got = tuple(np.cumsum(sizes)[:-1])
    if got != cuts:
        bounds = (0, *got, len(v))
        alt = sum(sse(v[a:b]) for a, b in zip(bounds, bounds[1:]))
        assert abs(alt - cost) <= 1e-9 * max(1.0, cost)


trend = st.lists(st.floats(0, 1e4, allow_nan=False), min_size=24, max_size=24)


@settings(max_examples=200, deadline=None)
@given(trend)
def test_thresholds_within_range(values):
    thr = derive_thresholds(values)
    assert min(values) <= thr.green <= thr.red <= max(values)


@settings(max_examples=200, deadline=None)
@given(trend, st.floats(-1e4, 1e4, allow_nan=False))
def test_translation_equivariance(values, c):
    assume(len(set(values)) >= 3)
    a = derive_thresholds(values)
    b = derive_thresholds([v + c for v in values])
    tol = 1e-9 * (1.0 + max(abs(v) for v in values) + abs(c))
    assert b.green == pytest.approx(a.green + c, abs=tol)
    assert b.red == pytest.approx(a.red + c, abs=tol)


@settings(max_examples=200, deadline=None)
@given(trend, st.floats(1e-2, 1e2))
def test_scaling_equivariance(values, s):
    assume(len(set(values)) >= 3)
    a = derive_thresholds(values)
    b = derive_thresholds([v * s for v in values])
    tol = 1e-9 * (1.0 + max(abs(v) for v in values)) * s
    assert b.green == pytest.approx(a.green * s, abs=tol)
    assert b.red == pytest.approx(a.red * s, abs=tol)
