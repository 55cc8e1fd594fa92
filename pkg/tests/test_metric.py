import numpy as np
import pytest

from diskspanner.errors import UsageError
from diskspanner.metric import (
    DoublingEstimate,
    Metric,
    PivotSet,
    approx_equal,
    estimate_doubling_constant,
    metric_closure,
    nearest_pivot,
    validate_metric,
)


def test_approx_equal_scales_with_magnitude():
    assert approx_equal(1.0, 1.0)
    assert approx_equal(1.0, 1.0 + 5e-10)
    assert not approx_equal(1.0, 1.0 + 5e-9)
    assert approx_equal(1e12, 1e12 + 500.0)
    assert not approx_equal(1.0, 2.0)
    assert approx_equal(0.0, 0.0)


def test_euclidean_metric_distances():
    coords = np.array([[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]])
    m = Metric.euclidean(coords)
    assert m.n == 3
    assert m.dim == 2
    assert m.distance(0, 1) == pytest.approx(5.0)
    assert m.distance(0, 2) == pytest.approx(1.0)
    assert m.distance(1, 1) == 0.0
    d = m.distance_matrix()
    assert d.shape == (3, 3)
    assert np.array_equal(d, d.T)


def test_matrix_metric_roundtrip():
    dist = np.array([[0.0, 2.0], [2.0, 0.0]])
    m = Metric.from_matrix(dist)
    assert m.kind == "matrix"
    assert m.dim is None
    assert m.distance(0, 1) == 2.0


def test_metric_rejects_bad_shapes():
    with pytest.raises(UsageError):
        Metric.euclidean(np.array([1.0, 2.0]))
    with pytest.raises(UsageError):
        Metric.from_matrix(np.zeros((2, 3)))
    with pytest.raises(UsageError):
        Metric("weird")


def test_rescaled_is_exact_and_shares_raw_data():
    coords = np.array([[0.0], [1.0], [4.0]])
    m = Metric.euclidean(coords)
    m.distance_matrix()
    half = m.rescaled(0.5)
    assert half.distance(0, 2) == pytest.approx(2.0)
    assert half.scale == 0.5
    # raw data is shared, only the multiplier changes
    assert half.raw_matrix() is m.raw_matrix()
    back = half.rescaled(2.0)
    assert back.distance(0, 2) == m.distance(0, 2)


def test_point_range_checked():
    m = Metric.euclidean(np.zeros((2, 1)) + [[0.0], [1.0]])
    with pytest.raises(UsageError):
        m.distance(0, 2)
    with pytest.raises(UsageError):
        m.distance(-1, 0)


def test_validate_metric_accepts_two_point_space():
    rep = validate_metric(Metric.from_matrix(np.array([[0.0, 1.0], [1.0, 0.0]])))
    assert rep.passed
    assert rep.triangle_mode == "exhaustive"


def test_validate_metric_flags_asymmetry_and_diagonal():
    bad = Metric.from_matrix(np.array([[0.0, 1.0], [2.0, 0.0]]))
    rep = validate_metric(bad)
    assert not rep.symmetric
    assert not rep.passed

    diag = Metric.from_matrix(np.array([[1.0, 1.0], [1.0, 0.0]]))
    rep = validate_metric(diag)
    assert not rep.zero_diagonal


def test_validate_metric_finds_triangle_violation():
    # d(0,1) = 10 but the path through 2 costs 2
    spec = np.array([[0.0, 10.0, 1.0], [10.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    rep = validate_metric(Metric.from_matrix(spec))
    assert not rep.triangle_ok
    assert rep.violations
    i, j, k = rep.violations[0][:3]
    assert spec[i, k] > spec[i, j] + spec[j, k]


def test_validate_metric_sampled_mode_above_cap():
    rng = np.random.default_rng(7)
    coords = rng.random((40, 2))
    rep = validate_metric(Metric.euclidean(coords), triangle_cap=10, samples=500)
    assert rep.triangle_mode == "sampled"
    assert rep.triangle_checked == 500
    assert rep.passed


def test_metric_closure_repairs_triangle():
    spec = np.array([[0.0, 10.0, 1.0], [10.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    closed = metric_closure(spec)
    assert closed.distance(0, 1) == pytest.approx(2.0)
    assert closed.distance(0, 2) == pytest.approx(1.0)
    assert validate_metric(closed).passed


def test_metric_closure_is_idempotent():
    rng = np.random.default_rng(3)
    a = rng.uniform(1.0, 5.0, (6, 6))
    spec = (a + a.T) / 2.0
    np.fill_diagonal(spec, 0.0)
    once = metric_closure(spec)
    twice = metric_closure(once.distance_matrix())
    assert np.allclose(once.distance_matrix(), twice.distance_matrix())


def test_metric_closure_validates_spec():
    with pytest.raises(UsageError):
        metric_closure(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(UsageError):
        metric_closure(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    with pytest.raises(UsageError):
        metric_closure(np.array([[1.0]]))


def test_pivot_set_preserves_insertion_order():
    ps = PivotSet()
    for p in (5, 1, 3, 1, 5):
        ps.add(p)
    assert ps.members() == (5, 1, 3)
    assert 3 in ps
    assert 2 not in ps
    assert len(ps) == 3
    assert ps == PivotSet([1, 3, 5])


def test_nearest_pivot_empty_and_basic():
    m = Metric.euclidean(np.array([[0.0], [1.0], [10.0]]))
    assert nearest_pivot(m, 0, PivotSet()) == (None, float("inf"))
    p, d = nearest_pivot(m, 2, PivotSet([0, 1]))
    assert p == 1
    assert d == pytest.approx(9.0)


def test_nearest_pivot_tie_goes_to_smallest_id():
    # point 2 sits exactly between pivots 0 and 1
    m = Metric.euclidean(np.array([[0.0], [2.0], [1.0]]))
    p, d = nearest_pivot(m, 2, PivotSet([1, 0]))
    assert p == 0
    assert d == pytest.approx(1.0)


def test_doubling_single_point_ball():
    m = Metric.euclidean(np.array([[0.0], [100.0]]))
    est = estimate_doubling_constant(m, 0, 1.0)
    assert est.ball_size == 1
    assert est.cover_count == 1
    assert est.centers == (0,)


def test_doubling_two_far_points_need_two_centers():
    # both inside the ball, farther than radius/2 apart
    m = Metric.euclidean(np.array([[0.0], [0.9]]))
    est = estimate_doubling_constant(m, 0, 1.0)
    assert est.ball_size == 2
    assert est.cover_count == 2


def test_doubling_first_center_is_smallest_id():
    m = Metric.euclidean(np.array([[0.0], [0.1], [0.2]]))
    est = estimate_doubling_constant(m, 1, 1.0)
    assert est.centers[0] == 0


def test_doubling_line_grows_linearly_with_radius_not_points():
    # unit-spaced line: cover count tracks radius scale, not ball size
    coords = np.arange(32, dtype=float).reshape(-1, 1)
    m = Metric.euclidean(coords)
    small = estimate_doubling_constant(m, 16, 4.0)
    large = estimate_doubling_constant(m, 16, 8.0)
    assert small.ball_size < large.ball_size
    assert large.cover_count <= 2 * small.cover_count + 1


def test_doubling_rejects_bad_radius():
    m = Metric.euclidean(np.array([[0.0]]))
    with pytest.raises(UsageError):
        estimate_doubling_constant(m, 0, 0.0)
    with pytest.raises(UsageError):
        estimate_doubling_constant(m, 0, float("inf"))
