import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hull import (Orientation, area, boundary, build_hull, contains, extremal_points, hull_from_json, hull_to_json,
                  pareto_staircase)
from util.errors import EmptySample

CORNERS = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
DIAGONAL = np.array([[0, 0], [1, 1]], dtype=float)
L_SHAPE = np.array([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]], dtype=float)
GRID_3X3 = np.array([[x, y] for x in range(3) for y in range(3)], dtype=float)

point_sets = arrays(np.float64, st.tuples(st.integers(1, 30), st.just(2)),
                    elements=st.floats(-1, 1, allow_nan=False, width=32))
angles = st.floats(min_value=0, max_value=np.pi / 2, exclude_max=True)


def test_staircase_three_points():
    env = pareto_staircase(np.array([[0, 0], [1, 1], [2, 0.5]]), Orientation.NE)
    assert env.breakpoints.tolist() == [0.0, 1.0, 2.0]
    assert env.evaluate(0.0) == 1.0
    assert env.evaluate(0.5) == 1.0
    assert env.evaluate(1.0) == 1.0
    assert env.evaluate(1.5) == 0.5
    assert env.evaluate(2.0) == 0.5
    assert np.isnan(env.evaluate(2.5))
    assert env.vertices.tolist() == [[1.0, 1.0], [2.0, 0.5]]


def test_staircase_single_point():
    for o in Orientation:
        env = pareto_staircase(np.array([[3.0, 4.0]]), o)
        assert env.breakpoints.tolist() == [3.0]
        assert env.evaluate(3.0) == 4.0
        assert np.isnan(env.evaluate(3.5))


def test_staircase_rect_corners():
    env = pareto_staircase(CORNERS, Orientation.NE)
    assert np.all(env.evaluate(np.linspace(0, 1, 11)) == 1.0)
    nw = pareto_staircase(CORNERS, Orientation.NW)
    assert np.all(nw.evaluate(np.linspace(0, 1, 11)) == 1.0)
    sw = pareto_staircase(CORNERS, Orientation.SW)
    assert np.all(sw.evaluate(np.linspace(0, 1, 11)) == 0.0)


def test_staircase_empty_input():
    with pytest.raises(EmptySample):
        pareto_staircase(np.empty((0, 2)), Orientation.NE)


@settings(deadline=None, max_examples=100)
@given(point_sets)
def test_staircase_monotonicity_and_values(pts):
    for o in Orientation:
        env = pareto_staircase(pts, o)
        assert np.all(np.diff(env.breakpoints) > 0)
        values = np.append(env.values, env.edge_value)
        assert np.all(np.isin(values, pts[:, 1]))
        full = env.evaluate(env.breakpoints)
        steps = np.diff(full)
        if o in (Orientation.NE, Orientation.SW):
            assert np.all(steps <= 0)
        else:
            assert np.all(steps >= 0)


def test_staircase_matches_definition():
    rng = np.random.default_rng(7)
    pts = rng.uniform(-1, 1, size=(40, 2))
    xs = np.sort(rng.uniform(pts[:, 0].min(), pts[:, 0].max(), 200))
    ne = pareto_staircase(pts, Orientation.NE).evaluate(xs)
    nw = pareto_staircase(pts, Orientation.NW).evaluate(xs)
    sw = pareto_staircase(pts, Orientation.SW).evaluate(xs)
    se = pareto_staircase(pts, Orientation.SE).evaluate(xs)
    for i, x in enumerate(xs):
        assert ne[i] == pts[pts[:, 0] >= x, 1].max()
        assert nw[i] == pts[pts[:, 0] <= x, 1].max()
        assert sw[i] == pts[pts[:, 0] <= x, 1].min()
        assert se[i] == pts[pts[:, 0] >= x, 1].min()


def test_rect_corner_hull():
    h = build_hull(CORNERS, 0.0)
    assert area(h) == pytest.approx(1.0, abs=1e-12)
    assert contains(h, (0.5, 0.5))
    assert not contains(h, (1.5, 0.5))
    assert [(s.x_lo, s.x_hi, s.lower, s.upper) for s in h.slabs] == [(0.0, 1.0, 0.0, 1.0)]


def test_diagonal_hull_axis_aligned():
    h = build_hull(DIAGONAL, 0.0)
    assert area(h) == 0.0
    assert not contains(h, (0.5, 0.5))
    assert contains(h, (0.0, 0.0)) and contains(h, (1.0, 1.0))


def test_diagonal_hull_at_quarter_pi_is_a_segment():
    h = build_hull(DIAGONAL, np.pi / 4)
    assert area(h) == 0.0
    assert contains(h, (0.5, 0.5))
    assert not contains(h, (0.5, 0.6))
    lines = boundary(h)
    assert len(lines) == 1
    assert len(lines[0]) == 2
    assert np.allclose(sorted(map(tuple, lines[0])), [(0.0, 0.0), (1.0, 1.0)], atol=1e-12)


def test_l_shape_area():
    h = build_hull(L_SHAPE, 0.0)
    assert area(h) == pytest.approx(3.0, abs=1e-12)
    assert not contains(h, (1.5, 1.5))
    assert contains(h, (0.5, 1.5))


def test_empty_input_raises():
    with pytest.raises(EmptySample):
        build_hull(np.empty((0, 2)), 0.0)


def test_single_point_hull():
    h = build_hull([[0.3, 0.4]], 0.2)
    assert area(h) == 0.0
    assert contains(h, (0.3, 0.4))
    lines = boundary(h)
    assert len(lines) == 1 and len(lines[0]) == 1
    assert np.allclose(lines[0][0], [0.3, 0.4])
    assert extremal_points(h).tolist() == [[0.3, 0.4]]


def test_rect_boundary_is_one_closed_loop():
    lines = boundary(build_hull(CORNERS, 0.0))
    assert len(lines) == 1
    loop = lines[0]
    assert np.array_equal(loop[0], loop[-1])
    assert sorted(map(tuple, loop[:-1])) == [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]


def test_disconnected_hull_has_two_components():
    pts = np.array([[0, 0], [1, 0], [0, 1], [1, 1], [3, 3], [4, 3], [3, 4], [4, 4]], dtype=float)
    h = build_hull(pts, 0.0)
    assert area(h) == pytest.approx(2.0)
    closed = [line for line in boundary(h) if len(line) > 2 and np.array_equal(line[0], line[-1])]
    assert len(closed) == 2


def test_extremal_points_examples():
    assert len(extremal_points(build_hull(CORNERS, 0.0))) == 4
    h = build_hull(GRID_3X3, 0.0)
    ext = extremal_points(h)
    assert len(ext) == 8
    assert [1.0, 1.0] not in ext.tolist()
    assert h.points[~h.extremal_mask].tolist() == [[1.0, 1.0]]


@settings(deadline=None, max_examples=100)
@given(point_sets, angles)
def test_sample_points_are_members(pts, theta):
    h = build_hull(pts, theta)
    assert contains(h, pts).all()
    assert h.area >= 0
    assert h.area == pytest.approx(sum(s.area for s in h.slabs))


@settings(deadline=None, max_examples=50)
@given(point_sets, angles)
def test_period_of_a_quarter_turn(pts, theta):
    rng = np.random.default_rng(0)
    queries = rng.uniform(-1.2, 1.2, size=(300, 2))
    a, b = build_hull(pts, theta), build_hull(pts, theta + np.pi / 2)
    assert a.theta == pytest.approx(b.theta, abs=1e-12)
    assert a.area == pytest.approx(b.area, abs=1e-9)
    assert np.array_equal(contains(a, queries), contains(b, queries))


def test_idempotent_under_interior_points():
    rng = np.random.default_rng(5)
    pts = rng.uniform(0, 1, size=(30, 2))
    h = build_hull(pts, 0.3)
    grid = np.array([[x, y] for x in np.linspace(0, 1, 50) for y in np.linspace(0, 1, 50)])
    inside = grid[contains(h, grid)]
    p = inside[len(inside) // 2]
    augmented = build_hull(np.vstack([pts, p]), 0.3)
    assert np.array_equal(contains(h, grid), contains(augmented, grid))


def test_json_round_trip_rebuilds_the_hull():
    h = build_hull(L_SHAPE, 0.1)
    data = hull_to_json(h)
    assert set(data) >= {'theta', 'area', 'slabs', 'boundary', 'extremal', 'points'}
    again = hull_from_json(data)
    assert again.area == h.area
    assert np.array_equal(again.slab_upper, h.slab_upper)
