import numpy as np
import pytest

from baseline.alpha_hull import AlphaHullQuery, alpha_contains, alpha_contains_many, alpha_indicator_area
from geometry import Rect
from util.errors import EmptySample, InvalidGeometry

UNIT = Rect(0.0, 0.0, 1.0, 1.0)
DENSE_GRID = np.array([[x, y] for x in np.linspace(0, 1, 30) for y in np.linspace(0, 1, 30)])


def test_sample_points_are_members():
    rng = np.random.default_rng(2)
    pts = rng.uniform(0, 1, size=(60, 2))
    q = AlphaHullQuery(pts, alpha=0.2)
    assert all(alpha_contains(q, p) for p in pts[:10])
    assert alpha_contains_many(q, pts).all()


def test_far_points_are_excluded():
    q = AlphaHullQuery(np.array([[0.0, 0.0], [1.0, 0.0]]), alpha=0.3)
    assert not alpha_contains(q, (0.5, 0.5))
    assert not alpha_contains_many(q, [[0.5, 0.5]])[0]


def test_line_of_points_keeps_its_midpoint():
    line = np.array([[k / 100, 0.0] for k in range(101)])
    q = AlphaHullQuery(line, alpha=0.5)
    assert alpha_contains(q, (0.5, 0.0))
    assert not alpha_contains(q, (0.5, 0.2))


def test_points_outside_the_bounding_box_are_excluded():
    q = AlphaHullQuery(DENSE_GRID, alpha=0.5)
    assert not alpha_contains_many(q, [[1.01, 0.5], [-0.2, 0.5]]).any()


def test_dense_grid_fills_the_square():
    q = AlphaHullQuery(DENSE_GRID, alpha=0.5)
    est = alpha_indicator_area(q, UNIT, mc_n=20_000, seed=0)
    assert est.value == pytest.approx(1.0, abs=0.01)


def test_two_distant_points_have_no_area():
    q = AlphaHullQuery(np.array([[0.0, 0.0], [1.0, 1.0]]), alpha=0.05)
    assert alpha_indicator_area(q, UNIT, mc_n=20_000, seed=0).value < 0.01


def test_area_is_deterministic():
    rng = np.random.default_rng(8)
    q = AlphaHullQuery(rng.uniform(0, 1, size=(200, 2)), alpha=1 / 3)
    a = alpha_indicator_area(q, UNIT, mc_n=5000, seed=4)
    b = alpha_indicator_area(q, UNIT, mc_n=5000, seed=4)
    assert a == b


def test_lattice_and_polar_search_agree_away_from_the_boundary():
    rng = np.random.default_rng(1)
    pts = rng.uniform(0, 1, size=(150, 2))
    q = AlphaHullQuery(pts, alpha=0.25)
    # deep inside a dense sample both searches keep the point, far from it both drop it
    assert alpha_contains(q, (0.5, 0.5)) and alpha_contains_many(q, [[0.5, 0.5]])[0]
    assert not alpha_contains(q, (2.0, 2.0)) and not alpha_contains_many(q, [[2.0, 2.0]])[0]


def test_invalid_queries():
    with pytest.raises(EmptySample):
        AlphaHullQuery(np.empty((0, 2)))
    with pytest.raises(InvalidGeometry):
        AlphaHullQuery(DENSE_GRID, alpha=0.0)
    with pytest.raises(InvalidGeometry):
        AlphaHullQuery(DENSE_GRID, alpha=0.5, center_grid=32)


def test_finer_center_grid_never_readmits_a_point():
    rng = np.random.default_rng(6)
    pts = rng.uniform(0, 1, size=(80, 2))
    queries = rng.uniform(-0.1, 1.1, size=(300, 2))
    coarse, fine = AlphaHullQuery(pts, alpha=0.2, center_grid=64), AlphaHullQuery(pts, alpha=0.2, center_grid=128)
    # the doubled polar grid holds every center of the coarse one
    for x in queries:
        if not alpha_contains(coarse, x):
            assert not alpha_contains(fine, x)
