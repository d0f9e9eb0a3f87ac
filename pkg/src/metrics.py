"""
Distances between planar sets: Hausdorff distance and distance in measure.

Continuous sets are handled through MembershipFn, a predicate plus a window holding the set. Hausdorff distances
between continuous sets are discretized on a vertex grid of pitch h and reported with their error bound; distances
in measure are Monte Carlo integrals over a window and carry their standard error.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from baseline.alpha_hull import AlphaHullQuery, alpha_contains_many
from geometry import Rect, as_points
from hull import BiconvexHull, boundary, contains
from regions import Region
from util.config import c
from util.errors import EmptySet, InvalidGeometry
from util.rng import MC_STREAM, generator

logger = logging.getLogger("METRICS")

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class Estimate:
    """ A value with its error bound (grid discretization bound or Monte Carlo standard error) """
    value: float
    error: float


@dataclass(frozen=True, eq=False)
class MembershipFn:
    """
    Uniform view of a set: a vectorised predicate over (N, 2) arrays and a window containing the set.

    Finite point sets also carry their points, which the Hausdorff computations then use exactly.
    """
    predicate: Callable
    window: Rect
    points: Optional[np.ndarray] = field(default=None, repr=False)

    def __call__(self, pts):
        return np.asarray(self.predicate(as_points(pts)), dtype=bool)


def membership_of_region(r: Region, tol=c.TOLERANCE):
    return MembershipFn(lambda pts: r.contains(pts, tol), r.bbox())


def membership_of_hull(h: BiconvexHull, tol=c.TOLERANCE):
    window = Rect.bounding(np.vstack(boundary(h)))
    return MembershipFn(lambda pts: contains(h, pts, tol), window)


def membership_of_alpha(q: AlphaHullQuery):
    return MembershipFn(lambda pts: alpha_contains_many(q, pts), q.bbox)


def membership_of_points(points):
    """ A finite point set: zero measure, exact in Hausdorff distances """
    pts = as_points(points)
    if len(pts) == 0:
        raise EmptySet("empty point set")
    return MembershipFn(lambda x: np.zeros(len(x), dtype=bool), Rect.bounding(pts), points=pts)


def _directed(a, b_tree: cKDTree):
    dist, _ = b_tree.query(a)
    return float(dist.max())


def _symmetric(a, b):
    return max(_directed(a, cKDTree(b)), _directed(b, cKDTree(a)))


def hausdorff_points(a, b):
    """ Exact Hausdorff distance between two finite point sets by brute force """

    a, b = as_points(a), as_points(b)
    if len(a) == 0 or len(b) == 0:
        raise EmptySet("Hausdorff distance of an empty set")
    # row blocks bound the size of the distance matrix
    chunk = max(1, 4_000_000 // len(b))
    col_min = np.full(len(b), np.inf)
    row_max = 0.0
    for lo in range(0, len(a), chunk):
        d = cdist(a[lo:lo + chunk], b)
        row_max = max(row_max, float(d.min(axis=1).max()))
        col_min = np.minimum(col_min, d.min(axis=0))
    return max(row_max, float(col_min.max()))


def _discretize(f: MembershipFn, window: Rect, h):
    if f.points is not None:
        return f.points
    grid = window.grid(h)
    return grid[f(grid)]


def hausdorff_region_points(r: MembershipFn, pts, h=c.PITCH) -> Estimate:
    """ Discretized d_H(S, pts) for pts inside S: the largest distance from a grid point of S to pts """

    pts = as_points(pts)
    if len(pts) == 0:
        raise EmptySet("Hausdorff distance to an empty sample")
    grid = _discretize(r, r.window, h)
    if len(grid) == 0:
        raise EmptySet("the region holds no grid point")
    return Estimate(_directed(grid, cKDTree(pts)), h * SQRT2)


def hausdorff_memberships(f: MembershipFn, g: MembershipFn, h=c.PITCH) -> Estimate:
    """ Symmetric discretized Hausdorff distance; grid error 2 h sqrt(2), none for finite point sets """

    window = f.window.union(g.window)
    a, b = _discretize(f, window, h), _discretize(g, window, h)
    if len(a) == 0 or len(b) == 0:
        raise EmptySet("a set holds no grid point")
    error = sum(h * SQRT2 for m in (f, g) if m.points is None)
    return Estimate(_symmetric(a, b), error)


def _boundary_cells(f: MembershipFn, window: Rect, h):
    xs, ys = window.axes(h)
    gx, gy = np.meshgrid(xs, ys)
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    inside = f(grid).reshape(gx.shape)
    padded = np.pad(inside, 1, constant_values=False)
    interior = (padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:])
    edge = inside & ~interior
    return grid[edge.ravel()]


def hausdorff_boundaries(f: MembershipFn, g: MembershipFn, h=c.PITCH) -> Estimate:
    """ Discretized Hausdorff distance between the boundaries: grid points of a set with a 4-neighbour outside it """

    window = f.window.union(g.window).inflate(2 * h)
    a = f.points if f.points is not None else _boundary_cells(f, window, h)
    b = g.points if g.points is not None else _boundary_cells(g, window, h)
    if len(a) == 0 or len(b) == 0:
        raise EmptySet("a set has no boundary grid point")
    return Estimate(_symmetric(a, b), 2 * h * SQRT2)


def dmu_mc(f: MembershipFn, g: MembershipFn, window: Rect, mc_n=c.MC_N, seed=0) -> Estimate:
    """ Monte Carlo area of the symmetric difference inside window, with its standard error """

    if mc_n < 1000:
        raise InvalidGeometry("distance in measure needs at least 1000 Monte Carlo points")
    pts = window.sample(generator(seed, MC_STREAM), int(mc_n))
    p = float(np.mean(f(pts) ^ g(pts)))
    value = window.area * p
    error = window.area * np.sqrt(p * (1 - p) / mc_n)
    return Estimate(float(value), float(error))
