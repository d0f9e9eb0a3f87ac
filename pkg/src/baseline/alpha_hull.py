"""
Approximate alpha-convex hull, the comparison baseline for the biconvex hull estimator.

A point x is excluded from the hull of A iff some open ball of radius alpha containing x misses A, i.e. iff there is
a center c with |c - x| < alpha and d(c, A) >= alpha. The centers are searched on a grid; the test function d(c, A)
is 1-Lipschitz, so decisions are exact up to the grid pitch.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from geometry import Rect, as_points
from regions import AreaEstimate
from util.config import c
from util.errors import EmptySample, InvalidGeometry
from util.rng import MC_STREAM, generator

logger = logging.getLogger("ALPHA")

# radii stay strictly below alpha so every candidate ball contains x
RADIUS_SHRINK = 1 - 1e-6


@dataclass(frozen=True, eq=False)
class AlphaHullQuery:
    points: np.ndarray = field(repr=False)
    alpha: float = c.ALPHA
    center_grid: int = c.CENTER_GRID

    def __post_init__(self):
        pts = as_points(self.points).copy()
        if len(pts) == 0:
            raise EmptySample("the alpha hull needs at least one point")
        if not self.alpha > 0:
            raise InvalidGeometry("alpha must be positive")
        if self.center_grid < 64:
            raise InvalidGeometry("center_grid must be at least 64")
        pts.setflags(write=False)
        object.__setattr__(self, 'points', pts)

    @cached_property
    def tree(self):
        return cKDTree(self.points)

    @cached_property
    def bbox(self):
        return Rect.bounding(self.points)

    @cached_property
    def empty_centers(self):
        """ Lattice centers of the alpha-inflated bounding box whose open alpha ball misses every sample point """

        pitch = 2 * self.alpha / self.center_grid
        lattice = self.bbox.inflate(self.alpha + pitch).grid(pitch)
        dist, _ = self.tree.query(lattice)
        empty = lattice[dist >= self.alpha]
        logger.debug(f"alpha={self.alpha} lattice={len(lattice)} empty centers={len(empty)}")
        return empty

    @cached_property
    def empty_tree(self):
        return cKDTree(self.empty_centers) if len(self.empty_centers) else None


def _polar_offsets(alpha, center_grid):
    angle = 2 * np.pi * np.arange(center_grid) / center_grid
    radius = alpha * RADIUS_SHRINK * np.arange(1, center_grid + 1) / center_grid
    ring = np.column_stack([np.cos(angle), np.sin(angle)])
    offsets = (radius[:, None, None] * ring[None]).reshape(-1, 2)
    return np.vstack([[0.0, 0.0], offsets])


def alpha_contains(q: AlphaHullQuery, x):
    """ Membership of a single point, searching centers on a polar grid around x plus x itself """

    xp = as_points(x)[0]
    centers = xp + _polar_offsets(q.alpha, q.center_grid)
    dist, _ = q.tree.query(centers)
    return not bool(np.any(dist >= q.alpha))


def alpha_contains_many(q: AlphaHullQuery, xs):
    """
    Vectorised membership for many query points.

    The excluding centers come from a square lattice (pitch 2 alpha / center_grid) computed once per sample. Points
    outside the bounding box of the sample are excluded, the alpha hull being part of the convex hull.
    """

    arr = as_points(xs)
    member = q.bbox.contains(arr)
    if q.empty_tree is None or not member.any():
        return member
    dist, _ = q.empty_tree.query(arr[member])
    member[member] = dist >= q.alpha
    return member


def alpha_indicator_area(q: AlphaHullQuery, window: Rect, mc_n=c.MC_N, seed=0) -> AreaEstimate:
    """ Monte Carlo area of the alpha hull inside window """

    pts = window.sample(generator(seed, MC_STREAM), int(mc_n))
    hit = float(np.mean(alpha_contains_many(q, pts)))
    value = window.area * hit
    stderr = window.area * np.sqrt(hit * (1 - hit) / mc_n)
    return AreaEstimate(float(value), float(stderr), False)
