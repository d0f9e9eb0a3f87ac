"""
Exact theta-biconvex hull of a finite planar point set.

A point x belongs to the hull iff, for each of the four quadrant orientations, some sample point closed-dominates x
in frame coordinates. Each orientation is encoded by a staircase (StepEnvelope) built from Pareto maxima, and the
hull is stored as closed vertical columns at the distinct frame abscissas plus open slabs between them.
"""
import logging
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property

import numpy as np

from geometry import Frame, as_points, into_frame, out_of_frame
from util.config import c
from util.errors import EmptySample

logger = logging.getLogger("HULL")


class Orientation(IntEnum):
    """ In-frame quadrant directions, index i matching the cone of axis R^i(xi) """
    NE = 0
    NW = 1
    SW = 2
    SE = 3

    @property
    def signs(self):
        return {Orientation.NE: (1.0, 1.0), Orientation.NW: (-1.0, 1.0),
                Orientation.SW: (-1.0, -1.0), Orientation.SE: (1.0, -1.0)}[self]

    @property
    def kind(self):
        return 'upper' if self in (Orientation.NE, Orientation.NW) else 'lower'

    @property
    def right_closed(self):
        """ NE and SE staircases are constant on (x_j, x_j+1], NW and SW on [x_j, x_j+1) """
        return self.signs[0] > 0


@dataclass(frozen=True, eq=False)
class StepEnvelope:
    """
    Monotone staircase of one orientation in frame coordinates.

    values[j] holds on the half-open interval between breakpoints[j] and breakpoints[j+1] (closed on the right for
    NE/SE, on the left for NW/SW); edge_value is the value at the remaining closed end of the domain. A single
    breakpoint means a degenerate domain with edge_value as its only value.
    """
    orientation: Orientation
    breakpoints: np.ndarray
    values: np.ndarray
    edge_value: float
    vertices: np.ndarray = field(repr=False)

    @property
    def kind(self):
        return self.orientation.kind

    def evaluate(self, x):
        """ Staircase value at frame abscissa x; nan outside [breakpoints[0], breakpoints[-1]] """

        xq = np.atleast_1d(np.asarray(x, dtype=float))
        bp, k = self.breakpoints, len(self.breakpoints) - 1
        out = np.full(xq.shape, np.nan)
        inside = (xq >= bp[0]) & (xq <= bp[-1])
        if self.orientation.right_closed:
            idx = np.searchsorted(bp, xq, side='left')
            edge = inside & (idx == 0)
        else:
            idx = np.searchsorted(bp, xq, side='right')
            edge = inside & (idx == k + 1)
        out[edge] = self.edge_value
        interior = inside & ~edge
        out[interior] = self.values[idx[interior] - 1]
        return out if np.ndim(x) else float(out[0])


@dataclass(frozen=True)
class Slab:
    x_lo: float
    x_hi: float
    lower: float
    upper: float

    @property
    def area(self):
        return (self.x_hi - self.x_lo) * max(0.0, self.upper - self.lower)


def _group_extrema(q):
    """ Distinct first coordinates (sorted) with the max and min second coordinate of each group """

    # stable (x, then y) order keeps every derived array deterministic
    order = np.lexsort((q[:, 1], q[:, 0]))
    q = q[order]
    xs, start, inverse = np.unique(q[:, 0], return_index=True, return_inverse=True)
    gmax = np.maximum.reduceat(q[:, 1], start)
    gmin = np.minimum.reduceat(q[:, 1], start)
    group = np.empty(len(q), dtype=int)
    group[order] = inverse.ravel()
    return xs, gmax, gmin, group


def _weak_maxima_mask(points_in_frame, o: Orientation):
    """ Points whose open quadrant of orientation o holds no other point """

    q = points_in_frame * np.array(o.signs)
    xs, gmax, _, group = _group_extrema(q)
    # max of the second coordinate over all strictly larger first coordinates
    strict_next = np.append(np.maximum.accumulate(gmax[::-1])[::-1][1:], -np.inf)
    return q[:, 1] >= strict_next[group]


def pareto_staircase(points_in_frame, o: Orientation) -> StepEnvelope:
    """
    Staircase of the closed-dominance extremum in orientation o.

    In the sign-flipped coordinates q = (s1 a1, s2 a2) every orientation becomes NE, u(t) = max{q2 : q1 >= t}, and
    the staircase corners are the points strictly above everything to their right. The result is mapped back so that
    breakpoints increase in frame coordinates.
    """

    pts = as_points(points_in_frame)
    if len(pts) == 0:
        raise EmptySample("a staircase needs at least one point")
    s1, s2 = o.signs
    q = pts * np.array([s1, s2])
    xs, gmax, _, _ = _group_extrema(q)
    following = np.append(np.maximum.accumulate(gmax[::-1])[::-1][1:], -np.inf)
    corner = gmax > following
    cx, cy = xs[corner], gmax[corner]

    if cx[0] == xs[0]:
        bq, vq = cx, cy[1:]
    else:
        bq, vq = np.concatenate([[xs[0]], cx]), cy
    edge = s2 * cy[0]

    if s1 > 0:
        breakpoints, values = bq, s2 * vq
    else:
        breakpoints, values = -bq[::-1], s2 * vq[::-1]

    weak = pts[_weak_maxima_mask(pts, o)]
    weak = weak[np.lexsort((weak[:, 1], weak[:, 0]))]
    for arr in (breakpoints, values, weak):
        arr.setflags(write=False)
    return StepEnvelope(orientation=o, breakpoints=breakpoints, values=values, edge_value=float(edge), vertices=weak)


@dataclass(frozen=True, eq=False)
class BiconvexHull:
    """
    The theta-biconvex hull as closed columns at the distinct frame abscissas xs plus open slabs between them.

    Column j is the vertical segment [column_lower[j], column_upper[j]] at xs[j]; slab j covers the open strip
    xs[j] < x < xs[j+1] between slab_lower[j] and slab_upper[j] and is empty when upper < lower.
    """
    frame: Frame
    points: np.ndarray = field(repr=False)
    points_in_frame: np.ndarray = field(repr=False)
    envelopes: dict = field(repr=False)
    xs: np.ndarray = field(repr=False)
    column_lower: np.ndarray = field(repr=False)
    column_upper: np.ndarray = field(repr=False)
    slab_lower: np.ndarray = field(repr=False)
    slab_upper: np.ndarray = field(repr=False)
    extremal_mask: np.ndarray = field(repr=False)

    @property
    def theta(self):
        return self.frame.theta

    @property
    def slabs(self):
        return [Slab(float(self.xs[j]), float(self.xs[j + 1]), float(self.slab_lower[j]), float(self.slab_upper[j]))
                for j in range(len(self.xs) - 1)]

    @cached_property
    def area(self):
        widths = np.diff(self.xs)
        return float(np.sum(widths * np.maximum(0.0, self.slab_upper - self.slab_lower)))


def build_hull(points, theta) -> BiconvexHull:
    """ Builds the theta-biconvex hull of a finite point set (theta reduced modulo pi/2) """

    pts = as_points(points)
    if len(pts) == 0:
        raise EmptySample("the biconvex hull needs at least one point")
    frame = Frame.at(theta)
    fp = into_frame(pts, frame)
    fp = fp.reshape(-1, 2)

    envelopes = {o: pareto_staircase(fp, o) for o in Orientation}
    ne, nw = envelopes[Orientation.NE], envelopes[Orientation.NW]
    sw, se = envelopes[Orientation.SW], envelopes[Orientation.SE]

    xs = np.unique(fp[:, 0])
    column_upper = np.minimum(ne.evaluate(xs), nw.evaluate(xs))
    column_lower = np.maximum(sw.evaluate(xs), se.evaluate(xs))
    # on an open strip the right-closed staircases take their value at the right end, the left-closed at the left end
    slab_upper = np.minimum(ne.evaluate(xs[1:]), nw.evaluate(xs[:-1]))
    slab_lower = np.maximum(sw.evaluate(xs[:-1]), se.evaluate(xs[1:]))

    extremal = np.zeros(len(fp), dtype=bool)
    for o in Orientation:
        extremal |= _weak_maxima_mask(fp, o)

    for arr in (pts, fp, xs, column_lower, column_upper, slab_lower, slab_upper, extremal):
        arr.setflags(write=False)
    hull = BiconvexHull(frame=frame, points=pts, points_in_frame=fp, envelopes=envelopes, xs=xs,
                        column_lower=column_lower, column_upper=column_upper,
                        slab_lower=slab_lower, slab_upper=slab_upper, extremal_mask=extremal)
    logger.debug(f"hull theta={frame.theta:.6f} n={len(pts)} columns={len(xs)} area={hull.area:.6f}")
    return hull


def contains(h: BiconvexHull, p, tol=c.TOLERANCE):
    """ Closed membership with boundary tolerance tol in frame coordinates; vectorised over (N, 2) inputs """

    q = into_frame(as_points(p), h.frame).reshape(-1, 2)
    x, y = q[:, 0], q[:, 1]
    xs, k = h.xs, len(h.xs) - 1

    # strip j lies between xs[j-1] and xs[j]
    j = np.searchsorted(xs, x, side='right')
    member = np.zeros(len(q), dtype=bool)

    in_slab = (j >= 1) & (j <= k)
    s = np.clip(j - 1, 0, max(k - 1, 0))
    if k > 0:
        member |= in_slab & (y >= h.slab_lower[s] - tol) & (y <= h.slab_upper[s] + tol)

    # the closed columns on either side, reached within tol
    for col in (j - 1, j):
        valid = (col >= 0) & (col <= k)
        cc = np.clip(col, 0, k)
        near = valid & (np.abs(x - xs[cc]) <= tol)
        member |= near & (y >= h.column_lower[cc] - tol) & (y <= h.column_upper[cc] + tol)

    if np.asarray(p).ndim == 1:
        return bool(member[0])
    return member


def area(h: BiconvexHull):
    return h.area


def _simplify(chain, closed, eps=1e-12):
    """ Drops repeated vertices and vertices lying between their axis aligned neighbours """

    pts = [tuple(v) for v in chain]
    deduped = []
    for v in pts:
        if not deduped or abs(v[0] - deduped[-1][0]) > eps or abs(v[1] - deduped[-1][1]) > eps:
            deduped.append(v)
    if closed and len(deduped) > 1 and np.allclose(deduped[0], deduped[-1], rtol=0, atol=eps):
        deduped.pop()

    def between(a, b, m):
        if abs(a[0] - m[0]) <= eps and abs(b[0] - m[0]) <= eps:
            return min(a[1], b[1]) - eps <= m[1] <= max(a[1], b[1]) + eps
        if abs(a[1] - m[1]) <= eps and abs(b[1] - m[1]) <= eps:
            return min(a[0], b[0]) - eps <= m[0] <= max(a[0], b[0]) + eps
        return False

    changed = True
    while changed and len(deduped) > 2:
        changed = False
        n = len(deduped)
        rng = range(n) if closed else range(1, n - 1)
        for i in rng:
            a, m, b = deduped[i - 1], deduped[i], deduped[(i + 1) % n]
            if between(a, b, m):
                del deduped[i]
                changed = True
                break
    return deduped


def boundary(h: BiconvexHull, tol=c.TOLERANCE):
    """
    Boundary polylines in world coordinates.

    One closed polyline (first vertex repeated at the end) per connected component of positive area, one open
    polyline per degenerate component (segments and single points).
    """

    xs, k = h.xs, len(h.xs) - 1
    connected = h.slab_upper >= h.slab_lower - tol
    runs, start = [], 0
    for j in range(k):
        if not connected[j]:
            runs.append((start, j))
            start = j + 1
    runs.append((start, k))

    polylines = []
    for j0, j1 in runs:
        upper, lower = [], []
        for j in range(j0, j1 + 1):
            if j > j0:
                upper.append((xs[j], h.slab_upper[j - 1]))
                lower.append((xs[j], h.slab_lower[j - 1]))
            upper.append((xs[j], h.column_upper[j]))
            lower.append((xs[j], h.column_lower[j]))
            if j < j1:
                upper.append((xs[j], h.slab_upper[j]))
                lower.append((xs[j], h.slab_lower[j]))

        heights = h.slab_upper[j0:j1] - h.slab_lower[j0:j1]
        if j1 > j0 and np.any(heights > tol):
            loop = _simplify(upper + lower[::-1], closed=True)
            loop.append(loop[0])
            polylines.append(out_of_frame(np.array(loop), h.frame).reshape(-1, 2))
        else:
            up, low = _simplify(upper, closed=False), _simplify(lower, closed=False)
            if len(up) == len(low) and np.allclose(up, low, rtol=0, atol=tol):
                line = up
            else:
                line = _simplify(up + low[::-1], closed=False)
            polylines.append(out_of_frame(np.array(line), h.frame).reshape(-1, 2))
    return polylines


def extremal_points(h: BiconvexHull):
    """ Sample points with at least one empty open quadrant; the complement is the inner subsample """
    return h.points[h.extremal_mask]


def hull_to_json(h: BiconvexHull):
    return {'theta': h.theta,
            'area': h.area,
            'slabs': [{'x_lo': s.x_lo, 'x_hi': s.x_hi, 'lower': s.lower, 'upper': s.upper} for s in h.slabs],
            'boundary': [line.tolist() for line in boundary(h)],
            'extremal': np.flatnonzero(h.extremal_mask).tolist(),
            'points': h.points.tolist()}


def hull_from_json(data):
    """ Rebuilds a hull from its JSON form; the stored sample makes the rebuild exact """
    return build_hull(np.asarray(data['points'], dtype=float), data['theta'])
