from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from matplotlib.path import Path

from util.config import c
from util.errors import InvalidGeometry

HALF_PI = np.pi / 2


class Point2(NamedTuple):
    """ A planar point, usable wherever an array of shape (2,) is expected """
    x: float
    y: float


def as_points(pts):
    """ Converts a point, a sequence of points or an array to a float array of shape (N, 2) """

    arr = np.asarray(pts, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidGeometry(f"expected points of shape (N, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidGeometry("point coordinates must be finite")
    return arr


def _single_or_many(pts, result):
    """ Returns a Point2 for a single point input and the array otherwise """
    arr = np.asarray(pts)
    if arr.ndim == 1:
        return Point2(float(result[0, 0]), float(result[0, 1]))
    return result


def reduce_angle(theta):
    """ Reduces theta to [0, pi/2), the period of the biconvex hull """
    reduced = float(np.mod(theta, HALF_PI))
    return 0.0 if reduced >= HALF_PI else reduced


@dataclass(frozen=True)
class Frame:
    """
    Rotation mapping the canonical axes to the biconvexity axes.

    b1 is e1 rotated counter-clockwise by theta and b2 is b1 rotated by a further pi/2.
    Use Frame.at() to get the frame with theta reduced to [0, pi/2); the constructor keeps the raw angle.
    """
    theta: float
    b1: np.ndarray = field(init=False, repr=False, compare=False)
    b2: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not np.isfinite(self.theta):
            raise InvalidGeometry("theta must be finite")
        cos, sin = np.cos(self.theta), np.sin(self.theta)
        # exact axes at theta = 0 keep axis aligned inputs exact
        if self.theta == 0:
            cos, sin = 1.0, 0.0
        object.__setattr__(self, 'b1', np.array([cos, sin]))
        object.__setattr__(self, 'b2', np.array([-sin, cos]))

    @classmethod
    def at(cls, theta):
        return cls(reduce_angle(theta))

    @property
    def axis(self):
        """ The cone axis xi = (b1 + b2) / |b1 + b2| """
        xi = self.b1 + self.b2
        return xi / np.linalg.norm(xi)

    @property
    def matrix(self):
        """ Rows b1, b2: multiplying a column vector gives frame coordinates """
        return np.vstack([self.b1, self.b2])


def into_frame(p, f: Frame):
    """ World coordinates to (<p, b1>, <p, b2>) """
    arr = as_points(p)
    return _single_or_many(p, arr @ f.matrix.T)


def out_of_frame(p, f: Frame):
    """ Frame coordinates back to world coordinates, the inverse of into_frame """
    arr = as_points(p)
    return _single_or_many(p, arr @ f.matrix)


@dataclass(frozen=True)
class Rect:
    """ Axis aligned window in world coordinates """
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin <= self.xmax and self.ymin <= self.ymax):
            raise InvalidGeometry(f"empty rectangle {self}")

    @classmethod
    def bounding(cls, pts):
        arr = as_points(pts)
        if len(arr) == 0:
            raise InvalidGeometry("bounding box of no points")
        lo, hi = arr.min(axis=0), arr.max(axis=0)
        return cls(float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    @property
    def width(self):
        return self.xmax - self.xmin

    @property
    def height(self):
        return self.ymax - self.ymin

    @property
    def area(self):
        return self.width * self.height

    def inflate(self, d):
        return Rect(self.xmin - d, self.ymin - d, self.xmax + d, self.ymax + d)

    def union(self, other):
        return Rect(min(self.xmin, other.xmin), min(self.ymin, other.ymin),
                    max(self.xmax, other.xmax), max(self.ymax, other.ymax))

    def contains(self, pts, tol=0.0):
        arr = as_points(pts)
        return ((arr[:, 0] >= self.xmin - tol) & (arr[:, 0] <= self.xmax + tol)
                & (arr[:, 1] >= self.ymin - tol) & (arr[:, 1] <= self.ymax + tol))

    def axes(self, h, centered=False):
        """
        Grid coordinates along both axes with pitch (close to) h.

        The vertex grid includes both window edges; the centered grid holds the midpoints of the cells.
        """
        if h <= 0:
            raise InvalidGeometry("grid pitch must be positive")
        nx = max(int(round(self.width / h)), 1)
        ny = max(int(round(self.height / h)), 1)
        if centered:
            xs = self.xmin + (np.arange(nx) + 0.5) * (self.width / nx)
            ys = self.ymin + (np.arange(ny) + 0.5) * (self.height / ny)
        else:
            xs = np.linspace(self.xmin, self.xmax, nx + 1)
            ys = np.linspace(self.ymin, self.ymax, ny + 1)
        return xs, ys

    def grid(self, h, centered=False):
        """ Grid points as an (N, 2) array in row-major order (y outer, x inner) """
        xs, ys = self.axes(h, centered=centered)
        gx, gy = np.meshgrid(xs, ys)
        return np.column_stack([gx.ravel(), gy.ravel()])

    def sample(self, rng, n):
        """ n uniform points in the window drawn from a numpy Generator """
        u = rng.random((n, 2))
        return np.column_stack([self.xmin + u[:, 0] * self.width, self.ymin + u[:, 1] * self.height])


def _segments_cross(p1, p2, q1, q2):
    """ True if the closed segments p1p2 and q1q2 intersect """

    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return 0 if abs(v) <= 1e-15 else (1 if v > 0 else -1)

    def on_segment(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    o1, o2, o3, o4 = orient(p1, p2, q1), orient(p1, p2, q2), orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    return ((o1 == 0 and on_segment(p1, p2, q1)) or (o2 == 0 and on_segment(p1, p2, q2))
            or (o3 == 0 and on_segment(q1, q2, p1)) or (o4 == 0 and on_segment(q1, q2, p2)))


@dataclass(frozen=True, eq=False)
class Polygon:
    """ Simple polygon in either winding, validated on construction """
    vertices: np.ndarray
    path: Path = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        verts = as_points(self.vertices).copy()
        if len(verts) < 3:
            raise InvalidGeometry("a polygon needs at least 3 vertices")
        if np.any(np.all(verts == np.roll(verts, -1, axis=0), axis=1)):
            raise InvalidGeometry("consecutive polygon vertices must differ")
        m = len(verts)
        for i in range(m):
            for j in range(i + 1, m):
                # adjacent edges share a vertex by construction
                if j == i + 1 or (i == 0 and j == m - 1):
                    continue
                if _segments_cross(verts[i], verts[(i + 1) % m], verts[j], verts[(j + 1) % m]):
                    raise InvalidGeometry(f"polygon edges {i} and {j} intersect")
        verts.setflags(write=False)
        object.__setattr__(self, 'vertices', verts)
        object.__setattr__(self, 'path', Path(np.vstack([verts, verts[:1]]), closed=True))

    @property
    def edges(self):
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    @property
    def perimeter(self):
        a, b = self.edges
        return float(np.linalg.norm(b - a, axis=1).sum())

    def bbox(self):
        return Rect.bounding(self.vertices)


def polygon_area(poly: Polygon):
    """ Absolute shoelace area """
    x, y = poly.vertices[:, 0], poly.vertices[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)) / 2)


def distance_to_segments(pts, starts, ends):
    """ Distance from every point to the closest of the given segments, shape (N,) """

    arr = as_points(pts)
    starts, ends = np.asarray(starts, dtype=float), np.asarray(ends, dtype=float)
    if len(starts) == 0:
        return np.full(len(arr), np.inf)
    out = np.full(len(arr), np.inf)
    d = ends - starts
    dd = np.einsum('ij,ij->i', d, d)
    dd_safe = np.where(dd > 0, dd, 1.0)
    # chunk over points to bound the (points x segments) temporaries
    chunk = max(1, 2_000_000 // len(starts))
    for lo in range(0, len(arr), chunk):
        p = arr[lo:lo + chunk, None, :]
        t = np.einsum('nsk,sk->ns', p - starts[None], d) / dd_safe
        t = np.clip(np.where(dd > 0, t, 0.0), 0.0, 1.0)
        closest = starts[None] + t[..., None] * d[None]
        out[lo:lo + chunk] = np.sqrt(((p - closest) ** 2).sum(axis=2)).min(axis=1)
    return out


def distance_to_polylines(pts, polylines):
    """ Distance from every point to a set of polylines; one-point polylines count as points """

    starts, ends = [], []
    for line in polylines:
        line = as_points(line)
        if len(line) == 1:
            starts.append(line)
            ends.append(line)
        elif len(line) > 1:
            starts.append(line[:-1])
            ends.append(line[1:])
    if not starts:
        return np.full(len(as_points(pts)), np.inf)
    return distance_to_segments(pts, np.vstack(starts), np.vstack(ends))


def point_in_polygon(p, poly: Polygon, tol=c.TOLERANCE):
    """ Closed membership: inside or within tol of the boundary """

    arr = as_points(p)
    inside = poly.path.contains_points(arr)
    a, b = poly.edges
    inside |= distance_to_segments(arr, a, b) <= tol
    if np.asarray(p).ndim == 1:
        return bool(inside[0])
    return inside


def point_in_polygon_interior(p, poly: Polygon, tol=c.TOLERANCE):
    """ Open membership: inside and farther than tol from the boundary """

    arr = as_points(p)
    a, b = poly.edges
    inside = poly.path.contains_points(arr) & (distance_to_segments(arr, a, b) > tol)
    if np.asarray(p).ndim == 1:
        return bool(inside[0])
    return inside
