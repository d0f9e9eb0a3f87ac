"""
Ground-truth support sets S built from rectangles, polygons, triangles and disks combined by union and difference.

Subtrahends of a difference are removed as open sets, so every constructible region is the closure of its interior.
"""
import hashlib
import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from geometry import Polygon, Rect, as_points, point_in_polygon, point_in_polygon_interior, polygon_area
from util.config import c
from util.errors import InvalidGeometry, RejectionStall
from util.rng import MC_STREAM, SAMPLING_STREAM, generator

logger = logging.getLogger("REGIONS")


class Region(ABC):
    """ Node of an immutable region tree """

    @abstractmethod
    def contains(self, pts, tol=c.TOLERANCE):
        """ Closed membership of an (N, 2) array """

    @abstractmethod
    def interior(self, pts, tol=c.TOLERANCE):
        """ Open membership of an (N, 2) array, points within tol of the boundary excluded """

    @abstractmethod
    def bbox(self) -> Rect:
        pass

    @abstractmethod
    def boundary_points(self, mesh):
        """ Points on the boundary of every primitive of the tree, spaced about mesh apart """

    @abstractmethod
    def to_json(self):
        pass

    @property
    def depth(self):
        return 1

    @property
    def id(self):
        """ Short content hash, stable across runs """
        text = json.dumps(self.to_json(), sort_keys=True)
        return hashlib.sha1(text.encode()).hexdigest()[:12]


def _edge_points(starts, ends, mesh):
    out = []
    for a, b in zip(starts, ends):
        m = max(int(np.ceil(np.linalg.norm(b - a) / mesh)), 1)
        t = np.arange(m)[:, None] / m
        out.append(a + t * (b - a))
    return np.vstack(out)


@dataclass(frozen=True, eq=False)
class RectRegion(Region):
    rect: Rect

    def contains(self, pts, tol=c.TOLERANCE):
        return self.rect.contains(pts, tol=tol)

    def interior(self, pts, tol=c.TOLERANCE):
        arr = as_points(pts)
        r = self.rect
        return ((arr[:, 0] > r.xmin + tol) & (arr[:, 0] < r.xmax - tol)
                & (arr[:, 1] > r.ymin + tol) & (arr[:, 1] < r.ymax - tol))

    def bbox(self):
        return self.rect

    def boundary_points(self, mesh):
        r = self.rect
        corners = np.array([[r.xmin, r.ymin], [r.xmax, r.ymin], [r.xmax, r.ymax], [r.xmin, r.ymax]])
        return _edge_points(corners, np.roll(corners, -1, axis=0), mesh)

    def to_json(self):
        r = self.rect
        return {'type': 'rect', 'min': [r.xmin, r.ymin], 'max': [r.xmax, r.ymax]}


@dataclass(frozen=True, eq=False)
class PolygonRegion(Region):
    polygon: Polygon
    kind: str = 'polygon'

    def __post_init__(self):
        if self.kind == 'triangle' and len(self.polygon.vertices) != 3:
            raise InvalidGeometry("a triangle needs exactly 3 vertices")

    def contains(self, pts, tol=c.TOLERANCE):
        return point_in_polygon(as_points(pts), self.polygon, tol=tol)

    def interior(self, pts, tol=c.TOLERANCE):
        return point_in_polygon_interior(as_points(pts), self.polygon, tol=tol)

    def bbox(self):
        return self.polygon.bbox()

    def boundary_points(self, mesh):
        a, b = self.polygon.edges
        return _edge_points(a, b, mesh)

    def to_json(self):
        return {'type': self.kind, 'vertices': self.polygon.vertices.tolist()}


@dataclass(frozen=True, eq=False)
class DiskRegion(Region):
    center: tuple
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidGeometry("disk radius must be positive")
        object.__setattr__(self, 'center', tuple(float(v) for v in self.center))

    def _distance(self, pts):
        return np.linalg.norm(as_points(pts) - np.asarray(self.center), axis=1)

    def contains(self, pts, tol=c.TOLERANCE):
        return self._distance(pts) <= self.radius + tol

    def interior(self, pts, tol=c.TOLERANCE):
        return self._distance(pts) < self.radius - tol

    def bbox(self):
        (x, y), r = self.center, self.radius
        return Rect(x - r, y - r, x + r, y + r)

    def boundary_points(self, mesh):
        m = max(int(np.ceil(2 * np.pi * self.radius / mesh)), 16)
        angle = 2 * np.pi * np.arange(m) / m
        return np.asarray(self.center) + self.radius * np.column_stack([np.cos(angle), np.sin(angle)])

    def to_json(self):
        return {'type': 'disk', 'center': list(self.center), 'radius': self.radius}


@dataclass(frozen=True, eq=False)
class UnionRegion(Region):
    items: tuple

    def __post_init__(self):
        if not self.items:
            raise InvalidGeometry("a union needs at least one item")
        object.__setattr__(self, 'items', tuple(self.items))
        _check_depth(self)

    @property
    def depth(self):
        return 1 + max(item.depth for item in self.items)

    def contains(self, pts, tol=c.TOLERANCE):
        arr = as_points(pts)
        return np.logical_or.reduce([item.contains(arr, tol) for item in self.items])

    def interior(self, pts, tol=c.TOLERANCE):
        # shared boundaries of touching items count as exterior
        arr = as_points(pts)
        return np.logical_or.reduce([item.interior(arr, tol) for item in self.items])

    def bbox(self):
        box = self.items[0].bbox()
        for item in self.items[1:]:
            box = box.union(item.bbox())
        return box

    def boundary_points(self, mesh):
        return np.vstack([item.boundary_points(mesh) for item in self.items])

    def to_json(self):
        return {'type': 'union', 'items': [item.to_json() for item in self.items]}


@dataclass(frozen=True, eq=False)
class DifferenceRegion(Region):
    """ a minus the open interiors of the pieces in b """
    a: Region
    b: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, 'b', tuple(self.b))
        _check_depth(self)

    @property
    def depth(self):
        return 1 + max([self.a.depth] + [item.depth for item in self.b])

    def contains(self, pts, tol=c.TOLERANCE):
        arr = as_points(pts)
        member = self.a.contains(arr, tol)
        for item in self.b:
            member &= ~item.interior(arr, tol)
        return member

    def interior(self, pts, tol=c.TOLERANCE):
        arr = as_points(pts)
        member = self.a.interior(arr, tol)
        for item in self.b:
            member &= ~item.contains(arr, tol)
        return member

    def bbox(self):
        return self.a.bbox()

    def boundary_points(self, mesh):
        return np.vstack([self.a.boundary_points(mesh)] + [item.boundary_points(mesh) for item in self.b])

    def to_json(self):
        return {'type': 'difference', 'a': self.a.to_json(), 'b': [item.to_json() for item in self.b]}


def _check_depth(r: Region):
    if r.depth > c.MAX_DEPTH:
        raise InvalidGeometry(f"region tree deeper than {c.MAX_DEPTH}")


@dataclass(frozen=True)
class AreaEstimate:
    value: float
    stderr: float
    exact: bool


@dataclass(frozen=True, eq=False)
class SampleBatch:
    points: np.ndarray
    seed: int
    region_id: str

    def __len__(self):
        return len(self.points)


# constructors


def rect(lo, hi):
    return RectRegion(Rect(float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])))


def polygon(vertices):
    return PolygonRegion(Polygon(as_points(vertices)))


def triangle(p1, p2, p3):
    return PolygonRegion(Polygon(as_points([p1, p2, p3])), kind='triangle')


def disk(center, radius):
    return DiskRegion(tuple(center), float(radius))


def union(*items):
    return UnionRegion(tuple(items))


def difference(a, *b):
    return DifferenceRegion(a, tuple(b))


def unit_square():
    return rect((0.0, 0.0), (1.0, 1.0))


def unit_disk():
    return disk((0.0, 0.0), 1.0)


def s5_region():
    """ The unit square with the open triangles above and below the two diagonals removed, biconvex at pi/4 """
    t1 = triangle((0.0, 1.0), (0.5, 0.5), (1.0, 1.0))
    t2 = triangle((0.0, 0.0), (0.5, 0.5), (1.0, 0.0))
    return difference(unit_square(), t1, t2)


# queries


def region_contains(r: Region, p, tol=c.TOLERANCE):
    member = r.contains(as_points(p), tol)
    if np.asarray(p).ndim == 1:
        return bool(member[0])
    return member


def region_interior(r: Region, p, tol=c.TOLERANCE):
    member = r.interior(as_points(p), tol)
    if np.asarray(p).ndim == 1:
        return bool(member[0])
    return member


def _boxes_overlap(a: Rect, b: Rect):
    return min(a.xmax, b.xmax) > max(a.xmin, b.xmin) and min(a.ymax, b.ymax) > max(a.ymin, b.ymin)


def _exact_area(r: Region):
    """ Shoelace based area when the tree is a primitive polygon or a rect minus pieces with disjoint boxes """

    if isinstance(r, RectRegion):
        return r.rect.area
    if isinstance(r, PolygonRegion):
        return polygon_area(r.polygon)
    if isinstance(r, DifferenceRegion) and isinstance(r.a, RectRegion):
        if not all(isinstance(item, (RectRegion, PolygonRegion)) for item in r.b):
            return None
        outer = r.a.rect
        boxes = [item.bbox() for item in r.b]
        if not all(outer.contains([[box.xmin, box.ymin], [box.xmax, box.ymax]]).all() for box in boxes):
            return None
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if _boxes_overlap(boxes[i], boxes[j]):
                    return None
        return outer.area - sum(_exact_area(item) for item in r.b)
    return None


def region_area(r: Region, mc_n=c.MC_AREA_N, seed=0, method='auto') -> AreaEstimate:
    """
    Area of a region.

    method 'auto' uses the exact shoelace path when the tree allows it and falls back to Monte Carlo over the
    bounding box; 'mc' always integrates, with the standard error of the hit fraction.
    """

    if method not in ('auto', 'mc'):
        raise InvalidGeometry(f"unknown area method {method!r}")
    if method == 'auto':
        exact = _exact_area(r)
        if exact is not None:
            return AreaEstimate(float(exact), 0.0, True)
    if mc_n < 1000:
        raise InvalidGeometry("Monte Carlo area needs at least 1000 points")

    box = r.bbox()
    pts = box.sample(generator(seed, MC_STREAM), int(mc_n))
    hit = np.mean(r.contains(pts))
    value = box.area * hit
    stderr = box.area * np.sqrt(hit * (1 - hit) / mc_n)
    logger.debug(f"mc area {value:.6f} +- {stderr:.6f} from {mc_n} points")
    return AreaEstimate(float(value), float(stderr), False)


def uniform_sample(r: Region, n, seed=0) -> SampleBatch:
    """ n points uniform on the region by rejection from its bounding box, reproducible per seed """

    box = r.bbox()
    if not box.area > 0:
        raise InvalidGeometry("cannot sample a region without area")
    rng = generator(seed, SAMPLING_STREAM)
    batch = max(4096, 2 * int(n))
    accepted, count, draws = [], 0, 0
    while count < n:
        candidates = box.sample(rng, batch)
        keep = candidates[r.contains(candidates)]
        accepted.append(keep)
        count += len(keep)
        draws += batch
        if draws >= c.STALL_DRAWS and count / draws < c.STALL_RATE:
            raise RejectionStall(f"acceptance rate {count / draws:.2e} after {draws} draws")

    points = np.vstack(accepted)[:n] if accepted else np.empty((0, 2))
    points.setflags(write=False)
    return SampleBatch(points=points, seed=int(seed), region_id=r.id)


def deep_interior(r: Region, p, rho, k=c.PROBES):
    """
    True iff the center and k probes on the circle of radius rho around p are all in the region.

    Approximates B(p, rho) in S: a concavity narrower than the probe spacing between two probes goes unnoticed.
    """

    if not rho > 0:
        raise InvalidGeometry("rho must be positive")
    if k < 16:
        raise InvalidGeometry("deep_interior needs at least 16 probes")
    angle = 2 * np.pi * np.arange(k) / k
    ring = np.column_stack([np.cos(angle), np.sin(angle)]) * rho
    arr = as_points(p)
    probes = arr[:, None, :] + np.vstack([[0.0, 0.0], ring])[None]
    member = r.contains(probes.reshape(-1, 2)).reshape(len(arr), k + 1).all(axis=1)
    if np.asarray(p).ndim == 1:
        return bool(member[0])
    return member


def dense_region_sample(r: Region, mesh=c.PITCH):
    """ Deterministic sample of S: the vertex grid of pitch mesh inside S plus points along every boundary """

    box = r.bbox()
    grid = box.grid(mesh)
    edge = r.boundary_points(mesh)
    pts = np.vstack([grid[r.contains(grid)], edge[r.contains(edge)]])
    return pts


# json


def region_from_json(data, _depth=1):
    """ Parses the region JSON tree, raising InvalidGeometry on any malformed node """

    if _depth > c.MAX_DEPTH:
        raise InvalidGeometry(f"region tree deeper than {c.MAX_DEPTH}")
    if not isinstance(data, dict) or 'type' not in data:
        raise InvalidGeometry("region node must be an object with a 'type'")
    kind = data['type']
    try:
        if kind == 'rect':
            return rect(data['min'], data['max'])
        if kind == 'polygon':
            return polygon(data['vertices'])
        if kind == 'triangle':
            vertices = data['vertices']
            if len(vertices) != 3:
                raise InvalidGeometry("a triangle needs exactly 3 vertices")
            return triangle(*vertices)
        if kind == 'disk':
            return disk(data['center'], data['radius'])
        if kind == 'union':
            return union(*[region_from_json(item, _depth + 1) for item in data['items']])
        if kind == 'difference':
            return difference(region_from_json(data['a'], _depth + 1),
                              *[region_from_json(item, _depth + 1) for item in data.get('b', [])])
    except (KeyError, TypeError, IndexError, ValueError) as e:
        raise InvalidGeometry(f"malformed {kind} node: {e}") from e
    raise InvalidGeometry(f"unknown region type {kind!r}")


def region_to_json(r: Region):
    return r.to_json()
