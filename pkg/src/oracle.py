"""
Slow reference implementations of hull membership and area.

Nothing here is shared with the hull engine apart from Point2 and Frame: membership is a direct scan of the
dominance criterion and the removed region follows the empty open quadrant definition literally.
"""
import numpy as np

from geometry import Frame, Rect, as_points
from util.errors import EmptySample

SIGNS = ((1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0))

# query block size of the brute force scans
CHUNK = 4096


def _frame_coords(pts, frame: Frame):
    return as_points(pts) @ frame.matrix.T


def naive_contains(points, theta, x):
    """ x is a member iff each of the four orientations has a sample point closed-dominating it """

    sample = as_points(points)
    if len(sample) == 0:
        raise EmptySample("membership in the hull of no points")
    frame = Frame.at(theta)
    a = _frame_coords(sample, frame)
    q = _frame_coords(x, frame)

    member = np.ones(len(q), dtype=bool)
    for lo in range(0, len(q), CHUNK):
        block = q[lo:lo + CHUNK, None, :]
        for s1, s2 in SIGNS:
            dominated = ((s1 * (a[None, :, 0] - block[..., 0]) >= 0)
                         & (s2 * (a[None, :, 1] - block[..., 1]) >= 0)).any(axis=1)
            member[lo:lo + CHUNK] &= dominated
    if np.asarray(x).ndim == 1:
        return bool(member[0])
    return member


def naive_vertex_grid_removed(points, theta, window: Rect, h):
    """
    Boolean mask over window.grid(h) of the points lying in some empty open quadrant with vertex on that grid.

    A vertex y of orientation (s1, s2) is empty when no sample point a has s1 (a1 - y1) > 0 and s2 (a2 - y2) > 0 in
    frame coordinates; every grid point strictly inside the quadrant of an empty vertex is removed.
    """

    sample = as_points(points)
    frame = Frame.at(theta)
    grid = window.grid(h)
    g = _frame_coords(grid, frame)
    a = _frame_coords(sample, frame) if len(sample) else np.empty((0, 2))

    removed = np.zeros(len(grid), dtype=bool)
    for s1, s2 in SIGNS:
        qg = g * np.array([s1, s2])
        qa = a * np.array([s1, s2])
        empty = np.ones(len(grid), dtype=bool)
        for lo in range(0, len(grid), CHUNK):
            block = qg[lo:lo + CHUNK, None, :]
            empty[lo:lo + CHUNK] = ~((qa[None, :, 0] > block[..., 0]) & (qa[None, :, 1] > block[..., 1])).any(axis=1)

        # x is removed iff some empty vertex y has y1 < x1 and y2 < x2 in the flipped coordinates
        vertices = qg[empty]
        if len(vertices) == 0:
            continue
        order = np.argsort(vertices[:, 0], kind='stable')
        v1 = vertices[order, 0]
        prefix_min = np.minimum.accumulate(vertices[order, 1])
        below = np.searchsorted(v1, qg[:, 0], side='left')
        has = below > 0
        removed[has] |= prefix_min[below[has] - 1] < qg[has, 1]
    return removed


def naive_area_grid(points, theta, h):
    """
    Hull area by counting members on a cell centred grid covering the rotated bounding box of the sample.

    The error is of the order of h times the hull perimeter.
    """

    sample = as_points(points)
    if len(sample) == 0:
        raise EmptySample("area of the hull of no points")
    frame = Frame.at(theta)
    a = _frame_coords(sample, frame)
    lo, hi = a.min(axis=0), a.max(axis=0)
    corners = np.array([[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]]) @ frame.matrix
    window = Rect.bounding(corners)
    xs, ys = window.axes(h, centered=True)
    cell = (window.width / len(xs)) * (window.height / len(ys))
    grid = window.grid(h, centered=True)
    return float(np.count_nonzero(naive_contains(sample, theta, grid)) * cell)
