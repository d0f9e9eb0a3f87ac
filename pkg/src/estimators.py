"""
Statistical layer: the hull area curve Psi_n(theta), the biconvexity angle estimator, the inner subsample and the
convergence experiments of the hull estimator.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from geometry import HALF_PI, as_points, reduce_angle
from hull import build_hull
from metrics import (Estimate, dmu_mc, hausdorff_memberships, hausdorff_region_points, membership_of_hull,
                     membership_of_region)
from regions import Region, deep_interior, dense_region_sample, uniform_sample
from util.config import c
from util.errors import EmptySample, InvalidGeometry
from util.parallel import parallel_map
from util.rng import MC_STREAM, generator

logger = logging.getLogger("ESTIMATORS")

CONVERGENCE_COLUMNS = ['n', 'seed', 'theta', 'dh_sample', 'dh_hull', 'dmu', 'ratio']


@dataclass(frozen=True, eq=False)
class AngleScan:
    thetas: np.ndarray
    psi: np.ndarray
    argmin_theta: float
    refined_theta: Optional[float] = None

    @property
    def argmin_index(self):
        return int(np.flatnonzero(self.thetas == self.argmin_theta)[0])

    def to_json(self):
        return {'thetas': self.thetas.tolist(), 'psi': self.psi.tolist(), 'argmin': self.argmin_theta,
                'refined': self.refined_theta}


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    seed: int
    theta: float
    dh_sample: float
    dh_hull: float
    dmu: float
    ratio: float

    def as_dict(self):
        return asdict(self)


def psi(points, theta):
    """ Psi_n(theta), the area of the theta-biconvex hull of the sample """
    return build_hull(points, theta).area


def theta_grid(grid_k):
    return np.arange(grid_k) * (HALF_PI / grid_k)


def estimate_angle(points, grid_k=c.GRID_K, refine=False, iterations=c.REFINE_ITERATIONS) -> AngleScan:
    """
    Minimizes Psi_n over the uniform grid j (pi/2) / grid_k, ties going to the smallest angle.

    With refine, a golden section search runs inside the two grid cells around the grid argmin. Psi_n need not be
    unimodal, so the refined angle is only kept when it does not increase Psi_n; the grid argmin stays the estimate.
    """

    if grid_k < 8:
        raise InvalidGeometry("grid_k must be at least 8")
    pts = as_points(points)
    if len(pts) == 0:
        raise EmptySample("angle estimation needs at least one point")

    thetas = theta_grid(grid_k)
    values = np.array([psi(pts, t) for t in thetas])
    i = int(np.argmin(values))
    argmin = float(thetas[i])

    refined = None
    if refine:
        step = HALF_PI / grid_k
        try:
            res = minimize_scalar(lambda t: psi(pts, t), bracket=(argmin - step, argmin, argmin + step),
                                  method='golden', options={'maxiter': iterations})
            candidate = reduce_angle(res.x)
            refined = candidate if psi(pts, candidate) <= values[i] else argmin
        except ValueError:
            # the grid cells hold no strict bracket, e.g. on a flat curve
            refined = argmin
        logger.debug(f"refined {argmin:.6f} -> {refined:.6f}")

    thetas.setflags(write=False)
    values.setflags(write=False)
    return AngleScan(thetas=thetas, psi=values, argmin_theta=argmin, refined_theta=refined)


def psi_jumps(points, grid_k=c.GRID_K):
    """ Largest adjacent-grid change of Psi_n on grids of grid_k and 2 grid_k angles, logged as a continuity check """

    pts = as_points(points)
    jumps = []
    for k in (grid_k, 2 * grid_k):
        values = np.array([psi(pts, t) for t in theta_grid(k)])
        jumps.append(float(np.max(np.abs(np.diff(np.append(values, values[0]))))))
    logger.info(f"psi max jump {jumps[0]:.5f} at k={grid_k}, {jumps[1]:.5f} at k={2 * grid_k}")
    return tuple(jumps)


def near_minimal_arc(scan: AngleScan, tol):
    """ Grid indices whose Psi_n lies within tol of the minimum """
    return np.flatnonzero(scan.psi <= scan.psi.min() + tol)


def is_contiguous_arc(indices, grid_k):
    """ True iff the indices form a single arc of the circular grid of grid_k angles (angles modulo pi/2) """

    mask = np.zeros(grid_k, dtype=bool)
    mask[np.asarray(indices, dtype=int)] = True
    if mask.all() or not mask.any():
        return bool(mask.any())
    starts = mask & ~np.roll(mask, 1)
    return int(starts.sum()) == 1


def inner_subsample(points, theta):
    """ Splits the sample into inner points (all four open quadrants occupied) and extremal points """
    h = build_hull(points, theta)
    return h.points[~h.extremal_mask], h.points[h.extremal_mask]


def lemma_radius(n, eps, radius_rule):
    if radius_rule == 'stated':
        return n ** -(0.5 + eps)
    if radius_rule == 'summable':
        return n ** -(0.5 - eps)
    raise InvalidGeometry(f"unknown radius rule {radius_rule!r}")


def lemma_rate_diagnostic(region: Region, theta, ns, eps=c.LEMMA['EPS'], seeds=range(10),
                          radius_rule=c.LEMMA['RADIUS'], probes=c.PROBES, threads=None) -> pd.DataFrame:
    """
    Share of deep interior sample points that are extremal, per sample size and seed.

    A point is deep when the ball of radius r_n around it lies in the region; 'stated' uses r_n = n^-(1/2 + eps),
    'summable' r_n = n^-(1/2 - eps). The fraction is nan when no sample point is deep.
    """

    if not 0 < eps < 0.5:
        raise InvalidGeometry("eps must lie in (0, 1/2)")

    def cell(key):
        n, seed = key
        pts = uniform_sample(region, n, seed).points
        radius = lemma_radius(n, eps, radius_rule)
        deep = deep_interior(region, pts, radius, probes)
        extremal = build_hull(pts, theta).extremal_mask
        n_deep, n_both = int(deep.sum()), int((deep & extremal).sum())
        return {'n': n, 'seed': seed, 'radius': radius, 'deep': n_deep, 'deep_extremal': n_both,
                'fraction': n_both / n_deep if n_deep else np.nan}

    keys = sorted((int(n), int(s)) for n in ns for s in seeds)
    rows = parallel_map(cell, keys, threads)
    return pd.DataFrame(rows, columns=['n', 'seed', 'radius', 'deep', 'deep_extremal', 'fraction'])


def hull_target(region: Region, theta, biconvex_at_theta=True, mesh=c.PITCH):
    """ Membership of B_theta(S): S itself at a biconvexity angle, else the hull of a dense sample of S """

    if biconvex_at_theta:
        return membership_of_region(region)
    return membership_of_hull(build_hull(dense_region_sample(region, mesh), theta))


def convergence_cell(region: Region, theta, n, seed, h=c.PITCH, mc_n=c.MC_N, target=None) -> ConvergenceRow:
    """ One (n, seed) run: sample, hull, discretized Hausdorff distances and Monte Carlo distance in measure """

    target = target if target is not None else membership_of_region(region)
    pts = uniform_sample(region, n, seed).points
    hull = build_hull(pts, theta)
    hull_fn = membership_of_hull(hull)

    dh_sample = hausdorff_region_points(membership_of_region(region), pts, h).value
    dh_hull = hausdorff_memberships(hull_fn, target, h).value
    window = region.bbox().union(hull_fn.window).union(target.window)
    dmu = dmu_mc(hull_fn, target, window, mc_n, seed).value
    ratio = dh_hull / dh_sample if dh_sample > 0 else np.nan
    logger.debug(f"cell n={n} seed={seed} dh_sample={dh_sample:.5f} dh_hull={dh_hull:.5f} dmu={dmu:.5f}")
    return ConvergenceRow(n=int(n), seed=int(seed), theta=float(theta), dh_sample=dh_sample, dh_hull=dh_hull,
                          dmu=dmu, ratio=ratio)


def run_convergence(region: Region, theta, ns, seeds, h=c.PITCH, mc_n=c.MC_N, biconvex_at_theta=True,
                    threads=None):
    """ convergence_cell over every (n, seed), rows sorted by (n, seed) whatever the scheduling """

    target = hull_target(region, theta, biconvex_at_theta, h)
    keys = sorted((int(n), int(s)) for n in ns for s in seeds)
    rows = parallel_map(lambda key: convergence_cell(region, theta, key[0], key[1], h, mc_n, target), keys, threads)
    return sorted(rows, key=lambda row: (row.n, row.seed))


def convergence_frame(rows):
    return pd.DataFrame([row.as_dict() for row in rows], columns=CONVERGENCE_COLUMNS)


def biconvexity_gap(region: Region, theta, mesh=c.PITCH, mc_n=c.MC_N, seed=0) -> Estimate:
    """ Monte Carlo area of B_theta(S) minus S, zero at the biconvexity angles of S """

    hull = build_hull(dense_region_sample(region, mesh), theta)
    hull_fn = membership_of_hull(hull)
    window = hull_fn.window
    pts = window.sample(generator(seed, MC_STREAM), int(mc_n))
    p = float(np.mean(hull_fn(pts) & ~region.contains(pts)))
    return Estimate(window.area * p, window.area * np.sqrt(p * (1 - p) / mc_n))


def population_psi(region: Region, thetas, mesh=c.PITCH):
    """ Areas of B_theta(S) over thetas, with S represented by its dense sample """
    pts = dense_region_sample(region, mesh)
    return np.array([psi(pts, t) for t in thetas])
