import logging
import os

import matplotlib as mpl

mpl.use('Agg')
import numpy as np
from matplotlib import pyplot as plt

from baseline.alpha_hull import AlphaHullQuery, alpha_contains_many
from estimators import AngleScan
from hull import BiconvexHull, boundary, extremal_points
from regions import Region
from util.config import c

logger = logging.getLogger("PLOTS")

# fixed ids and no timestamp, so equal inputs give byte identical files
mpl.rcParams['svg.hashsalt'] = 'rectihull'
mpl.rcParams['svg.fonttype'] = 'none'


class Plotter:
    def __init__(self, figsize=(7, 7), pitch=c.PITCH):
        self.figsize = figsize
        self.pitch = pitch
        self.colors = {'sample': 'tab:blue', 'hull': 'tab:red', 'extremal': 'black', 'region': 'tab:green',
                       'alpha': 'tab:orange'}

    def _save(self, fig, path):
        dir_path = os.path.dirname(path)
        if dir_path and not os.path.exists(dir_path):
            os.makedirs(dir_path)
        fig.savefig(path, format='svg', metadata={'Date': None})
        plt.close(fig)
        logger.info(f"saved figure {path}")

    def _draw_hull(self, ax, hull: BiconvexHull, label='biconvex hull'):
        for i, line in enumerate(boundary(hull)):
            ax.plot(line[:, 0], line[:, 1], color=self.colors['hull'], linewidth=1.2, label=label if i == 0 else None)

    def _membership_grid(self, window, predicate):
        xs, ys = window.axes(self.pitch)
        gx, gy = np.meshgrid(xs, ys)
        inside = predicate(np.column_stack([gx.ravel(), gy.ravel()])).reshape(gx.shape)
        return gx, gy, inside.astype(float)

    def plot_hull(self, hull: BiconvexHull, path):
        """ Sample points, hull boundary and extremal points """

        fig, ax = plt.subplots(figsize=self.figsize)
        ax.scatter(hull.points[:, 0], hull.points[:, 1], s=4, color=self.colors['sample'], label='sample')
        self._draw_hull(ax, hull)
        ext = extremal_points(hull)
        ax.scatter(ext[:, 0], ext[:, 1], s=12, facecolors='none', edgecolors=self.colors['extremal'], label='extremal')
        ax.set_aspect('equal')
        ax.set_title(f"theta = {hull.theta:.4f}, area = {hull.area:.5f}")
        ax.legend(loc='upper right')
        self._save(fig, path)

    def plot_estimation(self, region: Region, hull: BiconvexHull, path, alpha_query: AlphaHullQuery = None):
        """ Support outline, sample, biconvex hull boundary and the alpha hull as a shaded area """

        fig, ax = plt.subplots(figsize=self.figsize)
        window = region.bbox().inflate(0.05)
        gx, gy, inside = self._membership_grid(window, region.contains)
        ax.contour(gx, gy, inside, levels=[0.5], colors=[self.colors['region']], linewidths=1.0)
        if alpha_query is not None:
            gx, gy, alpha_in = self._membership_grid(window, lambda pts: alpha_contains_many(alpha_query, pts))
            ax.contourf(gx, gy, alpha_in, levels=[0.5, 1.5], colors=[self.colors['alpha']], alpha=0.25)
        ax.scatter(hull.points[:, 0], hull.points[:, 1], s=2, color=self.colors['sample'])
        self._draw_hull(ax, hull)
        ax.set_aspect('equal')
        ax.set_title(f"n = {len(hull.points)}, theta = {hull.theta:.4f}")
        self._save(fig, path)

    def plot_psi(self, scan: AngleScan, path):
        """ The hull area curve over the angle grid with its argmin """

        fig, ax = plt.subplots(figsize=(self.figsize[0], self.figsize[1] / 2))
        ax.plot(scan.thetas, scan.psi, color=self.colors['hull'], marker='.', linewidth=1)
        ax.axvline(scan.argmin_theta, color='black', linestyle='--', linewidth=0.8)
        if scan.refined_theta is not None:
            ax.axvline(scan.refined_theta, color='grey', linestyle=':', linewidth=0.8)
        ax.set_xlabel('theta')
        ax.set_ylabel('hull area')
        ax.set_xlim(0, np.pi / 2)
        self._save(fig, path)
