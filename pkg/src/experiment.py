import logging
import os
from datetime import datetime

import numpy as np
import pandas as pd

from baseline.alpha_hull import AlphaHullQuery
from estimators import convergence_frame, run_convergence
from hull import build_hull
from metrics import dmu_mc, membership_of_alpha, membership_of_region
from plots import Plotter
from regions import s5_region, uniform_sample
from util.config import c
from util.data_pipeline import write_json, write_table
from util.errors import InvalidGeometry
from util.logs import log_resource_usage
from util.parallel import parallel_map, thread_count

logger = logging.getLogger("EXPERIMENT")

EXPERIMENTS = {'s5': s5_region}


class Experiment:
    """
    Compares the biconvex hull estimator with the alpha-convex hull on uniform samples of a benchmark set.

    Every (n, seed) cell draws its own sample and Monte Carlo points from counter based streams, so results do not
    depend on the number of threads.
    """

    def __init__(self, experiment_name=c.EXPERIMENT_NAME, ns=tuple(c.NS), seeds=c.SEEDS, seed=c.SEED, theta=c.THETA,
                 alpha=c.ALPHA, mc_n=c.MC_N, h=c.PITCH, threads=None):
        if experiment_name not in EXPERIMENTS:
            raise InvalidGeometry(f"unknown experiment {experiment_name!r}, choose from {sorted(EXPERIMENTS)}")
        if seeds < 1 or not ns:
            raise InvalidGeometry("an experiment needs at least one sample size and one seed")
        # config values
        self.experiment_name = experiment_name
        self.region = EXPERIMENTS[experiment_name]()
        self.ns = sorted(int(n) for n in ns)
        self.seeds = list(range(int(seed), int(seed) + int(seeds)))
        self.theta = float(theta)
        self.alpha = float(alpha)
        self.mc_n = int(mc_n)
        self.h = float(h)
        self.threads = thread_count(threads)
        # results
        self.rows = []
        self.alpha_dmu = {}
        self.summary = pd.DataFrame()
        self.resources = {}

        logger.info(f"{experiment_name}: n={self.ns} seeds={self.seeds[0]}..{self.seeds[-1]} theta={self.theta:.6f} "
                    f"alpha={self.alpha:.6f} mc={self.mc_n} h={self.h} threads={self.threads}")

    def _alpha_cell(self, key):
        n, seed = key
        pts = uniform_sample(self.region, n, seed).points
        query = AlphaHullQuery(pts, self.alpha, c.CENTER_GRID)
        return key, dmu_mc(membership_of_alpha(query), membership_of_region(self.region), self.region.bbox(),
                           self.mc_n, seed).value

    def run(self):
        """ Runs every cell of both estimators and aggregates the distance in measure per sample size """

        start = datetime.now()
        self.resources['start'] = log_resource_usage(logger, "EXPERIMENT-START")

        self.rows = run_convergence(self.region, self.theta, self.ns, self.seeds, self.h, self.mc_n,
                                    threads=self.threads)
        keys = [(n, s) for n in self.ns for s in self.seeds]
        self.alpha_dmu = dict(parallel_map(self._alpha_cell, keys, self.threads))

        for row in self.rows:
            logger.info(f"cell n={row.n} seed={row.seed} dmu={row.dmu:.5f} alpha_dmu={self.alpha_dmu[(row.n, row.seed)]:.5f}")

        records = []
        for n in self.ns:
            biconvex = np.array([row.dmu for row in self.rows if row.n == n])
            alpha = np.array([self.alpha_dmu[(n, s)] for s in self.seeds])
            for name, values in (('biconvex', biconvex), ('alpha', alpha)):
                records.append({'n': n, 'estimator': name, 'mean_dmu': float(values.mean()),
                                'sd_dmu': float(values.std(ddof=1)) if len(values) > 1 else np.nan,
                                'runs': len(values)})
        self.summary = pd.DataFrame(records, columns=['n', 'estimator', 'mean_dmu', 'sd_dmu', 'runs'])

        self.resources['end'] = log_resource_usage(logger, "EXPERIMENT-END")
        self.resources['runtime'] = (datetime.now() - start).total_seconds()
        logger.info(f"EXPERIMENT-TIME: {self.resources['runtime']:.1f}s")
        return self.rows

    def save_results(self, save_path=None, svg_dir=None):
        """ Writes the cell CSV (default LOGS_PATH/<experiment>.csv), the per n summary CSV, a JSON summary and optionally the figures """

        if not self.rows:
            self.run()

        save_path = save_path or os.path.join(c.LOGS_PATH, f"{self.experiment_name}.csv")
        stem = os.path.splitext(save_path)[0]
        write_table(save_path, convergence_frame(self.rows))
        write_table(f"{stem}_summary.csv", self.summary)
        write_json(f"{stem}_summary.json", {
            'experiment': self.experiment_name, 'region': self.region.to_json(), 'theta': self.theta,
            'alpha': self.alpha, 'mc': self.mc_n, 'h': self.h, 'ns': self.ns, 'seeds': self.seeds,
            'summary': self.summary.to_dict(orient='records'), 'resources': self.resources})
        logger.info(f"saved results to {save_path}")

        if svg_dir is not None:
            plotter = Plotter(pitch=self.h)
            for n in self.ns:
                pts = uniform_sample(self.region, n, self.seeds[0]).points
                hull = build_hull(pts, self.theta)
                query = AlphaHullQuery(pts, self.alpha, c.CENTER_GRID)
                plotter.plot_estimation(self.region, hull, os.path.join(svg_dir, f"estimation_n{n}.svg"), query)
                plotter.plot_hull(hull, os.path.join(svg_dir, f"hull_n{n}.svg"))
