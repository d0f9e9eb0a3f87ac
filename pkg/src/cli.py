"""
Command line surface: hull, angle, sample, distance and experiment.

Exit codes: 0 ok, 2 usage or parse error, 3 empty input, 4 numerical failure.
"""
import argparse
import logging
import sys

from estimators import estimate_angle
from experiment import EXPERIMENTS, Experiment
from hull import build_hull, hull_from_json, hull_to_json
from metrics import (dmu_mc, hausdorff_memberships, hausdorff_points, membership_of_hull, membership_of_points,
                     membership_of_region)
from plots import Plotter
from regions import region_from_json, uniform_sample
from util.config import c
from util.data_pipeline import read_json, read_points_csv, write_json, write_points_csv
from util.errors import EmptySample, EmptySet, InputParseError, InvalidGeometry, RejectionStall
from util.logs import setup_logging

logger = logging.getLogger("CLI")

EXIT_OK, EXIT_USAGE, EXIT_EMPTY, EXIT_NUMERIC = 0, 2, 3, 4


def _grid(value):
    k = int(value)
    if k < 8:
        raise argparse.ArgumentTypeError("the angle grid needs at least 8 points")
    return k


def _positive(value):
    x = float(value)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"{value} is not positive")
    return x


def _int_list(value):
    try:
        return [int(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not a comma separated list of integers")


def _membership(arg):
    """ 'csv:FILE', 'region:FILE.json' or 'hull:FILE.json' to a MembershipFn """

    kind, _, path = arg.partition(':')
    if not path:
        raise InputParseError(f"set {arg!r} must look like csv:FILE, region:FILE or hull:FILE")
    if kind == 'csv':
        pts = read_points_csv(path)
        if len(pts) == 0:
            raise EmptySet(f"{path} holds no points")
        return membership_of_points(pts)
    if kind == 'region':
        return membership_of_region(region_from_json(read_json(path)))
    if kind == 'hull':
        try:
            return membership_of_hull(hull_from_json(read_json(path)))
        except (KeyError, TypeError) as e:
            raise InputParseError(f"malformed hull file {path}: {e}") from e
    raise InputParseError(f"unknown set kind {kind!r}")


def cmd_hull(args):
    hull = build_hull(read_points_csv(args.points), args.theta)
    write_json(args.out, hull_to_json(hull))
    if args.svg:
        Plotter().plot_hull(hull, args.svg)
    print(f"area {hull.area:.17g}")
    return EXIT_OK


def cmd_angle(args):
    scan = estimate_angle(read_points_csv(args.points), grid_k=args.grid, refine=args.refine)
    write_json(args.out, scan.to_json())
    if args.svg:
        Plotter().plot_psi(scan, args.svg)
    refined = f" refined {scan.refined_theta:.17g}" if scan.refined_theta is not None else ""
    print(f"argmin {scan.argmin_theta:.17g}{refined}")
    return EXIT_OK


def cmd_sample(args):
    region = region_from_json(read_json(args.region))
    batch = uniform_sample(region, args.n, args.seed)
    write_points_csv(args.out, batch.points)
    logger.info(f"{len(batch)} points of region {batch.region_id} with seed {batch.seed}")
    return EXIT_OK


def cmd_distance(args):
    a, b = _membership(args.a), _membership(args.b)
    if args.mode == 'hausdorff':
        if a.points is not None and b.points is not None:
            value, error = hausdorff_points(a.points, b.points), 0.0
        else:
            estimate = hausdorff_memberships(a, b, args.h)
            value, error = estimate.value, estimate.error
    else:
        estimate = dmu_mc(a, b, a.window.union(b.window), args.mc, args.seed)
        value, error = estimate.value, estimate.error
    print(f"{value:.17g} {error:.17g}")
    return EXIT_OK


def cmd_experiment(args):
    experiment = Experiment(experiment_name=args.name, ns=args.n, seeds=args.seeds, seed=args.seed,
                            theta=args.theta, alpha=args.alpha, mc_n=args.mc, h=args.h, threads=args.threads)
    experiment.run()
    experiment.save_results(args.out, svg_dir=args.svg)
    print(experiment.summary.to_string(index=False))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='rectihull', description="Biconvex hull estimation of planar supports")
    parser.add_argument('--verbose', '-v', action='store_true', help="debug logging")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('hull', help="biconvex hull of a point file")
    p.add_argument('--points', required=True)
    p.add_argument('--theta', type=float, default=c.THETA)
    p.add_argument('--out', required=True)
    p.add_argument('--svg')
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser('angle', help="estimate the biconvexity angle of a sample")
    p.add_argument('--points', required=True)
    p.add_argument('--grid', type=_grid, default=c.GRID_K)
    p.add_argument('--refine', action='store_true')
    p.add_argument('--out', required=True)
    p.add_argument('--svg')
    p.set_defaults(func=cmd_angle)

    p = sub.add_parser('sample', help="uniform sample of a region")
    p.add_argument('--region', required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--seed', type=int, default=c.SEED)
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('distance', help="Hausdorff distance or distance in measure between two sets")
    p.add_argument('--mode', choices=['hausdorff', 'measure'], required=True)
    p.add_argument('--a', required=True)
    p.add_argument('--b', required=True)
    p.add_argument('--mc', type=int, default=c.MC_N)
    p.add_argument('--h', type=_positive, default=c.PITCH)
    p.add_argument('--seed', type=int, default=c.SEED)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser('experiment', help="biconvex hull against alpha hull on a benchmark set")
    p.add_argument('name', choices=sorted(EXPERIMENTS))
    p.add_argument('--n', type=_int_list, default=list(c.NS))
    p.add_argument('--seeds', type=int, default=c.SEEDS)
    p.add_argument('--seed', type=int, default=c.SEED)
    p.add_argument('--alpha', type=_positive, default=c.ALPHA)
    p.add_argument('--theta', type=float, default=c.THETA)
    p.add_argument('--mc', type=int, default=c.MC_N)
    p.add_argument('--h', type=_positive, default=c.PITCH)
    p.add_argument('--threads', type=int)
    p.add_argument('--out', help="cell CSV, defaults to LOGS_PATH/<name>.csv")
    p.add_argument('--svg')
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    setup_logging(logging.DEBUG if args.verbose else logging.INFO)

    try:
        return args.func(args)
    except (InputParseError, InvalidGeometry) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except (EmptySample, EmptySet) as e:
        logger.error(str(e))
        return EXIT_EMPTY
    except RejectionStall as e:
        logger.error(str(e))
        return EXIT_NUMERIC


if __name__ == '__main__':
    sys.exit(main())
