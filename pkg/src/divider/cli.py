"""Command-line front end: train, raster, analyze, compare, rollout.

Exit codes: 0 success, 1 usage/input error, 2 training divergence.  The
DIVIDER_LOG environment variable (error|warn|info) sets the log level.
"""

import argparse
import logging
import math
import os
import sys

from . import env, oracle
from .division import write_analysis_report
from .net import PolicyNet
from .raster import RasterSpec, write_raster
from .train import TrainingDiverged, load_config, train, write_curve_csv

log = logging.getLogger("divider")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="divider",
                     description="train and analyse double-integrator policies")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a policy from a JSON config")
    p.add_argument("--config", required=True, help="JSON train config")
    p.add_argument("--out", required=True, help="output weight file")
    p.add_argument("--curve", default=None,
                   help="learning-curve CSV (default: <out>.curve.csv)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("raster", help="rasterize the state-action pattern")
    p.add_argument("--weights", required=True)
    p.add_argument("--out", required=True,
                   help="output base path; writes <out>.csv and <out>.pgm")
    p.add_argument("--p-range", nargs=2, type=float, default=(-100.0, 100.0),
                   metavar=("LO", "HI"))
    p.add_argument("--v-range", nargs=2, type=float, default=(-100.0, 100.0),
                   metavar=("LO", "HI"))
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--mode", choices=("action", "sign"), default="action")
    p.set_defaults(func=cmd_raster)

    p = sub.add_parser("analyze", help="write the division analysis report")
    p.add_argument("--weights", required=True)
    p.add_argument("--out", required=True, help="report text file")
    p.add_argument("--crossings", default=None,
                   help="practical-line CSV (default: <out>.crossings.csv)")
    p.add_argument("--radii", nargs="+", type=float,
                   default=(10.0, 100.0, 1000.0, 2000.0))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare",
                       help="roll out a policy against the time-optimal baseline")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--weights")
    src.add_argument("--oracle", action="store_true",
                     help="use the bang-bang baseline as the controller")
    p.add_argument("--starts", nargs="+", type=float, required=True,
                   help="initial positions (v0 = 0)")
    p.add_argument("--out", required=True, help="comparison CSV")
    p.add_argument("--dt", type=float, default=env.DT_DEFAULT)
    p.add_argument("--horizon", type=float, default=env.HORIZON_DEFAULT)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("rollout", help="write one trajectory to CSV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--weights")
    src.add_argument("--oracle", action="store_true")
    p.add_argument("--start", nargs=2, type=float, required=True,
                   metavar=("P", "V"))
    p.add_argument("--out", required=True)
    p.add_argument("--dt", type=float, default=env.DT_DEFAULT)
    p.add_argument("--horizon", type=float, default=env.HORIZON_DEFAULT)
    p.set_defaults(func=cmd_rollout)

    return parser


def cmd_train(args):
    config = load_config(args.config)
    actor, curve = train(config)
    actor.save(args.out)
    curve_path = args.curve if args.curve else args.out + ".curve.csv"
    write_curve_csv(curve, curve_path)
    log.info("wrote %s and %s", args.out, curve_path)
    return 0


def cmd_raster(args):
    net = PolicyNet.load(args.weights)
    spec = RasterSpec(p_range=tuple(args.p_range), v_range=tuple(args.v_range),
                      resolution=args.resolution, mode=args.mode)
    csv_path, pgm_path = write_raster(net, spec, args.out)
    log.info("wrote %s and %s", csv_path, pgm_path)
    return 0


def cmd_analyze(args):
    net = PolicyNet.load(args.weights)
    if not net.simplified:
        print("warning: division theory requires simplified network; "
              "writing partial report", file=sys.stderr)
    crossings = args.crossings if args.crossings else args.out + ".crossings.csv"
    write_analysis_report(net, args.out, crossings, radii=tuple(args.radii))
    log.info("wrote %s and %s", args.out, crossings)
    return 0


def _controller_from_args(args):
    if args.weights:
        net = PolicyNet.load(args.weights)
        return net.act, net.action_bound
    return oracle.controller(), 5.0


def cmd_compare(args):
    controller, a_bound = _controller_from_args(args)
    if not args.starts:
        raise _UsageError("at least one start position is required")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("p0,overshoot,settling_time,optimal_time,"
                 "ideal_decel_p,ideal_decel_v,"
                 "actual_decel_p,actual_decel_v,decel_gap\n")
        for p0 in args.starts:
            s0 = (p0, 0.0)
            traj = env.rollout(controller, s0, horizon=args.horizon,
                               dt=args.dt, a_bound=a_bound)
            m = env.metrics(traj)
            t_opt = oracle.optimal_time(s0, a_bound)
            ideal = oracle.ideal_decel_point(s0, a_bound)
            actual = m.actual_decel_point
            if actual is None:
                actual = (math.nan, math.nan)
            gap = math.hypot(actual[0] - ideal[0], actual[1] - ideal[1])
            settle = math.nan if m.settling_time is None else m.settling_time
            fh.write("%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n"
                     % (p0, m.overshoot, settle, t_opt,
                        ideal[0], ideal[1], actual[0], actual[1], gap))
    log.info("wrote %s", args.out)
    return 0


def cmd_rollout(args):
    controller, a_bound = _controller_from_args(args)
    traj = env.rollout(controller, tuple(args.start), horizon=args.horizon,
                       dt=args.dt, a_bound=a_bound)
    traj.to_csv(args.out)
    log.info("wrote %s (%d samples, %s)", args.out, len(traj), traj.reason)
    return 0


def _setup_logging():
    name = os.environ.get("DIVIDER_LOG", "warn").lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING,
              "info": logging.INFO}
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    log.setLevel(levels.get(name, logging.WARNING))
    if name not in levels:
        log.warning("unknown DIVIDER_LOG value %r, using warn", name)


def main(argv=None):
    _setup_logging()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except TrainingDiverged as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
