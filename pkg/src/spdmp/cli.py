"""Command-line entry point: ``spdmp {gen-demo,train,reproduce,dist}``.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
"""
import argparse
import json
import logging
import os
import sys

import numpy as np

from . import fileio
from .dmp_core import DEFAULT_ALPHA_X, DEFAULT_ALPHA_Z, DEFAULT_N_BASIS, DmpGains
from .errors import (
    DefinitenessError,
    DegenerateActivation,
    DimensionMismatch,
    RankDeficiency,
    SpdDmpError,
)
from .metrics import METRICS, distance_series, jbld_dist, log_euclidean_dist
from .msd import MsdScenario, gen_stiffness_demo, rotate_stiffness, simulate_msd
from .spd_dmp import GoalSwitch, reproduce, train

log = logging.getLogger("spdmp")

EXIT_USAGE = 2
EXIT_NUMERIC = 3

NUMERIC_ERRORS = (DefinitenessError, DegenerateActivation, RankDeficiency)


class UsageError(Exception):
    pass


def _positive(flag):
    def parse(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects a number, got {text!r}")
        if not np.isfinite(value) or value <= 0:
            raise argparse.ArgumentTypeError(f"{flag} must be > 0, got {text}")
        return value
    return parse


def _fraction(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--switch-at expects a number, got {text!r}")
    if not 0 <= value:
        raise argparse.ArgumentTypeError(f"--switch-at must be >= 0, got {text}")
    return value


def _int_at_least_2(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--basis expects an integer, got {text!r}")
    if value < 2:
        raise argparse.ArgumentTypeError(f"--basis must be >= 2, got {text}")
    return value


def _pair(flag):
    def parse(text):
        try:
            a, b = (float(v) for v in text.split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects two comma-separated numbers")
        return a, b
    return parse


def _require_file(path, flag):
    if not os.path.isfile(path):
        raise UsageError(f"{flag}: no such file: {path}")


def _csv_path(output, suffix):
    root, _ = os.path.splitext(output)
    return root + suffix


def cmd_gen_demo(args):
    sc = MsdScenario(
        K0=np.diag(args.k0),
        theta_end=np.deg2rad(args.theta_end),
        theta_profile=args.theta_profile,
        mass=args.mass,
        damping=np.diag(args.damping),
        duration=args.duration,
        dt=args.dt,
    )
    demo = gen_stiffness_demo(sc)
    times, pos, _ = simulate_msd(sc, demo.points)
    fileio.save_series(args.output, demo.times, demo.points)
    csv_path = args.csv or _csv_path(args.output, ".csv")
    K = demo.points
    rows = zip(times, pos[:, 0], pos[:, 1], K[:, 0, 0], K[:, 1, 1], K[:, 0, 1])
    fileio.write_csv(csv_path, ["t", "x", "y", "K11", "K22", "K12"], rows)
    log.info("wrote %d samples to %s and %s", len(demo), args.output, csv_path)


def cmd_train(args):
    _require_file(args.input, "--input")
    demo = fileio.load_demo(args.input)
    gains = DmpGains(args.alpha_z, args.alpha_z / 4.0)
    model = train(demo, n_basis=args.basis, gains=gains, alpha_x=args.alpha_x, alpha_g=args.alpha_g)
    fileio.save_model(args.output, model)
    log.info("trained %d x %d weights from %s", *model.weights.shape, args.input)


def _new_goal(value, goal):
    if value.startswith("rotate:"):
        try:
            degrees = float(value.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"--new-goal: bad rotation {value!r}")
        if goal.shape != (2, 2):
            raise UsageError("--new-goal rotate:<deg> is only defined for 2x2 matrices")
        return rotate_stiffness(goal, np.deg2rad(degrees))
    _require_file(value, "--new-goal")
    with open(value) as fh:
        doc = json.load(fh)
    # a bare matrix or a trajectory file whose last sample is the goal
    if isinstance(doc, list) and doc and isinstance(doc[0], dict):
        return fileio.series_from_json(doc)[1][-1]
    return np.asarray(doc, dtype=float)


def cmd_reproduce(args):
    _require_file(args.input, "--input")
    model = fileio.load_model(args.input)
    demo = None
    if args.demo:
        _require_file(args.demo, "--demo")
        demo = fileio.load_demo(args.demo)
    switch = None
    if (args.switch_at is None) != (args.new_goal is None):
        raise UsageError("--switch-at and --new-goal must be given together")
    if args.switch_at is not None:
        switch = GoalSwitch(args.switch_at * model.tau, _new_goal(args.new_goal, model.goal),
                            args.alpha_g)
    traj = reproduce(model, dt=args.dt, duration=args.duration, goal_switch=switch)
    fileio.save_series(args.output, traj.times, traj.points)

    header = ["t", "le_goal", "jbld_goal"]
    columns = [traj.times,
               [log_euclidean_dist(X, g) for X, g in zip(traj.points, traj.goals)],
               [jbld_dist(X, g) for X, g in zip(traj.points, traj.goals)]]
    if demo is not None:
        n = min(len(demo), len(traj))
        le = [log_euclidean_dist(traj.points[k], demo.points[k]) if k < n else None
              for k in range(len(traj))]
        jb = [jbld_dist(traj.points[k], demo.points[k]) if k < n else None
              for k in range(len(traj))]
        header += ["le_demo", "jbld_demo"]
        columns += [le, jb]
    if switch is not None:
        pre = traj.times < switch.t_switch
        ref = demo.points if demo is not None else None
        d1 = [(log_euclidean_dist(X, ref[k]) if ref is not None and k < len(ref) else None)
              if pre[k] else None for k, X in enumerate(traj.points)]
        d2 = [None if pre[k] else log_euclidean_dist(X, switch.new_goal)
              for k, X in enumerate(traj.points)]
        header += ["d1", "d2"]
        columns += [d1, d2]
    report = args.report or _csv_path(args.output, "_report.csv")
    fileio.write_csv(report, header, zip(*columns))
    log.info("wrote %d steps to %s, report %s", len(traj), args.output, report)


def cmd_dist(args):
    for path in (args.file_a, args.file_b):
        _require_file(path, "dist")
    times_a, pts_a = fileio.load_series(args.file_a)
    _, pts_b = fileio.load_series(args.file_b)
    if len(pts_a) != len(pts_b):
        raise UsageError(f"sequence lengths differ: {len(pts_a)} vs {len(pts_b)}")
    d = distance_series(pts_a, pts_b, args.metric)
    rows = zip(times_a, d)
    if args.output:
        fileio.write_csv(args.output, ["t", args.metric], rows)
    else:
        sys.stdout.write(f"t,{args.metric}\n")
        for t, v in rows:
            sys.stdout.write(f"{float(t)!r},{float(v)!r}\n")


def build_parser():
    parser = argparse.ArgumentParser(prog="spdmp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-demo", help="generate the rotating-stiffness demonstration")
    p.add_argument("--output", required=True, help="demonstration JSON path")
    p.add_argument("--csv", help="plot CSV path (default: <output>.csv)")
    p.add_argument("--dt", type=_positive("--dt"), default=0.01)
    p.add_argument("--duration", type=_positive("--duration"), default=4.0)
    p.add_argument("--theta-end", type=float, default=90.0, help="final rotation, degrees")
    p.add_argument("--theta-profile", choices=["minimum-jerk", "linear"], default="minimum-jerk")
    p.add_argument("--k0", type=_pair("--k0"), default=(500.0, 100.0), help="K11,K22 of K0 (N/m)")
    p.add_argument("--damping", type=_pair("--damping"), default=(50.0, 50.0))
    p.add_argument("--mass", type=_positive("--mass"), default=1.0)
    p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; generation is not random")
    p.set_defaults(func=cmd_gen_demo)

    p = sub.add_parser("train", help="learn an SPD-DMP from a demonstration")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--basis", type=_int_at_least_2, default=DEFAULT_N_BASIS)
    p.add_argument("--alpha-z", type=_positive("--alpha-z"), default=DEFAULT_ALPHA_Z)
    p.add_argument("--alpha-x", type=_positive("--alpha-x"), default=DEFAULT_ALPHA_X)
    p.add_argument("--alpha-g", type=_positive("--alpha-g"), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("reproduce", help="roll out a trained model")
    p.add_argument("--input", required=True, help="model JSON")
    p.add_argument("--output", required=True, help="trajectory JSON")
    p.add_argument("--report", help="distance CSV (default: <output>_report.csv)")
    p.add_argument("--demo", help="demonstration JSON to measure against")
    p.add_argument("--dt", type=_positive("--dt"), default=None)
    p.add_argument("--duration", type=_positive("--duration"), default=None)
    p.add_argument("--switch-at", type=_fraction, default=None,
                   help="goal switch time as a fraction of the movement duration")
    p.add_argument("--new-goal", default=None, help='JSON path or "rotate:<degrees>"')
    p.add_argument("--alpha-g", type=_positive("--alpha-g"), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("dist", help="per-sample distance between two trajectories")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--metric", choices=sorted(METRICS), default="log-euclidean")
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_dist)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except NUMERIC_ERRORS as exc:
        print(f"spdmp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SpdDmpError, DimensionMismatch, OSError, json.JSONDecodeError) as exc:
        print(f"spdmp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
