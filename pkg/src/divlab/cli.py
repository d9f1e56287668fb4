"""``divlab`` command line: compute, sweep, verify, report."""
import argparse
import csv
import math
import os
import sys
import time

import numpy as np

from . import renyi
from .divergence import standard_f_divergence
from .errors import DivlabError
from .fclass import catalog_lookup
from .report import RunReport
from .states import load_functional
from .suites import SUITES
from .variational import DEFAULT_N_MAX, variational_Sf

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_compute(args):
    t0 = time.perf_counter()
    f = catalog_lookup(args.f)
    rho, sigma = load_functional(args.rho), load_functional(args.sigma)
    report = RunReport("compute", {"f": args.f, "rho": args.rho, "sigma": args.sigma,
                                   "method": args.method, "nmax": args.nmax})
    spectral = variational = None
    if args.method in ("spectral", "both"):
        spectral = standard_f_divergence(f, rho, sigma)
        report.add_result("spectral", spectral)
    if args.method in ("variational", "both"):
        if f.representation is None:
            raise UsageError(f"{f.name} has no integral representation")
        variational, vrep = variational_Sf(f, rho, sigma, args.nmax)
        report.add_result("variational", variational)
        report.add_result("variational_schedule", vrep.n_schedule)
        report.add_result("variational_values", vrep.values)
    if spectral is not None and variational is not None:
        if math.isinf(spectral) or math.isinf(variational):
            gap = 0.0 if spectral == variational else math.inf
        else:
            gap = abs(spectral - variational)
        report.add_result("agreement_gap", gap)
    report.wall_time = time.perf_counter() - t0
    _emit(report.to_json(), args.out)
    return EXIT_OK


def _fmt(x):
    if x is None:
        return ""
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return f"{x + 0.0:.12g}"


def cmd_sweep(args):
    rho, sigma = load_functional(args.rho), load_functional(args.sigma)
    if args.steps < 1:
        raise UsageError("--steps must be positive")
    if args.alpha_min < 0 or args.alpha_max < args.alpha_min:
        raise UsageError("need 0 <= alpha-min <= alpha-max")
    grid = [float(a) for a in np.linspace(args.alpha_min, args.alpha_max, args.steps)]
    if args.alpha_min <= 1.0 <= args.alpha_max and 1.0 not in grid:
        grid = sorted(grid + [1.0])
    sweep = renyi.alpha_sweep(rho, sigma, grid)
    header = ["alpha", "Q", "D"] + (["D_sandwiched"] if args.sandwiched else [])
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for r in sweep.results:
            row = [_fmt(r.alpha), _fmt(r.q_value), _fmt(r.d_value)]
            if args.sandwiched:
                if r.alpha > 1:
                    row.append(_fmt(renyi.sandwiched_d_alpha(rho, sigma, r.alpha)))
                elif r.alpha == 1:
                    row.append(_fmt(r.d_value))
                else:
                    row.append("")
            writer.writerow(row)
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def _seed(args):
    env = os.environ.get("DIVLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"DIVLAB_SEED must be an integer, got {env!r}") from None
    return args.seed


def cmd_verify(args):
    t0 = time.perf_counter()
    names = list(SUITES) if args.suite == "all" else [args.suite]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite {unknown[0]!r}; choose from all, {', '.join(SUITES)}")
    seed = _seed(args)
    report = RunReport("verify", {"suite": args.suite, "trials": args.trials, "dim": args.dim},
                       seed=seed)
    for name in names:
        kwargs = {}
        if name == "variational-agreement":
            kwargs["n_max"] = args.nmax
        outcome = SUITES[name](seed, args.trials, args.dim, **kwargs)
        report.suite_outcomes.append(outcome.as_dict())
    report.wall_time = time.perf_counter() - t0
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_report(args):
    status = EXIT_OK
    for path in args.files:
        with open(path) as fh:
            rep = RunReport.from_json(fh.read())
        print(f"{path}: {rep.command} (seed={rep.seed}, {rep.wall_time:.2f}s)")
        for item in rep.results:
            value = item["value"]
            if isinstance(value, list):
                continue
            print(f"  {item['label']:<24} {_fmt(value) if isinstance(value, float) else value}")
        for o in rep.suite_outcomes:
            mark = "PASS" if o["passed"] else "FAIL"
            print(f"  [{mark}] {o['name']:<22} trials={o['trials']:<4} "
                  f"max violation={_fmt(o['max_violation'])}")
            if not o["passed"]:
                status = EXIT_VIOLATION
    return status


def build_parser():
    parser = argparse.ArgumentParser(prog="divlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="standard f-divergence of two state files")
    p.add_argument("--f", required=True, help="catalog name, e.g. t_log_t or power:1.5")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--method", choices=("spectral", "variational", "both"), default="spectral")
    p.add_argument("--nmax", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="Renyi divergences over a grid of alpha (CSV)")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--alpha-min", type=float, default=0.0)
    p.add_argument("--alpha-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=9)
    p.add_argument("--sandwiched", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run seeded property suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--nmax", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="summarize saved JSON reports")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DivlabError, OSError) as exc:
        print(f"divlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
