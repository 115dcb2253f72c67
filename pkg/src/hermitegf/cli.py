"""Command-line entry point: ``hermitegf run|mehler-check|criterion-compare|info``.

Exit status is 0 when every HermiteGF row is clean and 2 when at least one
row carries a flag (baseline rows are informational).
"""

from __future__ import annotations

import argparse
import json
import logging
import platform
import sys

import numpy as np
import scipy

from hermitegf import __version__
from hermitegf.experiments import (
    CSV_HEADER,
    EXPERIMENTS,
    ExperimentConfig,
    any_flagged,
    emit_csv,
    run_experiment,
    write_rows,
)

EXIT_OK = 0
EXIT_FLAGGED = 2

# defaults of the two self-contained subcommands
MEHLER_DEFAULTS = dict(experiment="mehler-check", N=[100], eps=[0.01, 1.0], gamma=1.0, t=0.4, j_max=60)
COMPARE_DEFAULTS = dict(experiment="criterion-compare", N=[66], eps=[0.01, 0.1, 1.0], gamma=3.5, t=0.5)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--out", help="CSV output path (default: standard output)")
    p.add_argument("--tol", type=float, help="override the cut-off tolerance")
    p.add_argument("--threads", type=int, default=1, help="parameter tuples run concurrently")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hermitegf", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the scan described by a JSON config")
    p.add_argument("config")
    _add_common(p)

    p = sub.add_parser("mehler-check", help="partial Frobenius sums against the closed form")
    _add_common(p)
    p.add_argument("--eps", type=float, nargs="+")
    p.add_argument("--t", type=float)

    p = sub.add_parser("criterion-compare", help="new against legacy cut-off degree")
    _add_common(p)
    p.add_argument("--eps", type=float, nargs="+")
    p.add_argument("--N", type=int, nargs="+")

    sub.add_parser("info", help="versions and supported experiments")
    return parser


def _run(cfg: ExperimentConfig, args) -> int:
    if args.tol is not None:
        cfg.tol = args.tol
    threads = max(1, args.threads or 1)
    out = args.out if args.out is not None else cfg.out
    rows = run_experiment(cfg, out=None, threads=threads)
    if out is None or out == "-":
        write_rows(rows, sys.stdout)
    else:
        emit_csv(rows, out)
    return EXIT_FLAGGED if any_flagged(rows) else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "info":
        info = {
            "hermitegf": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
            "experiments": list(EXPERIMENTS),
            "csv_header": ",".join(CSV_HEADER),
        }
        print(json.dumps(info, indent=2))
        return EXIT_OK
    try:
        if args.command == "run":
            cfg = ExperimentConfig.from_json(args.config)
        elif args.command == "mehler-check":
            data = dict(MEHLER_DEFAULTS)
            if args.eps:
                data["eps"] = args.eps
            if args.t is not None:
                data["t"] = args.t
            cfg = ExperimentConfig.from_dict(data)
        else:
            data = dict(COMPARE_DEFAULTS)
            if args.eps:
                data["eps"] = args.eps
            if args.N:
                data["N"] = args.N
            cfg = ExperimentConfig.from_dict(data)
    except (OSError, ValueError) as exc:
        print(f"hermitegf: {exc}", file=sys.stderr)
        return 1
    return _run(cfg, args)


if __name__ == "__main__":
    sys.exit(main())
