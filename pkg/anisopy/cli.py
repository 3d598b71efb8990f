"""Command line entry point of anisopy.

    anisopy <command> --config experiment.json [--out DIR] [--threads N]
            [--dump-fields] [--limit] [--verbose]

Each command runs one experiment kind and writes <out>/<kind>.csv together
with <out>/summary.txt. The exit code is 0 when the experiment passes or
asserts nothing, 2 when a slope or ratio is out of range and 1 on any error.
"""
import argparse
import dataclasses
import logging
import os
import sys
from typing import List, Optional

from .harness import Harness
from .loader import dump_field, dump_matrix, load_config, write_report, write_summary

__all__ = ["COMMANDS", "build_parser", "main"]

logger = logging.getLogger(__name__)

COMMANDS = {
    "solve": "solve",
    "sweep-eps": "sweep-eps",
    "sweep-h": "sweep-h-uniform",
    "sweep-h-limit": "sweep-h-limit",
    "sweep-load": "sweep-load",
    "check-decomp": "check-decomp",
    "check-h2": "check-h2",
    "validate": "validate",
}
"""The experiment kind run by each command"""

_HELP = {
    "solve": "solve the perturbed scheme once (or the limit scheme with --limit)",
    "sweep-eps": "rate of the perturbed-to-limit gap in eps at fixed h",
    "sweep-h": "eps-uniform rate in h against nested reference solutions",
    "sweep-h-limit": "rate in h of the limit scheme with exact load",
    "sweep-load": "rate in h of the interpolated-load perturbation",
    "check-decomp": "exponents of the cutoff decomposition norms in delta",
    "check-h2": "boundedness in eps of the second-difference indicators",
    "validate": "check the declared properties of the problem",
}

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2


def build_parser() -> argparse.ArgumentParser:
    """Returns the argument parser with one subcommand per experiment"""
    parser = argparse.ArgumentParser(
        prog="anisopy",
        description="Q1 finite element experiments for anisotropic singular perturbation problems",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = commands.add_parser(name, help=_HELP[name])
        sub.add_argument("--config", required=True, help="path of the json experiment config")
        sub.add_argument("--out", default=None, help="output directory (config 'output' or ./results)")
        sub.add_argument("--threads", type=int, default=None, help="number of worker threads")
        sub.add_argument("--dump-fields", action="store_true", help="write solution fields and matrices")
        sub.add_argument("--verbose", "-v", action="store_true", help="log at debug level")
        if name == "solve":
            sub.add_argument("--limit", action="store_true", help="solve the limit scheme")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Runs the command line interface and returns the exit code"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args.config)
        overrides = {"kind": COMMANDS[args.command]}
        if args.threads is not None:
            overrides["threads"] = args.threads
        if args.dump_fields:
            overrides["dump_fields"] = True
        if getattr(args, "limit", False):
            overrides["limit"] = True
        config = dataclasses.replace(config, **overrides)
        out = args.out or config.output or "results"
        report = Harness(config).run()
        os.makedirs(out, exist_ok=True)
        write_report(report, os.path.join(out, f"{report.kind}.csv"))
        write_summary(report, os.path.join(out, "summary.txt"))
        if config.dump_fields:
            for k, case in enumerate(report.cases):
                if case.solution is not None:
                    dump_field(case.solution, os.path.join(out, f"{report.kind}_field_{k}.csv"))
                if case.matrix is not None:
                    dump_matrix(case.matrix, os.path.join(out, f"{report.kind}_matrix_{k}.mtx"))
    except Exception as e:
        logger.error(f"{type(e).__name__}: {e}")
        logger.debug("traceback", exc_info=True)
        return EXIT_ERROR
    for note in report.notes:
        logger.info(note)
    logger.info(f"{report.kind}: pass={report.status}, report written to {out}")
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
