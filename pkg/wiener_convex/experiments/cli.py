"""
The ``wiener-convex`` command line.

.. code::

    wiener-convex solve --config experiment.yaml --out results/ --seed 3 --format json,csv
    wiener-convex verify --seed 0

Exit status: 0 on success, 1 on an invalid config or input, 2 when a property check fails.
"""
import argparse
import sys
from logging import getLogger
from pathlib import Path
from typing import List, Optional, Sequence

import yaml
from tabulate import tabulate

from wiener_convex.experiments.config import TASKS, VERIFY_ALL, ExperimentConfig
from wiener_convex.experiments.experiment_run import EXIT_INVALID, ExperimentRun

_LOGGER = getLogger(__name__)

COMMANDS = {task: task for task in TASKS if task != VERIFY_ALL}
COMMANDS["verify"] = VERIFY_ALL


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the invalid input status, not argparse's 2, which means a failed check here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _formats(value: str) -> List[str]:
    return [f.strip() for f in value.split(",") if f.strip()]


def build_parser() -> argparse.ArgumentParser:
    """The argument parser with one subcommand per task."""
    parser = _Parser(prog="wiener-convex", description="Convex variational problems on Gaussian space.")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=f"Run the {COMMANDS[command]} task.")
        sub.add_argument("--config", "-c", type=str, default=None, help="The YAML experiment config")
        sub.add_argument("--out", "-o", type=str, default=None, help="The directory the artifacts are written to")
        sub.add_argument("--seed", "-s", type=int, default=None, help="Overrides the seed of the config")
        sub.add_argument(
            "--format",
            "-f",
            type=_formats,
            default=None,
            help="Comma separated artifact formats among csv, json and svg",
        )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse the arguments, run the task and print the check summary.

    :param argv: The arguments, ``sys.argv[1:]`` when None.
    :return: The exit status.
    """
    args = build_parser().parse_args(argv)
    task = COMMANDS[args.command]
    base_path = None
    try:
        if args.config:
            config = ExperimentConfig.create_from_yaml(args.config)
            base_path = Path(args.config).resolve().parent
        else:
            config = ExperimentConfig()
        config.task = task
        run = ExperimentRun(
            config,
            output_dir=args.out,
            formats=args.format,
            seed=args.seed,
            base_path=base_path,
        )
    except (ValueError, FileNotFoundError, yaml.YAMLError) as e:
        _LOGGER.error(f"{task} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID

    print(tabulate(run.summary_rows(), headers=["check", "passed", "measured", "tolerance"]))
    print(f"\nArtifacts: {run.output_dir}")
    if not run.passed:
        failed = ", ".join(c.name for c in run.checks if not c.passed)
        print(f"Failed checks: {failed}", file=sys.stderr)
    return run.exit_code


def run_cli():
    """The console script entry point."""
    sys.exit(main())
