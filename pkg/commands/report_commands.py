"""Reporting commands: ``ghz-table`` and ``self-check``."""

import argparse
import sys
from typing import Any, Dict

import pandas as pd

from commands.base_command import BaseCommand
from config.settings import settings
from evaluation.evaluator import SelfCheckEvaluator
from optimization.local_unitary import OptimizerConfig, ghz_table
from utils.formatting import round_significant

GHZ_TABLE_COLUMNS = ["n", "d1", "d2", "d3", "abs_sum", "theta", "psi", "phi"]


class GhzTableCommand(BaseCommand):
    """Rotated GHZ_N triples and their frames as CSV."""

    name = "ghz-table"
    help = "print rotated GHZ_N triples as CSV"
    output_format = "csv"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--n-min", type=int, default=3, help="smallest N (default 3)")
        parser.add_argument("--n-max", type=int, default=7, help="largest N (default 7)")
        parser.add_argument(
            "--search",
            action="store_true",
            help="find the frames by optimization instead of the known angles",
        )
        parser.add_argument(
            "--grid",
            type=int,
            default=settings.OPTIMIZER_GRID_POINTS,
            help="grid points per angle when searching",
        )

    def compute(self, args: argparse.Namespace) -> str:
        config = OptimizerConfig(grid_points=args.grid) if args.search else None
        rows = ghz_table(args.n_min, args.n_max, search=args.search, config=config)

        frame = pd.DataFrame(rows, columns=GHZ_TABLE_COLUMNS)
        float_columns = GHZ_TABLE_COLUMNS[1:]
        frame[float_columns] = frame[float_columns].map(round_significant)
        return frame.to_csv(index=False, lineterminator="\n")


class SelfCheckCommand(BaseCommand):
    """Run the oracle checks; exit 1 if any deviation exceeds its tolerance."""

    name = "self-check"
    help = "compare every analytic formula against its brute-force oracle"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
        parser.add_argument("--quick", action="store_true", help="reduced sample counts")

    def compute(self, args: argparse.Namespace) -> Dict:
        evaluator = SelfCheckEvaluator(seed=args.seed, quick=args.quick)
        report = evaluator.run_evaluation()
        evaluator.print_summary(report, stream=sys.stderr)

        return {
            "seed": report["seed"],
            "quick": report["quick"],
            "passed": report["passed"],
            "failures": report["failures"],
            "checks": {
                name: {key: value for key, value in check.items() if key != "name"}
                for name, check in report["checks"].items()
            },
        }

    def is_failure(self, data: Any) -> bool:
        return not data["passed"]
