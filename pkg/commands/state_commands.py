"""Commands that read a state file: ``project`` and ``bound``."""

import argparse
from typing import Dict

from commands.base_command import BaseCommand
from config.settings import settings
from optimization.local_unitary import (
    LocalUnitaryParams,
    OptimizerConfig,
    bound_report,
    optimize,
)
from quantum.projection import (
    egn_readout_strings,
    load_spec,
    project_group_average,
    project_recursive,
    standard_egn_spec,
)
from quantum.state import correlation, load_state
from utils.errors import ArgumentError, UsageError


class ProjectCommand(BaseCommand):
    """Project a state onto its EG_N (or custom spec) form.

    Prints every surviving correlation of the projected state, zeros
    included, and for the standard spec also its triple.
    """

    name = "project"
    help = "project a state file onto EG_N states and print the surviving correlations"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--state", required=True, help="state file (JSON)")
        parser.add_argument("--spec", help="custom spec file; defaults to the standard EG_N spec")
        parser.add_argument(
            "--method",
            choices=("group", "recursive"),
            default="group",
            help="group average over all subset-products, or one generator at a time",
        )

    def compute(self, args: argparse.Namespace) -> Dict:
        rho = load_state(args.state)
        spec = load_spec(args.spec) if args.spec else standard_egn_spec(rho.n_qubits)
        project = project_group_average if args.method == "group" else project_recursive
        projected = project(rho, spec)

        data = {
            "n_qubits": rho.n_qubits,
            "spec": spec.label,
            "method": args.method,
            "tensor": [
                {"alpha": alpha.to_list(), "value": correlation(projected, alpha)}
                for alpha in sorted(spec.surviving)
            ],
        }
        if args.spec is None:
            strings = egn_readout_strings(rho.n_qubits)
            data["triple"] = {
                key: correlation(projected, s) for key, s in zip(("d1", "d2", "d3"), strings)
            }
        return data


class BoundCommand(BaseCommand):
    """Certified lower bounds on M-inseparable entanglement of a state."""

    name = "bound"
    help = "lower-bound the M-inseparable entanglement of a state file"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--state", required=True, help="state file (JSON)")
        parser.add_argument("--m", type=int, required=True, help="number of parties M, 2 <= M <= N")
        parser.add_argument(
            "--no-optimize",
            action="store_true",
            help="evaluate the identity frame only",
        )
        parser.add_argument(
            "--grid",
            type=int,
            default=settings.OPTIMIZER_GRID_POINTS,
            help="grid points per angle",
        )
        parser.add_argument("--seed", type=int, default=0, help="seed for random per-qubit starts")
        frame = parser.add_mutually_exclusive_group()
        frame.add_argument(
            "--symmetric",
            dest="symmetric",
            action="store_true",
            default=True,
            help="one shared unitary on every qubit (default)",
        )
        frame.add_argument(
            "--per-qubit",
            dest="symmetric",
            action="store_false",
            help="refine each qubit's unitary separately",
        )
        parser.add_argument(
            "--objective",
            choices=("abs_sum", "octahedron_distance"),
            default="abs_sum",
            help="quantity maximized by the search",
        )

    def compute(self, args: argparse.Namespace) -> Dict:
        rho = load_state(args.state)
        n = rho.n_qubits
        if n < 2:
            raise ArgumentError(f"EG_N bounds need at least 2 qubits, got {n}")
        if not 2 <= args.m <= n:
            raise UsageError(f"M must satisfy 2 <= M <= {n}, got {args.m}")
        if args.grid < 2:
            raise UsageError(f"--grid needs at least 2 points, got {args.grid}")

        if args.no_optimize:
            report = bound_report(rho, LocalUnitaryParams.identity(n), objective=args.objective)
        else:
            config = OptimizerConfig(
                grid_points=args.grid,
                seed=args.seed,
                symmetric=args.symmetric,
                objective=args.objective,
            )
            report = optimize(rho, config)

        result = report.bounds[args.m]
        data = {
            "n_qubits": n,
            "m": args.m,
            "triple": report.best_triple.to_dict(),
            "abs_sum": report.abs_sum,
            "height": result.height,
            "nontrivial": result.nontrivial,
            "robustness_lower_bound": result.robustness,
            "trace_distance_lower_bound": result.trace_distance_measure,
            "params": report.best_params.to_dict(),
            "optimized": not args.no_optimize,
            "evaluations": report.evaluations,
        }
        if result.warning:
            data["warning"] = result.warning
        return data
