"""Commands that need no state: ``verify-enip`` and ``region``."""

import argparse
from typing import Any, Dict

from commands.base_command import BaseCommand
from geometry.separability import m_separable_region, nontrivial_threshold
from quantum.projection import load_spec, standard_egn_spec, verify_spec
from utils.errors import DimensionError, UsageError


class VerifyEnipCommand(BaseCommand):
    """Verify the standard EG_N spec, or a spec file.

    A spec that fails verification still prints its report; the exit code
    is then 1.
    """

    name = "verify-enip"
    help = "verify that a projection spec keeps exactly its surviving strings"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--n", type=int, help="number of qubits of the standard EG_N spec")
        parser.add_argument("--spec", help="spec file (JSON) to verify instead")

    def compute(self, args: argparse.Namespace) -> Dict:
        if args.spec:
            spec = load_spec(args.spec)
            if args.n is not None and args.n != spec.n_qubits:
                raise DimensionError(
                    f"--n {args.n} does not match the spec's {spec.n_qubits} qubits"
                )
        elif args.n is not None:
            spec = standard_egn_spec(args.n)
        else:
            raise UsageError("verify-enip needs --n or --spec")

        report = verify_spec(spec)
        return {**report.to_dict(), "generators": [g.to_list() for g in spec.generators]}

    def is_failure(self, data: Any) -> bool:
        return not data["passed"]


class RegionCommand(BaseCommand):
    """Print the region of M-separable EG_N triples."""

    name = "region"
    help = "print the region of M-separable EG_N triples"

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--n", type=int, required=True, help="number of qubits N")
        parser.add_argument("--m", type=int, required=True, help="number of parties M")

    def compute(self, args: argparse.Namespace) -> Dict:
        if not 2 <= args.m <= args.n:
            raise UsageError(f"--m must satisfy 2 <= M <= {args.n}, got {args.m}")
        region = m_separable_region(args.n, args.m)
        return {
            "n_qubits": args.n,
            "m": args.m,
            "region": region.value,
            "nontrivial": args.m > nontrivial_threshold(args.n),
        }
