"""Self-check evaluator for running the oracle catalogue.

This module provides the evaluation framework that:
- Runs every catalogue check with a fixed seed
- Collects per-check deviations, keeping crashed checks as failures
- Generates a JSON-ready report
- Prints a human-readable summary to standard error
"""

import sys
import time
from datetime import datetime, timezone
from typing import Dict, List, Optional, TextIO

from tabulate import tabulate

from evaluation.checks import CHECKS, CheckResult
from utils.logger import get_logger

logger = get_logger(__name__)


class SelfCheckEvaluator:
    """Runs the oracle checks and summarizes their deviations.

    Example:
        >>> evaluator = SelfCheckEvaluator(seed=0, quick=True)
        >>> report = evaluator.run_evaluation()
        >>> report["passed"]
        True
    """

    def __init__(self, seed: int = 0, quick: bool = False):
        """Initialize evaluator.

        Args:
            seed: Base seed shared by every check
            quick: Run reduced sample counts
        """
        self.seed = seed
        self.quick = quick
        self.results: List[CheckResult] = []

    def run_evaluation(self, checks: Optional[List[Dict]] = None) -> Dict:
        """Run the checks and build the report.

        Args:
            checks: Catalogue entries to run (defaults to CHECKS)

        Returns:
            Report dictionary
        """
        checks = CHECKS if checks is None else checks
        self.results = []

        for i, check in enumerate(checks, 1):
            logger.info(f"[{i}/{len(checks)}] Running check: {check['name']}")
            result = self._evaluate_single_check(check)
            self.results.append(result)

            status = "passed" if result.passed else "FAILED"
            logger.info(
                f"    {status}: max deviation {result.max_deviation:.3e} "
                f"(tolerance {result.tolerance:.1e}, {result.samples} samples)"
            )

        return self._generate_evaluation_report()

    def _evaluate_single_check(self, check: Dict) -> CheckResult:
        """Run one check, turning a crash into a failed result.

        Args:
            check: Catalogue entry

        Returns:
            The check's result
        """
        start_time = time.time()
        try:
            result = check["runner"](self.seed, self.quick)
        except Exception as e:
            logger.error(f"Check {check['name']} raised {type(e).__name__}: {e}")
            result = CheckResult(
                name=check["name"],
                max_deviation=float("inf"),
                tolerance=0.0,
                samples=0,
                error=f"{type(e).__name__}: {e}",
            )
        logger.debug(f"Check {check['name']} took {time.time() - start_time:.2f}s")
        return result

    def _generate_evaluation_report(self) -> Dict:
        """Generate aggregate evaluation report.

        Returns:
            Report dictionary with one entry per check
        """
        failures = [r.name for r in self.results if not r.passed]
        return {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "seed": self.seed,
            "quick": self.quick,
            "total_checks": len(self.results),
            "passed_checks": len(self.results) - len(failures),
            "passed": not failures,
            "failures": failures,
            "checks": {r.name: r.to_dict() for r in self.results},
        }

    def print_summary(self, report: Dict, stream: TextIO = sys.stderr):
        """Print human-readable summary of a report.

        Args:
            report: Report dictionary
            stream: Output stream (standard error by default)
        """
        rows = [
            [
                name,
                "ok" if check["passed"] else "FAIL",
                f"{check['max_deviation']:.3e}",
                f"{check['tolerance']:.1e}",
                check["samples"],
            ]
            for name, check in report["checks"].items()
        ]
        print("=" * 70, file=stream)
        print("SELF-CHECK SUMMARY", file=stream)
        print("=" * 70, file=stream)
        print(
            tabulate(rows, headers=["check", "status", "max deviation", "tolerance", "samples"]),
            file=stream,
        )
        print(
            f"\n{report['passed_checks']}/{report['total_checks']} checks passed "
            f"(seed {report['seed']}, {'quick' if report['quick'] else 'full'})",
            file=stream,
        )
