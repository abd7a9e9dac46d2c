"""Catalogue of oracle checks run by the self-check.

Each check compares an analytic path against its brute-force oracle on
seeded inputs and returns the largest deviation it saw. The ``quick`` flag
shrinks sample counts and qubit ranges for fast smoke runs; the full run
covers the ranges the library guarantees.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from geometry.egn import (
    EgnTriple,
    corner_images,
    distance_to_octahedron,
    egn_state,
    eigenvalue_spectrum,
    height,
    measures,
    robustness,
    trace_distance_measure,
)
from geometry.separability import (
    case_region,
    classify_case,
    enumerate_partitions,
    enumerated_region,
    hadamard_point,
    m_separable_region,
    nontrivial_threshold,
    partition_region,
    physical_region,
    region_check_rules,
    sample_region,
)
from evaluation.oracles import (
    OracleConfig,
    dense_projection_oracle,
    eigen_oracle,
    grid_distance_oracle,
    robustness_decomposition,
    robustness_lp_oracle,
)
from optimization.local_unitary import ghz_table
from quantum.projection import (
    egn_readout_strings,
    project_group_average,
    project_recursive,
    standard_egn_spec,
    verify_spec,
)
from quantum.pauli import PauliString
from quantum.state import random_state

SQRT_HALF = 1 / math.sqrt(2)

# Rotated GHZ_N triples and their |d1| + |d2| + |d3|
TABLE_TRIPLES: Dict[int, tuple] = {
    3: (1.0, -1.0, 1.0),
    4: (SQRT_HALF, SQRT_HALF, 0.0),
    5: (1.0, 1.0, 1.0),
    6: (SQRT_HALF, -SQRT_HALF, 0.0),
    7: (1.0, -1.0, 1.0),
}
TABLE_SUMS: Dict[int, float] = {3: 3.0, 4: math.sqrt(2), 5: 3.0, 6: math.sqrt(2), 7: 3.0}


@dataclass
class CheckResult:
    """Outcome of one check.

    Attributes:
        name: Check name
        max_deviation: Largest deviation between the two paths
        tolerance: Largest deviation allowed
        samples: Number of inputs compared
        error: Exception message if the check crashed
    """

    name: str
    max_deviation: float
    tolerance: float
    samples: int
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.max_deviation <= self.tolerance

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "samples": self.samples,
            "passed": self.passed,
            "error": self.error,
        }


def _physical_triples(n: int, seed: int, count: int) -> List[EgnTriple]:
    points = sample_region(physical_region(n), seed, count)
    return [EgnTriple.from_array(np.clip(p, -1, 1), n) for p in points]


def check_projection_agreement(seed: int, quick: bool) -> CheckResult:
    """Group average, sequential and dense projections agree and are idempotent."""
    sizes = (2, 3) if quick else (2, 3, 4, 5)
    count = 5 if quick else 50
    deviation, samples = 0.0, 0
    for n in sizes:
        spec = standard_egn_spec(n)
        for k in range(count):
            rho = random_state(n, seed + 1000 * n + k)
            by_group = project_group_average(rho, spec)
            by_steps = project_recursive(rho, spec)
            by_tensor = dense_projection_oracle(rho, spec.surviving)
            twice = project_group_average(by_group, spec)
            deviation = max(
                deviation,
                np.max(np.abs(by_group.matrix - by_steps.matrix)),
                np.max(np.abs(by_group.matrix - by_tensor.matrix)),
                np.max(np.abs(by_steps.matrix - by_tensor.matrix)),
                np.max(np.abs(twice.matrix - by_group.matrix)),
            )
            samples += 1
    return CheckResult("projection_agreement", float(deviation), 1e-12, samples)


def check_enip_verification(seed: int, quick: bool) -> CheckResult:
    """The standard spec passes the exhaustive scan with the expected survivors."""
    sizes = range(2, 5) if quick else range(2, 8)
    failures = 0
    for n in sizes:
        report = verify_spec(standard_egn_spec(n))
        expected = {PauliString.identity(n), *egn_readout_strings(n)}
        if not (report.passed and report.method == "exhaustive" and set(report.commutant) == expected):
            failures += 1
    return CheckResult("enip_verification", float(failures), 0.0, len(sizes))


def check_robustness_formula(seed: int, quick: bool) -> CheckResult:
    """Odd-N closed-form robustness matches the LP bisection for every M."""
    count = 10 if quick else 200
    config = OracleConfig()
    deviation, samples = 0.0, 0
    for n in (3, 5, 7):
        for t in _physical_triples(n, seed + n, count):
            for m in range(2, n + 1):
                deviation = max(deviation, abs(robustness(t, m) - robustness_lp_oracle(t, m, config)))
                samples += 1
    return CheckResult("robustness_formula", deviation, 1e-6, samples)


def check_eigenvalue_formula(seed: int, quick: bool) -> CheckResult:
    """Closed-form spectra match the Jacobi eigensolver."""
    count = 5 if quick else 100
    deviation, samples = 0.0, 0
    for n in (3, 4, 5):
        for t in _physical_triples(n, seed + 10 * n, count):
            numeric = np.array(eigen_oracle(egn_state(t).matrix))
            deviation = max(deviation, float(np.max(np.abs(numeric - eigenvalue_spectrum(t)))))
            samples += 1
    return CheckResult("eigenvalue_formula", deviation, 1e-10, samples)


def check_octahedron_distance(seed: int, quick: bool) -> CheckResult:
    """Sort-based octahedron distance matches the grid search."""
    count = 10 if quick else 100
    rng = np.random.default_rng(seed)
    points = np.vstack([
        [[1, 1, 1], [SQRT_HALF, SQRT_HALF, 0]],
        rng.uniform(-1.5, 1.5, (count - 2, 3)),
    ])
    deviation = max(
        abs(distance_to_octahedron(p) - grid_distance_oracle(p)) for p in points
    )
    return CheckResult("octahedron_distance", float(deviation), 1e-4, len(points))


def check_trace_distance_relation(seed: int, quick: bool) -> CheckResult:
    """Odd N: trace-distance measure is half the height above the octahedron."""
    count = 10 if quick else 100
    deviation, samples = 0.0, 0
    for n in (3, 5, 7):
        for t in _physical_triples(n, seed + 7 * n, count):
            expected = max(height(t), 0.0) / 2
            deviation = max(deviation, abs(trace_distance_measure(t, n) - expected))
            samples += 1
    return CheckResult("trace_distance_relation", deviation, 1e-15, samples)


def check_region_rules(seed: int, quick: bool) -> CheckResult:
    """Hadamard products stay inside the rule's region and reach its extremes."""
    count = 500 if quick else 10_000
    outside, extremes_missed, samples = 0, 0.0, 0
    for k, (factors, result) in enumerate(region_check_rules()):
        left = sample_region(factors[0], seed + 2 * k, count)
        right = sample_region(factors[1], seed + 2 * k + 1, count)
        rng = np.random.default_rng(seed + k)
        products = hadamard_point(left[rng.permutation(count)], right)
        outside += int(np.sum(~result.contains(products, tolerance=1e-9)))
        samples += count

        corner_products = hadamard_point(
            factors[0].vertices()[:, None, :], factors[1].vertices()[None, :, :]
        ).reshape(-1, 3)
        for vertex in result.vertices():
            gap = np.min(np.linalg.norm(corner_products - vertex, axis=1))
            extremes_missed = max(extremes_missed, float(gap) - 1e-3)
    deviation = float(outside) + max(extremes_missed, 0.0)
    return CheckResult("region_rules", deviation, 0.0, samples)


def check_case_table(seed: int, quick: bool) -> CheckResult:
    """Reduction by product rules matches the nine-case table."""
    mismatches, samples = 0, 0
    for n in range(2, 10):
        for m in range(2, n + 1):
            for p in enumerate_partitions(n, m):
                if partition_region(p) is not case_region(classify_case(p), n):
                    mismatches += 1
                samples += 1
    return CheckResult("case_table", float(mismatches), 0.0, samples)


def check_separable_region(seed: int, quick: bool) -> CheckResult:
    """Threshold rule for M-separable regions matches exhaustive enumeration."""
    mismatches, samples = 0, 0
    for n in range(2, 10):
        for m in range(2, n + 1):
            if m_separable_region(n, m) is not enumerated_region(n, m):
                mismatches += 1
            samples += 1
    return CheckResult("separable_region", float(mismatches), 0.0, samples)


def check_table_reproduction(seed: int, quick: bool) -> CheckResult:
    """Rotated GHZ_N triples reproduce the known values for N = 3..7."""
    deviation = 0.0
    rows = ghz_table(3, 7)
    for row in rows:
        expected = TABLE_TRIPLES[row["n"]]
        deviation = max(
            deviation,
            *(abs(row[key] - value) for key, value in zip(("d1", "d2", "d3"), expected)),
            abs(row["abs_sum"] - TABLE_SUMS[row["n"]]),
        )
    return CheckResult("table_reproduction", deviation, 1e-9, len(rows))


def check_trivial_regime(seed: int, quick: bool) -> CheckResult:
    """Every measure vanishes for M <= floor(N/2) + 1."""
    worst, samples = 0.0, 0
    for n in range(2, 8):
        for t in _physical_triples(n, seed + 3 * n, 5):
            for m in range(2, nontrivial_threshold(n) + 1):
                result = measures(t, m, warn=False)
                worst = max(worst, result.robustness, result.trace_distance_measure)
                worst += 1.0 if result.nontrivial else 0.0
                samples += 1
    return CheckResult("trivial_regime", worst, 0.0, samples)


def check_mixing_point_base(seed: int, quick: bool) -> CheckResult:
    """Optimal mixing points of odd-N corner triples lie on the base e1 + e2 + e3 = -c."""
    sizes = (3, 5) if quick else (3, 5, 7)
    config = OracleConfig()
    worst, samples = 0.0, 0
    for n in sizes:
        sign = physical_region(n).sign
        corner = sign * np.ones(3)
        for t in _physical_triples(n, seed + 11 * n, 5 if quick else 20):
            if robustness(t, n) < 0.05:
                continue
            image = next(
                i for i in corner_images(t) if np.array_equal(np.sign(i.as_array()), corner)
            )
            parts = robustness_decomposition(image, config)
            worst = max(worst, abs(parts.mixing_sum + sign))
            samples += 1
    return CheckResult("mixing_point_base", worst, 1e-6, samples)


CHECKS: List[Dict] = [
    {"id": 1, "name": "projection_agreement", "runner": check_projection_agreement},
    {"id": 2, "name": "enip_verification", "runner": check_enip_verification},
    {"id": 3, "name": "robustness_formula", "runner": check_robustness_formula},
    {"id": 4, "name": "eigenvalue_formula", "runner": check_eigenvalue_formula},
    {"id": 5, "name": "octahedron_distance", "runner": check_octahedron_distance},
    {"id": 6, "name": "trace_distance_relation", "runner": check_trace_distance_relation},
    {"id": 7, "name": "region_rules", "runner": check_region_rules},
    {"id": 8, "name": "case_table", "runner": check_case_table},
    {"id": 9, "name": "separable_region", "runner": check_separable_region},
    {"id": 10, "name": "table_reproduction", "runner": check_table_reproduction},
    {"id": 11, "name": "trivial_regime", "runner": check_trivial_regime},
    {"id": 12, "name": "mixing_point_base", "runner": check_mixing_point_base},
]


def get_check_by_name(name: str) -> Callable[[int, bool], CheckResult]:
    """Runner of a catalogue entry, by name."""
    for check in CHECKS:
        if check["name"] == name:
            return check["runner"]
    raise KeyError(name)
