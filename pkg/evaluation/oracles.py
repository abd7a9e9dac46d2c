"""Brute-force counterparts of the analytic shortcuts.

Each oracle recomputes a quantity the library derives in closed form, by a
route that shares as little with it as possible:

- dense_projection_oracle: zero the non-surviving tensor entries directly
- robustness_lp_oracle: bisection over a vertex-mixture feasibility LP
- eigen_oracle: cyclic Jacobi rotations on the full matrix
- grid_distance_oracle: dense grid over the octahedron's faces plus zoom
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import linprog

from config.settings import settings
from geometry.egn import (
    EgnTriple,
    ball_robustness_feasible,
    check_measure_arguments,
    project_onto_octahedron,
)
from geometry.separability import RegionLabel, nontrivial_threshold, physical_region
from quantum.pauli import PauliString
from quantum.state import CorrelationTensor, DensityMatrix, correlation, from_bloch
from utils.errors import ArgumentError
from utils.logger import get_logger

logger = get_logger(__name__)


class OracleConfig(BaseModel):
    """Tolerances of the oracles.

    Attributes:
        bisection_tolerance: Absolute tolerance of the robustness bisection
        bisection_upper: Upper end of the bisection bracket
        lp_tolerance: Primal feasibility tolerance of the LP
        grid_resolution: Grid points per edge of each octahedron face
    """

    bisection_tolerance: float = Field(default_factory=lambda: settings.BISECTION_TOLERANCE, gt=0)
    bisection_upper: float = Field(default_factory=lambda: settings.BISECTION_UPPER, gt=0)
    lp_tolerance: float = Field(default_factory=lambda: settings.ORACLE_LP_TOLERANCE, gt=0)
    grid_resolution: int = Field(default_factory=lambda: settings.ORACLE_GRID_RESOLUTION, ge=2)


# =============================================================================
# PROJECTION
# =============================================================================


def dense_projection_oracle(
    rho: DensityMatrix,
    surviving: Iterable[PauliString]
) -> DensityMatrix:
    """Rebuild a state from its surviving correlations only.

    Returns:
        2^-N sum_{alpha in surviving} T_alpha P_alpha
    """
    values = {alpha: correlation(rho, alpha) for alpha in surviving}
    return from_bloch(CorrelationTensor(rho.n_qubits, values))


# =============================================================================
# ROBUSTNESS
# =============================================================================


@dataclass(frozen=True)
class RobustnessDecomposition:
    """Optimal mixture d = (1 + s) x - s e behind a robustness value.

    Attributes:
        s: Robustness found by bisection
        separable: Point x of the octahedron
        mixing: Point e of the physical region (None when s = 0)
    """

    s: float
    separable: np.ndarray
    mixing: Optional[np.ndarray]

    @property
    def mixing_sum(self) -> Optional[float]:
        """e1 + e2 + e3 of the mixing point."""
        return None if self.mixing is None else float(self.mixing.sum())


def _mixture_lp(
    d: Tuple[float, float, float],
    sign: int,
    s: float,
    tolerance: float
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    octahedron = RegionLabel.OCTAHEDRON.vertices()
    tetra = RegionLabel.tetra(sign).vertices()
    # rows: (1+s) O^T mu - s T^T nu = d, sum(mu) = 1, sum(nu) = 1
    a_eq = np.zeros((5, len(octahedron) + len(tetra)))
    a_eq[:3, :len(octahedron)] = (1 + s) * octahedron.T
    a_eq[:3, len(octahedron):] = -s * tetra.T
    a_eq[3, :len(octahedron)] = 1
    a_eq[4, len(octahedron):] = 1
    b_eq = np.r_[np.asarray(d, dtype=float), 1.0, 1.0]

    result = linprog(
        np.zeros(a_eq.shape[1]),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=(0, None),
        method="highs",
        options={"primal_feasibility_tolerance": tolerance},
    )
    if result.status != 0:
        return None
    weights = result.x
    return octahedron.T @ weights[:len(octahedron)], tetra.T @ weights[len(octahedron):]


def robustness_feasible(t: EgnTriple, s: float, config: Optional[OracleConfig] = None) -> bool:
    """Whether mixing weight s brings the triple into the octahedron.

    True when d = (1 + s) x - s e for some octahedron point x and some
    physical point e. Odd N is decided by a feasibility LP over vertex
    weights, even N by the distance test for the ball.
    """
    config = config or OracleConfig()
    if s < 0:
        raise ArgumentError(f"Mixing weight must be non-negative, got {s}")
    d = t.as_array()
    if s == 0:
        return bool(RegionLabel.OCTAHEDRON.contains(d))
    if t.n_qubits % 2 == 0:
        return ball_robustness_feasible(d, s)
    sign = physical_region(t.n_qubits).sign
    return _mixture_lp(tuple(d), sign, s, config.lp_tolerance) is not None


@lru_cache(maxsize=4096)
def _bisect_robustness(
    d: Tuple[float, float, float],
    n_qubits: int,
    tolerance: float,
    upper: float,
    lp_tolerance: float
) -> float:
    t = EgnTriple(*d, n_qubits)
    config = OracleConfig(
        bisection_tolerance=tolerance,
        bisection_upper=upper,
        lp_tolerance=lp_tolerance,
    )
    lo, hi = 0.0, upper
    if robustness_feasible(t, 0.0, config):
        return 0.0
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if robustness_feasible(t, mid, config):
            hi = mid
        else:
            lo = mid
    return hi


def robustness_lp_oracle(t: EgnTriple, m: int, config: Optional[OracleConfig] = None) -> float:
    """Robustness of M-inseparability by bisection on feasibility.

    Args:
        t: Physical triple
        m: Number of parties M
        config: Oracle tolerances

    Returns:
        0 when M <= floor(N/2) + 1, else the least feasible s

    Raises:
        ArgumentError: If M is out of range
        DomainError: If the triple is not physical
    """
    config = config or OracleConfig()
    check_measure_arguments(t, m)
    if m <= nontrivial_threshold(t.n_qubits):
        return 0.0
    return _bisect_robustness(
        (t.d1, t.d2, t.d3),
        t.n_qubits,
        config.bisection_tolerance,
        config.bisection_upper,
        config.lp_tolerance,
    )


def robustness_decomposition(
    t: EgnTriple,
    config: Optional[OracleConfig] = None
) -> RobustnessDecomposition:
    """The separable and mixing points at the bisected robustness.

    The robustness is taken for an M above the threshold; the points satisfy
    d = (1 + s) x - s e and are therefore collinear with the triple.
    """
    config = config or OracleConfig()
    s = robustness_lp_oracle(t, t.n_qubits, config) if t.n_qubits > 2 else 0.0
    d = t.as_array()
    if s == 0:
        return RobustnessDecomposition(0.0, project_onto_octahedron(d), None)

    if t.n_qubits % 2 == 0:
        separable = project_onto_octahedron(d / (1 + s))
        mixing = ((1 + s) * separable - d) / s
        return RobustnessDecomposition(s, separable, mixing)

    sign = physical_region(t.n_qubits).sign
    solution = _mixture_lp(tuple(d), sign, s, config.lp_tolerance)
    if solution is None:
        raise ArgumentError(f"Mixture LP infeasible at the bisected s = {s}")
    separable, mixing = solution
    return RobustnessDecomposition(s, separable, mixing)


# =============================================================================
# EIGENVALUES
# =============================================================================


def _round_robin(n: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """n - 1 rounds of n/2 disjoint index pairs covering every pair once."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        p = np.array(players[:n // 2])
        q = np.array(players[n // 2:][::-1])
        rounds.append((p, q))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def eigen_oracle(
    matrix: np.ndarray,
    tolerance: float = 1e-14,
    max_sweeps: int = 60
) -> List[float]:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Each round zeroes the off-diagonal entries of n/2 disjoint index pairs at
    once; a sweep is n - 1 rounds. Odd dimensions get a decoupled dummy
    index that is dropped at the end.

    Args:
        matrix: Hermitian matrix of dimension at most 128
        tolerance: Stop when the off-diagonal Frobenius norm falls below
            tolerance times the matrix norm
        max_sweeps: Sweep cap

    Returns:
        Eigenvalues sorted ascending

    Raises:
        ArgumentError: If the matrix is not square, larger than 128, or not
            Hermitian within 1e-9
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ArgumentError(f"Expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > 128:
        raise ArgumentError(f"Jacobi oracle handles dimension <= 128, got {n}")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > 1e-9:
        raise ArgumentError("Matrix is not Hermitian")
    if n == 1:
        return [float(a[0, 0].real)]

    a = (a + a.conj().T) / 2
    padded = n % 2 == 1
    if padded:
        a = np.pad(a, ((0, 1), (0, 1)))
    size = a.shape[0]
    rounds = _round_robin(size)
    scale = max(np.linalg.norm(a), 1e-300)

    for sweep in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tolerance * scale:
            break
        for p, q in rounds:
            b = a[p, q]
            magnitude = np.abs(b)
            phase = np.exp(-1j * np.angle(b))
            theta = 0.5 * np.arctan2(2 * magnitude, (a[p, p] - a[q, q]).real)
            theta = np.where(magnitude > 1e-300, theta, 0.0)
            c, s = np.cos(theta), np.sin(theta)

            rotation = np.eye(size, dtype=complex)
            rotation[p, p] = c
            rotation[p, q] = -s
            rotation[q, p] = s * phase
            rotation[q, q] = c * phase
            a = rotation.conj().T @ a @ rotation
    logger.debug(f"Jacobi finished after {sweep + 1} sweeps on dimension {n}")

    values = np.diag(a).real
    if padded:
        values = values[:-1]
    return sorted(float(v) for v in values)


# =============================================================================
# DISTANCE
# =============================================================================


_FACE_SIGNS = np.array([
    [s1, s2, s3] for s1 in (1, -1) for s2 in (1, -1) for s3 in (1, -1)
], dtype=float)


def _face_points(u: np.ndarray, v: np.ndarray, signs: np.ndarray) -> np.ndarray:
    return np.column_stack([u, v, 1 - u - v]) * signs


def grid_distance_oracle(p: np.ndarray, config: Optional[OracleConfig] = None) -> float:
    """Distance from a point to the unit octahedron by exhaustive grid search.

    Every face is covered by a barycentric grid of ``config.grid_resolution``
    points per edge; the best grid point is then polished by repeatedly
    halving a 21 x 21 local grid around it.
    """
    config = config or OracleConfig()
    point = np.asarray(p, dtype=float)
    if np.abs(point).sum() <= 1:
        return 0.0

    resolution = config.grid_resolution
    i, j = np.indices((resolution + 1, resolution + 1)).reshape(2, -1)
    keep = i + j <= resolution
    u, v = i[keep] / resolution, j[keep] / resolution

    best = (np.inf, None, 0.0, 0.0)
    for signs in _FACE_SIGNS:
        distances = np.linalg.norm(_face_points(u, v, signs) - point, axis=1)
        k = int(np.argmin(distances))
        if distances[k] < best[0]:
            best = (float(distances[k]), signs, float(u[k]), float(v[k]))

    distance, signs, u0, v0 = best
    window = 1.0 / resolution
    offsets = np.linspace(-1, 1, 21)
    for _ in range(30):
        du, dv = np.meshgrid(offsets * window, offsets * window)
        uu, vv = (u0 + du).ravel(), (v0 + dv).ravel()
        inside = (uu >= 0) & (vv >= 0) & (uu + vv <= 1)
        uu, vv = uu[inside], vv[inside]
        distances = np.linalg.norm(_face_points(uu, vv, signs) - point, axis=1)
        k = int(np.argmin(distances))
        if distances[k] < distance:
            distance, u0, v0 = float(distances[k]), float(uu[k]), float(vv[k])
        window /= 2
    return distance
