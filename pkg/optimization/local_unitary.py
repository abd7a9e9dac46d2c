"""Tighten the EG_N lower bound by rotating each qubit before projecting.

Local unitaries do not change how entangled a state is, so every frame
U = U_1 (x) ... (x) U_N gives a valid bound through the triple of
U rho U^dagger. The search maximizes |d1| + |d2| + |d3| of that triple over
single-qubit SU(2) angles: a coarse grid over one shared angle triple, local
Nelder-Mead refinement of the best grid points, and an optional per-qubit
refinement seeded by the shared optimum.

The search runs on the canonical Pauli frame of the state (see
``pauli_frame``), so states that differ only by local Pauli factors get the
same bound.
"""

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import minimize

from config.settings import settings
from geometry.egn import (
    TRIVIAL_N2_WARNING,
    EgnTriple,
    MeasureResult,
    distance_to_octahedron,
    measures,
    triple_of,
)
from quantum.pauli import PAULI_MATRICES, index_array
from quantum.state import DensityMatrix, apply_local_unitary, correlation_array, ghz
from utils.errors import ArgumentError
from utils.logger import get_logger

logger = get_logger(__name__)

Angles = Tuple[float, float, float]

TWO_PI = 2 * math.pi

_ANGLE_EPS = 1e-12

# (x bit, z bit) -> Pauli index
_PAULI_OF_BITS = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}


def su2(theta: float, psi: float, phi: float) -> np.ndarray:
    """Single-qubit unitary with determinant 1 from three angles.

    Args:
        theta: Polar rotation angle
        psi: First phase angle
        phi: Second phase angle

    Returns:
        [[cos(theta/2) e^{-i(psi+phi)/2}, -i sin(theta/2) e^{-i(phi-psi)/2}],
         [-i sin(theta/2) e^{i(phi-psi)/2}, cos(theta/2) e^{i(psi+phi)/2}]]

    Example:
        >>> np.allclose(su2(0, 0, 0), np.eye(2))
        True
    """
    if not all(math.isfinite(a) for a in (theta, psi, phi)):
        raise ArgumentError(f"Angles must be finite, got {(theta, psi, phi)}")
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    plus = np.exp(-0.5j * (psi + phi))
    minus = np.exp(-0.5j * (phi - psi))
    return np.array([
        [c * plus, -1j * s * minus],
        [-1j * s * np.conj(minus), c * np.conj(plus)],
    ])


@dataclass(frozen=True)
class LocalUnitaryParams:
    """Angle triples (theta, psi, phi) of a product of single-qubit unitaries.

    Attributes:
        angles: One triple per qubit, qubit 1 first
        symmetric: Whether every qubit shares one triple
    """

    angles: Tuple[Angles, ...]
    symmetric: bool = False

    def __post_init__(self):
        angles = tuple(tuple(float(a) for a in triple) for triple in self.angles)
        if not angles or any(len(triple) != 3 for triple in angles):
            raise ArgumentError("Each qubit needs exactly three angles")
        if not all(math.isfinite(a) for triple in angles for a in triple):
            raise ArgumentError("Angles must be finite")
        if self.symmetric and len(set(angles)) > 1:
            raise ArgumentError("Symmetric parameters must share one angle triple")
        object.__setattr__(self, "angles", angles)

    @classmethod
    def shared(cls, theta: float, psi: float, phi: float, n_qubits: int) -> "LocalUnitaryParams":
        """The same angles on every qubit."""
        return cls(((theta, psi, phi),) * n_qubits, symmetric=True)

    @classmethod
    def identity(cls, n_qubits: int) -> "LocalUnitaryParams":
        return cls.shared(0.0, 0.0, 0.0, n_qubits)

    @classmethod
    def from_vector(cls, x: Sequence[float], n_qubits: int, symmetric: bool) -> "LocalUnitaryParams":
        """Unpack a flat optimizer vector (3 entries if symmetric, else 3N)."""
        x = [float(v) for v in x]
        if symmetric:
            return cls.shared(x[0], x[1], x[2], n_qubits)
        return cls(tuple(tuple(x[3 * k:3 * k + 3]) for k in range(n_qubits)))

    @property
    def n_qubits(self) -> int:
        return len(self.angles)

    def to_vector(self) -> np.ndarray:
        if self.symmetric:
            return np.array(self.angles[0])
        return np.array(self.angles).ravel()

    def unitaries(self) -> List[np.ndarray]:
        return [su2(*triple) for triple in self.angles]

    def to_dict(self) -> Dict:
        payload = {
            "symmetric": self.symmetric,
            "angles": [list(triple) for triple in self.angles],
        }
        if self.symmetric:
            payload.update(zip(("theta", "psi", "phi"), self.angles[0]))
        return payload


def _canonical_triple(theta: float, psi: float, phi: float) -> Angles:
    theta = theta % TWO_PI
    if theta > math.pi:
        # U(2pi - theta, psi + pi, phi + pi) = -U(theta, psi, phi)
        theta, psi, phi = TWO_PI - theta, psi + math.pi, phi + math.pi
    psi, phi = psi % TWO_PI, phi % TWO_PI
    # tiny negative angles round up to 2pi under %
    return (
        theta,
        0.0 if psi >= TWO_PI else psi,
        0.0 if phi >= TWO_PI else phi,
    )


def canonicalize(params: LocalUnitaryParams) -> LocalUnitaryParams:
    """Map angles into theta in [0, pi], psi and phi in [0, 2pi).

    Each unitary changes at most by a global sign, so the conjugation it
    performs is unchanged.
    """
    return LocalUnitaryParams(
        tuple(_canonical_triple(*triple) for triple in params.angles),
        symmetric=params.symmetric,
    )


def su2_angles(u: np.ndarray) -> Angles:
    """Canonical angles of a 2x2 unitary, ignoring its global phase.

    ``su2(*su2_angles(u))`` equals u up to a phase factor.
    """
    u = np.asarray(u, dtype=complex)
    u = u / np.sqrt(np.linalg.det(u))
    a, b = u[0, 0], u[0, 1]
    theta = 2 * math.atan2(abs(b), abs(a))
    total = -2 * float(np.angle(a)) if abs(a) > _ANGLE_EPS else 0.0  # psi + phi
    difference = -2 * float(np.angle(1j * b)) if abs(b) > _ANGLE_EPS else 0.0  # phi - psi
    return _canonical_triple(theta, (total - difference) / 2, (total + difference) / 2)


def pauli_frame(rho: DensityMatrix) -> Tuple[int, ...]:
    """Pauli indices P = (p_1, ..., p_N) that bring rho to its canonical frame.

    Conjugating by a product of Pauli matrices only flips signs of
    correlations, and the flip of T_alpha is linear over GF(2) in the bits
    of alpha. Walking the support in lexicographic order, every string
    independent of the earlier ones fixes one sign to be positive; P solves
    that system with its free bits at zero. Two states that differ by a
    Pauli frame get the same canonical state P rho P.

    Args:
        rho: N-qubit state

    Returns:
        One index in {0, 1, 2, 3} per qubit, all zero when rho is canonical
    """
    n = rho.n_qubits
    values = correlation_array(rho).ravel()
    support = np.flatnonzero(np.abs(values) > settings.FRAME_SUPPORT_TOLERANCE)
    strings = index_array(n)[support]
    weights = np.left_shift(1, np.arange(n, dtype=np.int64))
    x = ((strings == 1) | (strings == 2)).astype(np.int64) @ weights
    z = ((strings == 2) | (strings == 3)).astype(np.int64) @ weights

    # pivot bit -> (row, sign bit), kept in reduced row echelon form
    basis: Dict[int, Tuple[int, int]] = {}
    for row, value in zip((x | (z << n)).tolist(), values[support].tolist()):
        sign = int(value < 0)
        for pivot, (basis_row, basis_sign) in basis.items():
            if row >> pivot & 1:
                row ^= basis_row
                sign ^= basis_sign
        if not row:
            continue
        pivot = row.bit_length() - 1
        for other, (basis_row, basis_sign) in list(basis.items()):
            if basis_row >> pivot & 1:
                basis[other] = (basis_row ^ row, basis_sign ^ sign)
        basis[pivot] = (row, sign)
        if len(basis) == 2 * n:
            break

    solution = sum(sign << pivot for pivot, (_, sign) in basis.items())
    # bit k of the solution is the z bit of p_k, bit n + k its x bit
    return tuple(
        _PAULI_OF_BITS[(solution >> (n + k) & 1, solution >> k & 1)]
        for k in range(n)
    )


def _with_frame(params: LocalUnitaryParams, frame: Sequence[int]) -> LocalUnitaryParams:
    """Angles of U_k sigma_{p_k}, the frame U found for P rho P applied to rho."""
    if not any(frame):
        return params
    return LocalUnitaryParams(tuple(
        su2_angles(su2(*triple) @ PAULI_MATRICES[p])
        for triple, p in zip(params.angles, frame)
    ))


def _readout_operators(n_qubits: int) -> List[List[int]]:
    return [
        [1] * (n_qubits - 1) + [2],
        [2] * n_qubits,
        [3] * (n_qubits - 1) + [0],
    ]


def _rotated_correlations(rho: DensityMatrix, unitaries: Sequence[np.ndarray]) -> np.ndarray:
    """The three readout correlations of U rho U^dagger, rotating operators only."""
    # Tr(U rho U^dag P) = Tr(rho U^dag P U) and U^dag P U factorizes per qubit
    rotated = [
        [u.conj().T @ PAULI_MATRICES[a] @ u for a in range(4)]
        for u in unitaries
    ]
    values = []
    for indices in _readout_operators(rho.n_qubits):
        operator = reduce(np.kron, (rotated[k][a] for k, a in enumerate(indices)))
        values.append(np.sum(rho.matrix * operator.T).real)
    return np.array(values)


def rotated_triple(
    rho: DensityMatrix,
    params: LocalUnitaryParams,
    method: str = "operator"
) -> EgnTriple:
    """Triple of the rotated state U rho U^dagger.

    Args:
        rho: N-qubit state
        params: Angles for the N qubits
        method: "operator" rotates the three readout strings; "state"
            rotates the state and reads its triple. Both agree.

    Returns:
        The rotated triple

    Raises:
        ArgumentError: If the qubit counts differ or the method is unknown
    """
    if params.n_qubits != rho.n_qubits:
        raise ArgumentError(
            f"Parameters cover {params.n_qubits} qubits, state has {rho.n_qubits}"
        )
    if method == "state":
        return triple_of(apply_local_unitary(rho, params.unitaries()))
    if method == "operator":
        return EgnTriple.from_array(_rotated_correlations(rho, params.unitaries()), rho.n_qubits)
    raise ArgumentError(f"Unknown rotation method {method!r}")


def table_angles(n: int) -> Angles:
    """Shared angles that rotate GHZ_N onto its best EG_N triple.

    theta = 0 and psi = phi = pi/(4N) for odd N, pi/(8N) for even N.
    """
    if n < 2:
        raise ArgumentError(f"GHZ states need at least 2 qubits, got {n}")
    angle = math.pi / (4 * n) if n % 2 else math.pi / (8 * n)
    return (0.0, angle, angle)


TABLE_ANGLES: Dict[int, Angles] = {n: table_angles(n) for n in range(3, 8)}


class OptimizerConfig(BaseModel):
    """Search settings for ``optimize``.

    Attributes:
        grid_points: Points per angle of the shared-angle grid
        top_k: Grid points refined by Nelder-Mead
        max_iterations: Nelder-Mead iteration cap per start
        tolerance: Nelder-Mead xatol and fatol
        symmetric: If False, a per-qubit refinement stage follows
        include_table_seeds: Add the known GHZ angles as refinement starts
        canonical_frame: Search from the canonical Pauli frame of the state
        objective: "abs_sum", or "octahedron_distance" (even N only)
        seed: Seed for the random per-qubit starts
        random_starts: Number of random per-qubit starts
    """

    grid_points: int = Field(default_factory=lambda: settings.OPTIMIZER_GRID_POINTS, ge=2)
    top_k: int = Field(default_factory=lambda: settings.OPTIMIZER_TOP_K, ge=1)
    max_iterations: int = Field(default_factory=lambda: settings.OPTIMIZER_MAX_ITERATIONS, ge=1)
    tolerance: float = Field(default_factory=lambda: settings.OPTIMIZER_TOLERANCE, gt=0)
    symmetric: bool = True
    include_table_seeds: bool = True
    canonical_frame: bool = True
    objective: Literal["abs_sum", "octahedron_distance"] = "abs_sum"
    seed: int = 0
    random_starts: int = Field(default=2, ge=0)


@dataclass(frozen=True)
class BoundReport:
    """Best frame found and the bounds it certifies.

    Attributes:
        best_params: Canonical angles of the best frame
        best_triple: Triple of the state rotated by best_params
        abs_sum: |d1| + |d2| + |d3| of best_triple, recomputed from best_params
        bounds: Measures of best_triple for every M in 2..N
        objective: Objective the search maximized
        evaluations: Number of objective evaluations
    """

    best_params: LocalUnitaryParams
    best_triple: EgnTriple
    abs_sum: float
    bounds: Dict[int, MeasureResult] = field(default_factory=dict)
    objective: str = "abs_sum"
    evaluations: int = 0

    def to_dict(self) -> Dict:
        return {
            "params": self.best_params.to_dict(),
            "triple": self.best_triple.to_dict(),
            "abs_sum": self.abs_sum,
            "objective": self.objective,
            "evaluations": self.evaluations,
            "bounds": {str(m): result.to_dict() for m, result in sorted(self.bounds.items())},
        }


def bound_report(
    rho: DensityMatrix,
    params: LocalUnitaryParams,
    objective: str = "abs_sum",
    evaluations: int = 0
) -> BoundReport:
    """Certify the bounds of one frame by recomputing its triple."""
    params = canonicalize(params)
    triple = rotated_triple(rho, params)
    bounds = {m: measures(triple, m, warn=False) for m in range(2, rho.n_qubits + 1)}
    if rho.n_qubits == 2:
        logger.warning(TRIVIAL_N2_WARNING)
    return BoundReport(
        best_params=params,
        best_triple=triple,
        abs_sum=triple.abs_sum,
        bounds=bounds,
        objective=objective,
        evaluations=evaluations,
    )


def _objective(
    rho: DensityMatrix,
    symmetric: bool,
    objective: str
) -> Callable[[np.ndarray], float]:
    n = rho.n_qubits
    use_distance = objective == "octahedron_distance" and n % 2 == 0

    def value(x: np.ndarray) -> float:
        params = LocalUnitaryParams.from_vector(x, n, symmetric)
        d = _rotated_correlations(rho, params.unitaries())
        return distance_to_octahedron(d) if use_distance else float(np.abs(d).sum())

    return value


def _rank_key(value: float, x: np.ndarray) -> Tuple:
    canonical = tuple(itertools.chain.from_iterable(
        _canonical_triple(*x[k:k + 3]) for k in range(0, len(x), 3)
    ))
    return (-round(value, 10), canonical)


def _refine(fun: Callable, x0: np.ndarray, config: OptimizerConfig) -> Tuple[np.ndarray, float, int]:
    result = minimize(
        lambda x: -fun(x),
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": config.max_iterations,
            "xatol": config.tolerance,
            "fatol": config.tolerance,
        },
    )
    return np.asarray(result.x), -float(result.fun), int(result.nfev)


def _shared_grid(fun: Callable[[np.ndarray], float], points: int) -> List[Tuple[float, np.ndarray]]:
    thetas = np.linspace(0, math.pi, points)
    step = TWO_PI / points
    psis = np.arange(points) * step
    # phi sits half a step off psi, so psi + phi runs over odd multiples of pi / points
    phis = psis + step / 2
    return [
        (fun(x), x)
        for x in (np.array(angles) for angles in itertools.product(thetas, psis, phis))
    ]


def _select_starts(grid: List[Tuple[float, np.ndarray]], top_k: int) -> List[np.ndarray]:
    """Refinement starts from the grid.

    The best ``top_k`` points with pairwise distinct objective values, then
    the best point on each of ``top_k`` evenly spaced theta levels (theta = 0
    and theta = pi included) whose value is not taken yet.
    """
    ranked = sorted(grid, key=lambda item: _rank_key(*item))
    starts: List[np.ndarray] = []
    seen = set()

    def take(value: float, x: np.ndarray) -> None:
        key = round(value, 8)
        if key not in seen:
            seen.add(key)
            starts.append(x)

    for value, x in ranked:
        if len(starts) == top_k:
            break
        take(value, x)

    thetas = sorted({float(x[0]) for _, x in grid})
    picks = np.linspace(0, len(thetas) - 1, min(top_k, len(thetas))).round().astype(int)
    for level in (thetas[i] for i in np.unique(picks)):
        take(*next(item for item in ranked if item[1][0] == level))
    return starts


def optimize(rho: DensityMatrix, config: Optional[OptimizerConfig] = None) -> BoundReport:
    """Search local frames for the largest certified EG_N bound.

    The state is first moved to its canonical Pauli frame. The shared-angle
    grid covers theta in [0, pi] and psi, phi in [0, 2pi); the identity frame
    is evaluated separately. Starts picked by ``_select_starts`` (and the
    known GHZ angles, if enabled) are refined with Nelder-Mead; with
    ``config.symmetric`` False a per-qubit stage starts from the shared
    optimum and from random angles. Equal objective values are broken by
    the smallest canonical angles. The returned angles act on ``rho`` itself,
    Pauli frame included, so they are per-qubit whenever the frame is not
    trivial.

    Args:
        rho: N-qubit state, N >= 2
        config: Search settings

    Returns:
        A BoundReport whose numbers are recomputed from the returned angles
    """
    config = config or OptimizerConfig()
    n = rho.n_qubits
    frame = pauli_frame(rho) if config.canonical_frame else (0,) * n
    target = rho
    if any(frame):
        logger.debug(f"Searching in the Pauli frame {list(frame)}")
        target = apply_local_unitary(rho, [PAULI_MATRICES[p] for p in frame])
    fun = _objective(target, symmetric=True, objective=config.objective)

    identity = np.zeros(3)
    identity_value = fun(identity)
    grid = _shared_grid(fun, config.grid_points)
    evaluations = len(grid) + 1
    logger.debug(f"Evaluated {len(grid)} grid points on {n} qubits")

    starts = _select_starts(grid, config.top_k)
    if config.include_table_seeds and n in TABLE_ANGLES:
        starts.append(np.array(TABLE_ANGLES[n]))

    candidates = [(identity_value, identity)]
    for x0 in starts:
        candidates.append((fun(x0), x0))
        x, value, nfev = _refine(fun, x0, config)
        evaluations += nfev + 1
        candidates.append((value, x))
    best_value, best_x = min(candidates, key=lambda item: _rank_key(*item))
    best = LocalUnitaryParams.from_vector(best_x, n, symmetric=True)

    if not config.symmetric:
        per_qubit = _objective(target, symmetric=False, objective=config.objective)
        rng = np.random.default_rng(config.seed)
        starts = [np.tile(best_x, n)]
        starts += [rng.uniform(0, TWO_PI, 3 * n) for _ in range(config.random_starts)]
        for x0 in starts:
            x, value, nfev = _refine(per_qubit, x0, config)
            evaluations += nfev
            if value > best_value + 1e-12:
                best_value, best = value, LocalUnitaryParams.from_vector(x, n, symmetric=False)

    if best_value <= identity_value + 1e-12:
        logger.info(f"No frame on {n} qubits improves on the identity ({identity_value:.6g})")

    report = bound_report(
        rho, _with_frame(best, frame), objective=config.objective, evaluations=evaluations
    )
    logger.debug(f"Best abs_sum {report.abs_sum:.12g} after {evaluations} evaluations")
    return report


def ghz_table(
    n_min: int = 3,
    n_max: int = 7,
    search: bool = False,
    config: Optional[OptimizerConfig] = None
) -> List[Dict[str, float]]:
    """Rotated GHZ triples for a range of qubit counts.

    Args:
        n_min: Smallest N, at least 2
        n_max: Largest N
        search: Run ``optimize`` with the shared-angle ansatz instead of
            using ``table_angles``
        config: Search settings when ``search`` is True

    Returns:
        One row per N with keys n, d1, d2, d3, abs_sum, theta, psi, phi
    """
    if n_min < 2 or n_max < n_min:
        raise ArgumentError(f"Need 2 <= n_min <= n_max, got {n_min}, {n_max}")
    rows = []
    for n in range(n_min, n_max + 1):
        state = ghz(n)
        if search:
            search_config = (config or OptimizerConfig()).model_copy(update={"symmetric": True})
            params = optimize(state, search_config).best_params
        else:
            params = LocalUnitaryParams.shared(*table_angles(n), n)
        triple = rotated_triple(state, params)
        theta, psi, phi = params.angles[0]
        rows.append({
            "n": n,
            **triple.to_dict(),
            "abs_sum": triple.abs_sum,
            "theta": theta,
            "psi": psi,
            "phi": phi,
        })
    return rows
