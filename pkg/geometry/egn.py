"""EG_N states as points {d1, d2, d3} of triple-space.

An EG_N state is

    2^-N (I + d1 X...XY + d2 Y...Y + d3 Z...ZI)

and is identified with its triple. Odd-N physical triples fill a
tetrahedron, even-N ones the unit ball; M-separable triples fill the unit
octahedron once M exceeds floor(N/2) + 1. The entanglement measures of an
EG_N state reduce to the position of its triple relative to that
octahedron.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import settings
from geometry.separability import nontrivial_threshold
from quantum.pauli import PauliString
from quantum.projection import egn_readout_strings
from quantum.state import CorrelationTensor, DensityMatrix, correlation, from_bloch
from utils.errors import ArgumentError, DomainError
from utils.logger import get_logger

logger = get_logger(__name__)

ArrayLike = Union[Sequence[float], np.ndarray]

TRIVIAL_N2_WARNING = "EG_2 states are all 2-separable; no bound is certified for N = 2"


@dataclass(frozen=True)
class EgnTriple:
    """Coordinates of an EG_N state.

    Physicality is not enforced here; see ``is_physical``.

    Attributes:
        d1: Correlation of X...XY
        d2: Correlation of Y...Y
        d3: Correlation of Z...ZI
        n_qubits: Number of qubits N >= 2
    """

    d1: float
    d2: float
    d3: float
    n_qubits: int

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ArgumentError(f"EG_N triples need N >= 2, got {self.n_qubits}")
        for name in ("d1", "d2", "d3"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or abs(value) > 1 + settings.PHYSICAL_TOLERANCE:
                raise ArgumentError(f"{name} = {value} lies outside [-1, 1]")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, values: ArrayLike, n_qubits: int) -> "EgnTriple":
        d1, d2, d3 = (float(v) for v in values)
        return cls(d1, d2, d3, n_qubits)

    def as_array(self) -> np.ndarray:
        return np.array([self.d1, self.d2, self.d3])

    @property
    def abs_sum(self) -> float:
        """|d1| + |d2| + |d3|."""
        return abs(self.d1) + abs(self.d2) + abs(self.d3)

    def to_dict(self) -> Dict[str, float]:
        return {"d1": self.d1, "d2": self.d2, "d3": self.d3}


@dataclass(frozen=True)
class MeasureResult:
    """Entanglement measures of one EG_N triple for one M.

    Attributes:
        m_parties: M
        height: Plane height (|d1| + |d2| + |d3| - 1) / 2
        robustness: Robustness of M-inseparability
        trace_distance_measure: Trace-distance measure of M-inseparability
        nontrivial: Whether M > floor(N/2) + 1
        warning: Set when the result certifies nothing by construction
    """

    m_parties: int
    height: float
    robustness: float
    trace_distance_measure: float
    nontrivial: bool
    warning: Optional[str] = None

    def to_dict(self) -> Dict:
        payload = {
            "m": self.m_parties,
            "height": self.height,
            "robustness": self.robustness,
            "trace_distance_measure": self.trace_distance_measure,
            "nontrivial": self.nontrivial,
        }
        if self.warning:
            payload["warning"] = self.warning
        return payload


def triple_of(rho: DensityMatrix) -> EgnTriple:
    """Read the EG_N coordinates of any state.

    Projection onto EG_N states leaves these three correlations unchanged,
    so the triple of rho is also the triple of its projection.
    """
    strings = egn_readout_strings(rho.n_qubits)
    d1, d2, d3 = (correlation(rho, s) for s in strings)
    return EgnTriple(d1, d2, d3, rho.n_qubits)


def egn_tensor(t: EgnTriple) -> CorrelationTensor:
    """The correlation tensor of the EG_N state of a triple."""
    strings = egn_readout_strings(t.n_qubits)
    values = {PauliString.identity(t.n_qubits): 1.0}
    values.update(zip(strings, (t.d1, t.d2, t.d3)))
    return CorrelationTensor(t.n_qubits, values)


def egn_state(t: EgnTriple) -> DensityMatrix:
    """The density matrix of a triple.

    Raises:
        UnphysicalTensorError: If the triple is not physical
    """
    return from_bloch(egn_tensor(t))


def height(t: EgnTriple) -> float:
    """Plane height (|d1| + |d2| + |d3| - 1) / 2, positive outside the octahedron."""
    return (t.abs_sum - 1) / 2


def egn_eigenvalues(t: EgnTriple) -> List[Tuple[float, int]]:
    """Spectrum of the EG_N state of a triple as (eigenvalue, multiplicity).

    For odd N the distinct values are

        2^-N (1 + (-1)^q d1 + c (-1)^p d2 + (-1)^(p+q) d3),  c = (-1)^((N-1)/2),

    for p, q in {0, 1}, each 2^(N-2) times. For even N they are
    2^-N (1 +- |d|), each 2^(N-1) times. Values equal within 1e-12 are
    merged.

    Returns:
        Pairs sorted by eigenvalue; multiplicities sum to 2^N
    """
    n = t.n_qubits
    scale = 2.0 ** -n
    if n % 2:
        c = (-1) ** ((n - 1) // 2)
        values = [
            scale * (1 + (-1) ** q * t.d1 + c * (-1) ** p * t.d2 + (-1) ** (p + q) * t.d3)
            for p in (0, 1)
            for q in (0, 1)
        ]
        multiplicity = 2 ** (n - 2)
    else:
        radius = float(np.linalg.norm(t.as_array()))
        values = [scale * (1 - radius), scale * (1 + radius)]
        multiplicity = 2 ** (n - 1)

    merged: List[Tuple[float, int]] = []
    for value in sorted(values):
        if merged and abs(value - merged[-1][0]) <= 1e-12:
            merged[-1] = (merged[-1][0], merged[-1][1] + multiplicity)
        else:
            merged.append((value, multiplicity))
    return merged


def eigenvalue_spectrum(t: EgnTriple) -> np.ndarray:
    """All 2^N eigenvalues of the triple's state, sorted ascending."""
    pairs = egn_eigenvalues(t)
    return np.repeat([v for v, _ in pairs], [k for _, k in pairs])


def is_physical(t: EgnTriple) -> bool:
    """Whether the triple describes a state (no eigenvalue below -tolerance)."""
    return egn_eigenvalues(t)[0][0] >= -settings.PHYSICAL_TOLERANCE


def check_measure_arguments(t: EgnTriple, m: int) -> None:
    if not 2 <= m <= t.n_qubits:
        raise ArgumentError(f"M must satisfy 2 <= M <= N, got M={m}, N={t.n_qubits}")
    if not is_physical(t):
        raise DomainError(f"Triple {t.to_dict()} is not a physical EG_{t.n_qubits} state")


def project_onto_octahedron(p: ArrayLike) -> np.ndarray:
    """Nearest point of the unit octahedron {x : |x1| + |x2| + |x3| <= 1}.

    Projects the absolute values onto the simplex by the sort-and-threshold
    rule and restores the signs. Points inside are returned unchanged.
    """
    v = np.asarray(p, dtype=float)
    u = np.abs(v)
    if u.sum() <= 1:
        return v.copy()
    # stable sort keeps ties in index order
    ordered = u[np.argsort(-u, kind="stable")]
    cumulative = np.cumsum(ordered)
    ranks = np.arange(1, len(u) + 1)
    rho = ranks[ordered - (cumulative - 1) / ranks > 0][-1]
    theta = (cumulative[rho - 1] - 1) / rho
    return np.sign(v) * np.maximum(u - theta, 0)


def distance_to_octahedron(p: ArrayLike) -> float:
    """Euclidean distance from a point to the unit octahedron; 0 inside."""
    v = np.asarray(p, dtype=float)
    return float(np.linalg.norm(v - project_onto_octahedron(v)))


def ball_robustness_feasible(d: ArrayLike, s: float) -> bool:
    """Whether mixing weight s suffices for a triple in the ball.

    (d + s e) / (1 + s) lies in the octahedron for some unit-ball e exactly
    when d is within distance s of the octahedron scaled by 1 + s.
    """
    d = np.asarray(d, dtype=float)
    gap = (1 + s) * distance_to_octahedron(d / (1 + s))
    return gap <= s + 1e-15


def _bisect(feasible, tolerance: float, upper: float) -> float:
    lo, hi = 0.0, upper
    if feasible(lo):
        return 0.0
    iterations = 0
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
        iterations += 1
    logger.debug(f"Bisection converged to {hi:.12g} after {iterations} iterations")
    return hi


def robustness(t: EgnTriple, m: int) -> float:
    """Robustness of M-inseparability of the EG_N state of a triple.

    Zero when M <= floor(N/2) + 1. Otherwise, for odd N, the plane height
    (or zero inside the octahedron); for even N, the least s for which
    mixing with some physical EG_N state at weight s reaches the
    octahedron, found by bisection on [0, settings.BISECTION_UPPER].

    Args:
        t: Physical triple
        m: Number of parties M, 2 <= M <= N

    Returns:
        The robustness, at least 0

    Raises:
        ArgumentError: If M is out of range
        DomainError: If the triple is not physical
    """
    check_measure_arguments(t, m)
    if m <= nontrivial_threshold(t.n_qubits):
        return 0.0
    if t.n_qubits % 2:
        return max(height(t), 0.0)

    d = t.as_array()
    return _bisect(
        lambda s: ball_robustness_feasible(d, s),
        settings.BISECTION_TOLERANCE,
        settings.BISECTION_UPPER,
    )


def trace_distance_measure(t: EgnTriple, m: int) -> float:
    """Trace-distance measure of M-inseparability of a triple's state.

    Zero when M <= floor(N/2) + 1. Otherwise half the plane height for odd
    N (zero inside the octahedron) and half the Euclidean distance to the
    octahedron for even N.

    Raises:
        ArgumentError: If M is out of range
        DomainError: If the triple is not physical
    """
    check_measure_arguments(t, m)
    if m <= nontrivial_threshold(t.n_qubits):
        return 0.0
    if t.n_qubits % 2:
        return max(height(t), 0.0) / 2
    return distance_to_octahedron(t.as_array()) / 2


_CORNER_FLIPS = (
    np.array([1, 1, 1]),
    np.array([1, -1, -1]),
    np.array([-1, 1, -1]),
    np.array([-1, -1, 1]),
)


def corner_images(t: EgnTriple) -> List[EgnTriple]:
    """Images of a triple under sigma_1, sigma_2, sigma_3 on qubit 1.

    Returns:
        Four triples: t itself, then (d1, -d2, -d3), (-d1, d2, -d3) and
        (-d1, -d2, d3)
    """
    d = t.as_array()
    return [EgnTriple.from_array(flip * d, t.n_qubits) for flip in _CORNER_FLIPS]


def measures(t: EgnTriple, m: int, warn: bool = True) -> MeasureResult:
    """Every measure of a triple for one M, bundled.

    Args:
        t: EG_N triple
        m: Number of parties M
        warn: Log the N = 2 warning; the result carries it either way

    Raises:
        ArgumentError: If M is out of range
        DomainError: If the triple is not physical
    """
    nontrivial = m > nontrivial_threshold(t.n_qubits)
    warning = TRIVIAL_N2_WARNING if t.n_qubits == 2 else None
    if warning and warn:
        logger.warning(warning)
    return MeasureResult(
        m_parties=m,
        height=height(t),
        robustness=robustness(t, m),
        trace_distance_measure=trace_distance_measure(t, m),
        nontrivial=nontrivial,
        warning=warning,
    )

