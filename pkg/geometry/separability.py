"""Regions of triple-space and the M-separable EG_N classification.

EG_N triples that are separable across a partition of the qubits into
blocks are componentwise (Hadamard) products of one triple per block. Each
block contributes a canonical convex region (unit ball, one of the two
tetrahedra, the segment {(t, t, 1)}) that depends only on its size and on
whether it holds the last qubit, and the convex hulls of products follow a
short table of rules. Everything here works on region labels, not on the
(non-convex) product sets themselves.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import settings
from utils.errors import ArgumentError
from utils.logger import get_logger

logger = get_logger(__name__)

ArrayLike = Union[Sequence[float], np.ndarray]


def _tetra_vertices(sign: int) -> np.ndarray:
    c = sign
    return np.array([
        [1, c, 1],
        [-1, -c, 1],
        [1, -c, -1],
        [-1, c, -1],
    ], dtype=float)


def _tetra_normals(sign: int) -> np.ndarray:
    # inward normals n with 1 + n . x >= 0 on every face
    return np.array([
        [(-1) ** q, sign * (-1) ** p, (-1) ** (p + q)]
        for p in (0, 1)
        for q in (0, 1)
    ], dtype=float)


_OCTAHEDRON_VERTICES = np.vstack([np.eye(3), -np.eye(3)])


class RegionLabel(str, Enum):
    """Canonical convex regions of triple-space.

    BALL is the unit Euclidean ball, OCTAHEDRON the unit L1 ball,
    TETRA_PLUS and TETRA_MINUS the tetrahedra with vertices
    (1, c, 1), (-1, -c, 1), (1, -c, -1), (-1, c, -1) for c = +1 and -1, and
    LINE the segment {(t, t, 1) : -1 <= t <= 1}.
    """

    BALL = "ball"
    TETRA_PLUS = "tetra_plus"
    TETRA_MINUS = "tetra_minus"
    LINE = "line"
    OCTAHEDRON = "octahedron"

    @classmethod
    def tetra(cls, sign: int) -> "RegionLabel":
        """The tetrahedron with sign c = +1 or -1."""
        if sign not in (1, -1):
            raise ArgumentError(f"Tetrahedron sign must be +1 or -1, got {sign}")
        return cls.TETRA_PLUS if sign == 1 else cls.TETRA_MINUS

    @property
    def is_tetra(self) -> bool:
        return self in (RegionLabel.TETRA_PLUS, RegionLabel.TETRA_MINUS)

    @property
    def sign(self) -> int:
        """The tetrahedron sign c; the segment lies in TETRA_PLUS and counts as +1."""
        if self in (RegionLabel.TETRA_PLUS, RegionLabel.LINE):
            return 1
        if self is RegionLabel.TETRA_MINUS:
            return -1
        raise ArgumentError(f"Region {self.value} has no tetrahedron sign")

    def contains(self, points: ArrayLike, tolerance: Optional[float] = None) -> Union[bool, np.ndarray]:
        """Membership test for one point (shape (3,)) or many (shape (k, 3)).

        Args:
            points: Point or array of points
            tolerance: Slack on every defining inequality
                (defaults to settings.PHYSICAL_TOLERANCE)

        Returns:
            A bool for a single point, otherwise a boolean array
        """
        tolerance = settings.PHYSICAL_TOLERANCE if tolerance is None else tolerance
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)

        if self is RegionLabel.BALL:
            inside = np.linalg.norm(pts, axis=1) <= 1 + tolerance
        elif self is RegionLabel.OCTAHEDRON:
            inside = np.abs(pts).sum(axis=1) <= 1 + tolerance
        elif self is RegionLabel.LINE:
            inside = (
                (np.abs(pts[:, 0] - pts[:, 1]) <= tolerance)
                & (np.abs(pts[:, 2] - 1) <= tolerance)
                & (np.abs(pts[:, 0]) <= 1 + tolerance)
            )
        else:
            margins = 1 + pts @ _tetra_normals(self.sign).T
            inside = np.all(margins >= -tolerance, axis=1)

        return bool(inside[0]) if single else inside

    def vertices(self) -> np.ndarray:
        """Extreme points as rows.

        The ball has infinitely many; it returns the six axis points and the
        eight normalized cube diagonals.
        """
        if self is RegionLabel.OCTAHEDRON:
            return _OCTAHEDRON_VERTICES.copy()
        if self is RegionLabel.LINE:
            return np.array([[1.0, 1.0, 1.0], [-1.0, -1.0, 1.0]])
        if self is RegionLabel.BALL:
            diagonals = np.array(list(itertools.product((1, -1), repeat=3)), dtype=float)
            return np.vstack([_OCTAHEDRON_VERTICES, diagonals / np.sqrt(3)])
        return _tetra_vertices(self.sign)


# Labels each region contains (convex hull of the union stays a label)
_CONTAINS: Dict[RegionLabel, FrozenSet[RegionLabel]] = {
    RegionLabel.BALL: frozenset({RegionLabel.BALL, RegionLabel.OCTAHEDRON}),
    RegionLabel.TETRA_PLUS: frozenset(
        {RegionLabel.TETRA_PLUS, RegionLabel.OCTAHEDRON, RegionLabel.LINE}
    ),
    RegionLabel.TETRA_MINUS: frozenset({RegionLabel.TETRA_MINUS, RegionLabel.OCTAHEDRON}),
    RegionLabel.LINE: frozenset({RegionLabel.LINE}),
    RegionLabel.OCTAHEDRON: frozenset({RegionLabel.OCTAHEDRON}),
}


@dataclass(frozen=True)
class Partition:
    """Block sizes of a partition of N qubits, the last block holding qubit N.

    Only the sizes matter for the region of separable triples, so blocks
    are not tied to particular qubit labels.

    Attributes:
        sizes: Block sizes K_1, ..., K_M; sizes[-1] is the block with qubit N
    """

    sizes: Tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.sizes)
        if len(sizes) < 2:
            raise ArgumentError(f"A partition needs at least 2 blocks, got {sizes}")
        if any(k < 1 for k in sizes):
            raise ArgumentError(f"Block sizes must be positive, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def n_qubits(self) -> int:
        return sum(self.sizes)

    @property
    def last_block_size(self) -> int:
        return self.sizes[-1]


def hadamard_point(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    """Componentwise product of two 3-vectors (or stacks of them)."""
    return np.multiply(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def hadamard_reduce(factors: Sequence[RegionLabel]) -> RegionLabel:
    """Label of the convex hull of the Hadamard product of several regions.

    The rules are: tetrahedra multiply by sign (T- T- = T+, T+ T- = T-);
    a tetrahedron or the segment times the ball is the ball; the segment
    times a tetrahedron is that tetrahedron; two or more balls give the
    octahedron, and the octahedron absorbs every factor. The result does
    not depend on the order of the factors.

    Args:
        factors: Non-empty list of region labels

    Returns:
        The reduced label

    Example:
        >>> hadamard_reduce([RegionLabel.TETRA_MINUS, RegionLabel.TETRA_MINUS])
        <RegionLabel.TETRA_PLUS: 'tetra_plus'>
    """
    factors = list(factors)
    if not factors:
        raise ArgumentError("hadamard_reduce needs at least one factor")

    balls = sum(1 for f in factors if f is RegionLabel.BALL)
    if RegionLabel.OCTAHEDRON in factors or balls >= 2:
        return RegionLabel.OCTAHEDRON
    if balls == 1:
        return RegionLabel.BALL

    tetras = [f for f in factors if f.is_tetra]
    if tetras:
        return RegionLabel.tetra(reduce(lambda x, y: x * y, (t.sign for t in tetras)))
    return RegionLabel.LINE


def subsystem_region(size: int, is_last_block: bool) -> RegionLabel:
    """Region of the triples one block contributes to a separable product.

    Args:
        size: Number of qubits K in the block
        is_last_block: Whether the block holds qubit N

    Returns:
        For other blocks: BALL if K is odd, else the tetrahedron with sign
        (-1)^(K/2). For the last block: BALL if K is even, LINE if K = 1,
        else the tetrahedron with sign (-1)^((K-1)/2).
    """
    if size < 1:
        raise ArgumentError(f"Block size must be positive, got {size}")
    if not is_last_block:
        return RegionLabel.BALL if size % 2 else RegionLabel.tetra((-1) ** (size // 2))
    if size % 2 == 0:
        return RegionLabel.BALL
    if size == 1:
        return RegionLabel.LINE
    return RegionLabel.tetra((-1) ** ((size - 1) // 2))


def partition_region(p: Partition) -> RegionLabel:
    """Region of EG_N triples separable across the partition ``p``."""
    last = p.m - 1
    return hadamard_reduce([
        subsystem_region(k, is_last_block=(i == last)) for i, k in enumerate(p.sizes)
    ])


def classify_case(p: Partition) -> int:
    """Which of the nine textual cases a partition falls under.

    Cases, with K_M the size of the block holding qubit N:
        1: every block even
        2, 3: every other block even, K_M = 1 (2) or odd > 1 (3)
        4, 5, 6: exactly one other block odd, K_M even (4), 1 (5) or odd > 1 (6)
        7, 8: more than two blocks, all odd, K_M = 1 (7) or > 1 (8)
        9: anything else

    Case 4 requires K_M even so that the cases do not overlap.
    """
    others, last = p.sizes[:-1], p.last_block_size
    odd_others = sum(1 for k in others if k % 2)

    if odd_others == 0:
        if last % 2 == 0:
            return 1
        return 2 if last == 1 else 3
    if odd_others == 1:
        if last % 2 == 0:
            return 4
        return 5 if last == 1 else 6
    if p.m > 2 and odd_others == len(others) and last % 2:
        return 7 if last == 1 else 8
    return 9


def case_region(case: int, n: int) -> RegionLabel:
    """The region each textual case assigns to an N-qubit partition."""
    if case == 1 or case in (5, 6):
        return RegionLabel.BALL
    if case in (2, 3):
        return RegionLabel.tetra((-1) ** ((n - 1) // 2))
    if case in (4, 7, 8, 9):
        return RegionLabel.OCTAHEDRON
    raise ArgumentError(f"Unknown case {case}")


def enumerate_partitions(n: int, m: int) -> Iterable[Partition]:
    """Every ordered size composition of n into m blocks.

    The last entry is the block holding qubit N; the order of the other
    blocks is irrelevant to the region but all orders are listed.
    """
    for cuts in itertools.combinations(range(1, n), m - 1):
        bounds = (0,) + cuts + (n,)
        yield Partition(tuple(b - a for a, b in zip(bounds, bounds[1:])))


def physical_region(n: int) -> RegionLabel:
    """Region of all physical EG_N triples (the segment for one qubit)."""
    if n < 1:
        raise ArgumentError(f"Qubit count must be positive, got {n}")
    if n == 1:
        return RegionLabel.LINE
    if n % 2 == 0:
        return RegionLabel.BALL
    return RegionLabel.tetra((-1) ** ((n - 1) // 2))


def union_region(labels: Iterable[RegionLabel]) -> RegionLabel:
    """Label of the convex hull of a union of regions.

    Raises:
        ArgumentError: If no single label contains all the others
    """
    labels = set(labels)
    if not labels:
        raise ArgumentError("union_region needs at least one label")
    for candidate in labels:
        if labels <= _CONTAINS[candidate]:
            return candidate
    names = sorted(label.value for label in labels)
    raise ArgumentError(f"The hull of {names} is not a canonical region")


def nontrivial_threshold(n: int) -> int:
    """Largest M for which every EG_N state is M-separable, floor(N/2) + 1."""
    return n // 2 + 1


def m_separable_region(n: int, m: int) -> RegionLabel:
    """Region of M-separable EG_N triples.

    Every EG_N state is M-separable when m <= floor(n/2) + 1; beyond that
    only the octahedron remains.

    Raises:
        ArgumentError: If m is not in [2, n]
    """
    if not 2 <= m <= n:
        raise ArgumentError(f"M must satisfy 2 <= M <= N, got M={m}, N={n}")
    if m <= nontrivial_threshold(n):
        return physical_region(n)
    return RegionLabel.OCTAHEDRON


def enumerated_region(n: int, m: int) -> RegionLabel:
    """m_separable_region by brute force over all m-block compositions."""
    if not 2 <= m <= n:
        raise ArgumentError(f"M must satisfy 2 <= M <= N, got M={m}, N={n}")
    regions = [partition_region(p) for p in enumerate_partitions(n, m)]
    logger.debug(f"Enumerated {len(regions)} compositions of N={n} into M={m} blocks")
    return union_region(regions)


def sample_region(label: RegionLabel, seed: int, count: int) -> np.ndarray:
    """Deterministic points of a region, extreme points first.

    Polytopes are sampled as Dirichlet mixtures of their vertices, the ball
    by Gaussian directions with half the points on the sphere and the rest
    at uniform radius, and the segment by uniform t.

    Args:
        label: Region to sample
        seed: Seed for numpy.random.default_rng
        count: Number of points, at least 1

    Returns:
        Array of shape (count, 3)
    """
    if count < 1:
        raise ArgumentError(f"count must be positive, got {count}")
    rng = np.random.default_rng(seed)
    extremes = label.vertices()[:count]
    remaining = count - len(extremes)

    if label is RegionLabel.LINE:
        t = rng.uniform(-1, 1, remaining)
        interior = np.column_stack([t, t, np.ones(remaining)])
    elif label is RegionLabel.BALL:
        directions = rng.standard_normal((remaining, 3))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = np.ones(remaining)
        half = remaining // 2
        radii[half:] = rng.uniform(0, 1, remaining - half)
        interior = directions * radii[:, None]
    else:
        vertices = label.vertices()
        weights = rng.dirichlet(np.ones(len(vertices)), remaining)
        interior = weights @ vertices

    return np.vstack([extremes, interior.reshape(-1, 3)])


def region_check_rules() -> List[Tuple[Tuple[RegionLabel, ...], RegionLabel]]:
    """The product rules as (factors, result) pairs."""
    r = RegionLabel
    return [
        ((r.TETRA_MINUS, r.TETRA_MINUS), r.TETRA_PLUS),
        ((r.TETRA_PLUS, r.TETRA_PLUS), r.TETRA_PLUS),
        ((r.TETRA_PLUS, r.TETRA_MINUS), r.TETRA_MINUS),
        ((r.TETRA_PLUS, r.BALL), r.BALL),
        ((r.TETRA_MINUS, r.BALL), r.BALL),
        ((r.TETRA_PLUS, r.LINE), r.TETRA_PLUS),
        ((r.TETRA_MINUS, r.LINE), r.TETRA_MINUS),
        ((r.BALL, r.LINE), r.BALL),
        ((r.BALL, r.BALL), r.OCTAHEDRON),
    ]
