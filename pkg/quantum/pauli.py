"""Exact algebra of N-qubit Pauli strings.

A Pauli string is an N-tuple of indices in {0, 1, 2, 3} naming the tensor
product sigma_{a_1} (x) ... (x) sigma_{a_N}, with 0 the identity and 1, 2, 3
the Pauli x, y, z matrices. Products of strings are strings up to a global
phase that is a power of i; the phase is tracked as an integer exponent
modulo 4, never as a float.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import settings
from utils.errors import ArgumentError, DimensionError, SizeLimitError
from utils.logger import get_logger

logger = get_logger(__name__)


# Single-qubit Pauli matrices indexed by 0 (identity), 1 (x), 2 (y), 3 (z)
PAULI_MATRICES = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)
PAULI_MATRICES.setflags(write=False)

# i^k for k = 0..3
_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)

# Cyclic pairs give sigma_a sigma_b = +i sigma_c, the reversed pairs -i sigma_c
_CYCLIC = {(1, 2), (2, 3), (3, 1)}


@dataclass(frozen=True, order=True)
class PauliString:
    """A tensor product of single-qubit Pauli matrices.

    Strings compare lexicographically on their indices, which makes sorted
    collections of strings deterministic.

    Attributes:
        indices: One symbol in {0, 1, 2, 3} per qubit, qubit 1 first
    """

    indices: Tuple[int, ...]

    def __post_init__(self):
        indices = tuple(int(a) for a in self.indices)
        if not indices:
            raise ArgumentError("A Pauli string needs at least one qubit")
        if any(a not in (0, 1, 2, 3) for a in indices):
            raise ArgumentError(f"Pauli indices must lie in {{0,1,2,3}}, got {indices}")
        object.__setattr__(self, "indices", indices)

    @property
    def n_qubits(self) -> int:
        """Number of qubits the string acts on."""
        return len(self.indices)

    @property
    def weight(self) -> int:
        """Number of non-identity sites."""
        return sum(1 for a in self.indices if a)

    @property
    def is_identity(self) -> bool:
        return self.weight == 0

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        """The all-zero string on ``n_qubits`` qubits."""
        return cls((0,) * n_qubits)

    @classmethod
    def single(cls, n_qubits: int, site: int, index: int) -> "PauliString":
        """A string acting with ``index`` on one 0-based ``site`` only."""
        indices = [0] * n_qubits
        indices[site] = index
        return cls(tuple(indices))

    def to_list(self) -> List[int]:
        """JSON form, e.g. ``[3, 3, 0]``."""
        return list(self.indices)

    def __str__(self) -> str:
        return "".join(str(a) for a in self.indices)


@dataclass(frozen=True)
class PhasedPauli:
    """A Pauli string times a fourth root of unity.

    Attributes:
        string: Underlying Pauli string
        exponent: Power of i, reduced modulo 4
    """

    string: PauliString
    exponent: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exponent", int(self.exponent) % 4)

    @property
    def phase(self) -> complex:
        """The phase i^exponent as a complex number."""
        return _PHASES[self.exponent]

    @property
    def n_qubits(self) -> int:
        return self.string.n_qubits

    @property
    def is_hermitian(self) -> bool:
        """True when the phase is real."""
        return self.exponent % 2 == 0


PauliLike = Union[PauliString, PhasedPauli]


def _as_phased(p: PauliLike) -> PhasedPauli:
    return p if isinstance(p, PhasedPauli) else PhasedPauli(p, 0)


def _as_string(p: PauliLike) -> PauliString:
    return p.string if isinstance(p, PhasedPauli) else p


def _check_dimensions(a: PauliLike, b: PauliLike) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(
            f"Pauli strings act on {a.n_qubits} and {b.n_qubits} qubits"
        )


def multiply(a: PauliLike, b: PauliLike) -> PhasedPauli:
    """Multiply two Pauli strings sitewise, accumulating the global phase.

    Args:
        a: Left factor (string or phased string)
        b: Right factor (string or phased string)

    Returns:
        The product a*b as a PhasedPauli

    Raises:
        DimensionError: If the factors act on different numbers of qubits

    Example:
        >>> multiply(PauliString((1,)), PauliString((2,)))
        PhasedPauli(string=PauliString(indices=(3,)), exponent=1)
    """
    _check_dimensions(a, b)
    pa, pb = _as_phased(a), _as_phased(b)
    exponent = pa.exponent + pb.exponent
    indices = []
    for x, y in zip(pa.string.indices, pb.string.indices):
        if x and y and x != y:
            exponent += 1 if (x, y) in _CYCLIC else 3
        # x ^ y maps (0,a)->a, (a,a)->0 and distinct nonzero pairs to the third index
        indices.append(x ^ y)
    return PhasedPauli(PauliString(tuple(indices)), exponent)


def anticommuting_sites(a: PauliLike, b: PauliLike) -> int:
    """Count the sites where both strings are non-identity and different."""
    _check_dimensions(a, b)
    sa, sb = _as_string(a), _as_string(b)
    return sum(1 for x, y in zip(sa.indices, sb.indices) if x and y and x != y)


def commutes(a: PauliLike, b: PauliLike) -> bool:
    """Decide whether two Pauli strings commute.

    Two strings commute iff the number of anticommuting sites is even
    (including zero); otherwise they anticommute.

    Raises:
        DimensionError: If the strings act on different numbers of qubits
    """
    return anticommuting_sites(a, b) % 2 == 0


@lru_cache(maxsize=8192)
def _string_matrix(indices: Tuple[int, ...]) -> np.ndarray:
    matrix = reduce(np.kron, (PAULI_MATRICES[a] for a in indices))
    matrix = np.ascontiguousarray(matrix)
    matrix.setflags(write=False)
    return matrix


def dense_matrix(p: PauliLike) -> np.ndarray:
    """Realize a (phased) Pauli string as a dense 2^N x 2^N complex matrix.

    Qubit 1 is the leftmost Kronecker factor, i.e. the most significant bit
    of the computational-basis index.

    Args:
        p: Pauli string or phased Pauli string

    Returns:
        A new complex matrix equal to phase * sigma_{a_1} (x) ... (x) sigma_{a_N}

    Raises:
        SizeLimitError: If N exceeds settings.EGN_MAX_QUBITS
    """
    if p.n_qubits > settings.EGN_MAX_QUBITS:
        raise SizeLimitError(
            f"{p.n_qubits} qubits exceeds the dense-matrix limit of "
            f"{settings.EGN_MAX_QUBITS} (set EGN_MAX_QUBITS to raise it)"
        )
    phased = _as_phased(p)
    return phased.phase * _string_matrix(phased.string.indices)


def generate_group(
    generators: Sequence[PauliString],
    n_qubits: Optional[int] = None
) -> List[PhasedPauli]:
    """List the 2^n subset-products of a generator family in layered order.

    The layers are: the identity; each generator; the ordered pairs
    P_{i2} P_{i1} with i2 > i1; the ordered triples; and so on up to the
    product of all n generators. Underlying strings need not be distinct.

    Args:
        generators: Pauli strings sharing one qubit count
        n_qubits: Qubit count, needed only when the family is empty

    Returns:
        The 2^n products as PhasedPauli values; an empty family yields only
        the identity

    Raises:
        SizeLimitError: If more than settings.MAX_GENERATORS generators are given
        DimensionError: If the generators act on different qubit counts
    """
    generators = list(generators)
    if len(generators) > settings.MAX_GENERATORS:
        raise SizeLimitError(
            f"{len(generators)} generators exceeds the limit of {settings.MAX_GENERATORS}"
        )
    if not generators:
        return [PhasedPauli(PauliString.identity(n_qubits or 1))]

    n_qubits = generators[0].n_qubits
    for g in generators[1:]:
        _check_dimensions(generators[0], g)

    identity = PhasedPauli(PauliString.identity(n_qubits))
    elements = [identity]
    for size in range(1, len(generators) + 1):
        for combo in itertools.combinations(range(len(generators)), size):
            product = identity
            for idx in reversed(combo):
                product = multiply(product, generators[idx])
            elements.append(product)

    logger.debug(f"Generated {len(elements)} group elements from {len(generators)} generators")
    return elements


def all_strings(n_qubits: int) -> Iterable[PauliString]:
    """Iterate over the full index set {0,1,2,3}^N in lexicographic order."""
    for indices in itertools.product(range(4), repeat=n_qubits):
        yield PauliString(indices)


def index_array(n_qubits: int) -> np.ndarray:
    """All 4^N strings as an integer array of shape (4^N, N), lexicographic."""
    grids = np.indices((4,) * n_qubits).reshape(n_qubits, -1)
    return grids.T.astype(np.int8)


def commutation_mask(strings: np.ndarray, generator: PauliString) -> np.ndarray:
    """Vectorized commutation test of many strings against one string.

    Args:
        strings: Integer array of shape (k, N)
        generator: String to test against

    Returns:
        Boolean array of length k, True where the row commutes with ``generator``
    """
    g = np.asarray(generator.indices, dtype=np.int8)
    anti = (strings != 0) & (g != 0) & (strings != g)
    return anti.sum(axis=1) % 2 == 0


def binary_form(p: PauliLike) -> np.ndarray:
    """The (x | z) bit vector of a string, length 2N.

    sigma_1 sets the x bit, sigma_3 the z bit and sigma_2 both.
    """
    indices = np.asarray(_as_string(p).indices)
    x = (indices == 1) | (indices == 2)
    z = (indices == 2) | (indices == 3)
    return np.concatenate([x, z]).astype(np.uint8)


def gf2_rank(generators: Sequence[PauliLike]) -> int:
    """Rank of the generators' bit vectors over GF(2).

    The 2^n subset-products have pairwise distinct strings exactly when the
    rank equals n.
    """
    if not generators:
        return 0
    rows = np.array([binary_form(g) for g in generators], dtype=np.uint8)
    rank = 0
    for col in range(rows.shape[1]):
        pivots = np.nonzero(rows[rank:, col])[0]
        if len(pivots) == 0:
            continue
        pivot = rank + pivots[0]
        rows[[rank, pivot]] = rows[[pivot, rank]]
        others = np.nonzero(rows[:, col])[0]
        others = others[others != rank]
        rows[others] ^= rows[rank]
        rank += 1
        if rank == rows.shape[0]:
            break
    return rank
