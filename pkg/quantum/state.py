"""Dense N-qubit density matrices and their correlation-tensor view.

A state is stored as a dense 2^N x 2^N complex matrix and validated on
construction (Hermitian, unit trace, positive semidefinite within the
configured tolerances). The correlation tensor T_alpha = Tr(rho P_alpha)
is the state's expansion in the Pauli-string basis,

    rho = 2^-N sum_alpha T_alpha P_alpha.

State files are JSON in one of two forms, a matrix form and a sparse tensor
form; see ``StateFile``.
"""

import json
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from config.settings import settings
from quantum.pauli import PAULI_MATRICES, PauliString, dense_matrix
from utils.errors import (
    ArgumentError,
    DimensionError,
    InvalidStateError,
    SizeLimitError,
    StateFileError,
    UnphysicalTensorError,
)
from utils.logger import get_logger

logger = get_logger(__name__)


def _check_size(n_qubits: int) -> None:
    if n_qubits < 1:
        raise ArgumentError(f"A state needs at least one qubit, got {n_qubits}")
    if n_qubits > settings.EGN_MAX_QUBITS:
        raise SizeLimitError(
            f"{n_qubits} qubits exceeds the dense-matrix limit of {settings.EGN_MAX_QUBITS}"
        )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated N-qubit density matrix.

    The stored matrix is a read-only copy, so instances are safe to share.

    Attributes:
        n_qubits: Number of qubits
        matrix: 2^N x 2^N complex matrix

    Raises:
        InvalidStateError: If the matrix is not Hermitian, not of unit trace or
            has an eigenvalue below -settings.PSD_TOLERANCE
    """

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        _check_size(self.n_qubits)
        matrix = np.array(self.matrix, dtype=complex)
        dim = 2 ** self.n_qubits
        if matrix.shape != (dim, dim):
            raise DimensionError(
                f"A {self.n_qubits}-qubit state needs a {dim}x{dim} matrix, got {matrix.shape}"
            )

        asymmetry = np.max(np.abs(matrix - matrix.conj().T))
        if asymmetry > settings.HERMITIAN_TOLERANCE:
            raise InvalidStateError(f"Matrix is not Hermitian (deviation {asymmetry:.3e})")

        trace = np.trace(matrix)
        if abs(trace - 1) > settings.TRACE_TOLERANCE:
            raise InvalidStateError(f"Trace must be 1, got {trace.real:.12g}")

        min_eigenvalue = float(np.linalg.eigvalsh(matrix).min())
        if min_eigenvalue < -settings.PSD_TOLERANCE:
            raise InvalidStateError(
                f"Matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"
            )

        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def eigenvalues(self) -> np.ndarray:
        """Sorted eigenvalues from LAPACK."""
        return np.linalg.eigvalsh(self.matrix)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "DensityMatrix":
        """Build a state from a square matrix, inferring the qubit count."""
        matrix = np.asarray(matrix, dtype=complex)
        n_qubits = int(round(np.log2(matrix.shape[0]))) if matrix.ndim == 2 else 0
        if matrix.ndim != 2 or matrix.shape[0] != 2 ** n_qubits:
            raise DimensionError(f"Matrix shape {matrix.shape} is not 2^N x 2^N")
        return cls(n_qubits, matrix)


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """Correlation tensor of an N-qubit state in the Pauli-string basis.

    Missing entries are zero. The all-zero entry is inserted with value 1
    when absent.

    Attributes:
        n_qubits: Number of qubits
        values: Map from Pauli string alpha to the real number T_alpha
    """

    n_qubits: int
    values: Mapping[PauliString, float] = field(default_factory=dict)

    def __post_init__(self):
        values: Dict[PauliString, float] = {}
        for alpha, value in dict(self.values).items():
            if alpha.n_qubits != self.n_qubits:
                raise DimensionError(
                    f"Tensor entry {alpha.to_list()} does not act on {self.n_qubits} qubits"
                )
            value = float(value)
            if abs(value) > 1 + settings.PSD_TOLERANCE:
                raise UnphysicalTensorError(
                    f"Correlation {alpha.to_list()} = {value} lies outside [-1, 1]",
                    min_eigenvalue=float("nan"),
                )
            values[alpha] = value

        zero = PauliString.identity(self.n_qubits)
        if zero not in values:
            values[zero] = 1.0
        elif abs(values[zero] - 1) > settings.TRACE_TOLERANCE:
            raise ArgumentError(f"The all-zero correlation must be 1, got {values[zero]}")
        object.__setattr__(self, "values", values)

    def get(self, alpha: PauliString) -> float:
        """T_alpha, zero when the entry is absent."""
        return self.values.get(alpha, 0.0)

    def support(self, tolerance: float = 0.0) -> Dict[PauliString, float]:
        """Entries whose magnitude exceeds ``tolerance``, sorted by string."""
        return {a: v for a, v in sorted(self.values.items()) if abs(v) > tolerance}

    def restricted(self, strings: Sequence[PauliString]) -> "CorrelationTensor":
        """The tensor with every entry outside ``strings`` set to zero."""
        return CorrelationTensor(self.n_qubits, {a: self.get(a) for a in strings})


def correlation(rho: DensityMatrix, alpha: PauliString) -> float:
    """Correlation tensor element T_alpha = Tr(rho P_alpha).

    Args:
        rho: N-qubit state
        alpha: Pauli string on N qubits

    Returns:
        The real part of the trace

    Raises:
        DimensionError: If the qubit counts differ
        InvalidStateError: If the imaginary part exceeds settings.IMAGINARY_TOLERANCE
    """
    if alpha.n_qubits != rho.n_qubits:
        raise DimensionError(
            f"Pauli string on {alpha.n_qubits} qubits applied to a {rho.n_qubits}-qubit state"
        )
    # Tr(A B) = sum_ij A_ij B_ji
    value = np.sum(rho.matrix * dense_matrix(alpha).T)
    if abs(value.imag) > settings.IMAGINARY_TOLERANCE:
        raise InvalidStateError(
            f"Tr(rho P_{alpha}) has imaginary part {value.imag:.3e}"
        )
    return float(value.real)


def _basis_sublists(n_qubits: int):
    rows = list(range(n_qubits))
    cols = list(range(n_qubits, 2 * n_qubits))
    paulis = list(range(2 * n_qubits, 3 * n_qubits))
    return rows, cols, paulis


def correlation_array(rho: DensityMatrix) -> np.ndarray:
    """All 4^N correlations as a real array of shape (4,) * N.

    Computed as one tensor contraction of the reshaped matrix with a Pauli
    matrix per qubit, without forming any 2^N x 2^N Pauli string. Axis k
    belongs to qubit k + 1, so the C-order ravel follows ``index_array``.

    Raises:
        InvalidStateError: If any element has a non-negligible imaginary part
    """
    n = rho.n_qubits
    rows, cols, paulis = _basis_sublists(n)
    operands: List = [rho.matrix.reshape((2,) * (2 * n)), rows + cols]
    for k in range(n):
        # Tr(rho P) = sum rho[i, j] P[j, i]
        operands += [PAULI_MATRICES, [paulis[k], cols[k], rows[k]]]
    coefficients = np.einsum(*operands, paulis, optimize="greedy")

    max_imaginary = float(np.max(np.abs(coefficients.imag)))
    if max_imaginary > settings.IMAGINARY_TOLERANCE:
        raise InvalidStateError(f"Correlation tensor has imaginary part {max_imaginary:.3e}")
    return coefficients.real


def to_bloch(rho: DensityMatrix) -> CorrelationTensor:
    """Full correlation tensor of a state, all 4^N entries."""
    values = {
        PauliString(index): float(value)
        for index, value in np.ndenumerate(correlation_array(rho))
    }
    return CorrelationTensor(rho.n_qubits, values)


def from_bloch(tensor: CorrelationTensor) -> DensityMatrix:
    """Reconstruct the state 2^-N sum_alpha T_alpha P_alpha.

    Args:
        tensor: Correlation tensor

    Returns:
        The density matrix

    Raises:
        UnphysicalTensorError: If the matrix has an eigenvalue below
            -settings.PSD_TOLERANCE; the error carries that eigenvalue
    """
    n = tensor.n_qubits
    _check_size(n)
    coefficients = np.zeros((4,) * n, dtype=complex)
    for alpha, value in tensor.values.items():
        coefficients[alpha.indices] = value

    rows, cols, paulis = _basis_sublists(n)
    operands: List = [coefficients, paulis]
    for k in range(n):
        operands += [PAULI_MATRICES, [paulis[k], rows[k], cols[k]]]
    matrix = np.einsum(*operands, rows + cols, optimize="greedy")
    matrix = matrix.reshape(2 ** n, 2 ** n) / 2 ** n

    min_eigenvalue = float(np.linalg.eigvalsh(matrix).min())
    if min_eigenvalue < -settings.PSD_TOLERANCE:
        raise UnphysicalTensorError(
            f"Correlation tensor is unphysical (min eigenvalue {min_eigenvalue:.3e})",
            min_eigenvalue=min_eigenvalue,
        )
    return DensityMatrix(n, matrix)


def maximally_mixed(n: int) -> DensityMatrix:
    """The state I / 2^N."""
    _check_size(n)
    return DensityMatrix(n, np.eye(2 ** n) / 2 ** n)


def ghz(n: int) -> DensityMatrix:
    """Projector onto (|0...0> + |1...1>) / sqrt(2).

    Raises:
        ArgumentError: If n < 2
    """
    if n < 2:
        raise ArgumentError(f"GHZ states need at least 2 qubits, got {n}")
    _check_size(n)
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return DensityMatrix(n, np.outer(psi, psi.conj()))


def is_unitary(u: np.ndarray, tolerance: Optional[float] = None) -> bool:
    """Check U U^dagger = I elementwise within ``tolerance``."""
    tolerance = settings.UNITARY_TOLERANCE if tolerance is None else tolerance
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tolerance)


def local_operator(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of per-qubit 2x2 matrices, qubit 1 leftmost."""
    return reduce(np.kron, [np.asarray(f, dtype=complex) for f in factors])


def apply_local_unitary(
    rho: DensityMatrix,
    unitaries: Sequence[np.ndarray]
) -> DensityMatrix:
    """Conjugate a state by a product of single-qubit unitaries.

    Args:
        rho: N-qubit state
        unitaries: N matrices of shape 2x2, qubit 1 first

    Returns:
        (U_1 (x) ... (x) U_N) rho (U_1 (x) ... (x) U_N)^dagger

    Raises:
        ArgumentError: If the list length differs from N or a factor is not unitary
    """
    if len(unitaries) != rho.n_qubits:
        raise ArgumentError(
            f"Expected {rho.n_qubits} single-qubit unitaries, got {len(unitaries)}"
        )
    for k, u in enumerate(unitaries):
        if np.shape(u) != (2, 2) or not is_unitary(u):
            raise ArgumentError(f"Factor for qubit {k + 1} is not a 2x2 unitary")

    u_total = local_operator(unitaries)
    rotated = u_total @ rho.matrix @ u_total.conj().T
    return DensityMatrix(rho.n_qubits, (rotated + rotated.conj().T) / 2)


def random_state(n: int, seed: int) -> DensityMatrix:
    """Full-rank random state G G^dagger / Tr(G G^dagger).

    G has independent complex standard normal entries drawn from
    ``numpy.random.default_rng(seed)``, so the result is reproducible.
    """
    _check_size(n)
    rng = np.random.default_rng(seed)
    dim = 2 ** n
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    matrix = g @ g.conj().T
    matrix = (matrix + matrix.conj().T) / 2
    return DensityMatrix(n, matrix / np.trace(matrix).real)


def mix(states: Sequence[DensityMatrix], weights: Sequence[float]) -> DensityMatrix:
    """Convex combination sum_k w_k rho_k of states on the same qubits."""
    n = states[0].n_qubits
    if any(s.n_qubits != n for s in states):
        raise DimensionError("Cannot mix states of different qubit counts")
    matrix = sum(w * s.matrix for w, s in zip(weights, states))
    return DensityMatrix(n, matrix)


# =============================================================================
# STATE FILES
# =============================================================================


class MatrixPayload(BaseModel):
    """Row-major real and imaginary parts of a 2^N x 2^N matrix."""

    re: List[List[float]]
    im: List[List[float]]


class TensorEntry(BaseModel):
    """One correlation tensor element."""

    alpha: List[int]
    value: float


class StateFile(BaseModel):
    """JSON schema of a state file: exactly one of ``matrix`` or ``tensor``."""

    n_qubits: int = Field(ge=1)
    matrix: Optional[MatrixPayload] = None
    tensor: Optional[List[TensorEntry]] = None

    @model_validator(mode="after")
    def _exactly_one_form(self) -> "StateFile":
        if (self.matrix is None) == (self.tensor is None):
            raise ValueError("state file needs exactly one of 'matrix' or 'tensor'")
        return self


def parse_state(payload: Mapping) -> DensityMatrix:
    """Build a state from a decoded state-file document.

    Raises:
        StateFileError: If the document does not match ``StateFile``
        InvalidStateError: If the described matrix is not a valid state
    """
    try:
        document = StateFile.model_validate(payload)
    except ValidationError as e:
        raise StateFileError(f"Malformed state file: {e.errors()[0]['msg']}") from e

    n = document.n_qubits
    if document.matrix is not None:
        real = np.asarray(document.matrix.re, dtype=float)
        imag = np.asarray(document.matrix.im, dtype=float)
        if real.shape != imag.shape:
            raise StateFileError("Real and imaginary parts differ in shape")
        return DensityMatrix(n, real + 1j * imag)

    values = {}
    for entry in document.tensor:
        if len(entry.alpha) != n:
            raise StateFileError(f"Tensor entry {entry.alpha} does not have {n} indices")
        values[PauliString(tuple(entry.alpha))] = entry.value
    return from_bloch(CorrelationTensor(n, values))


def load_state(path: Union[str, Path]) -> DensityMatrix:
    """Load a state file in either the matrix or the tensor form.

    Raises:
        StateFileError: If the file cannot be read or decoded
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise StateFileError(f"Cannot read state file {path}: {e}") from e
    logger.debug(f"Loaded state file {path}")
    return parse_state(payload)


def state_payload(rho: DensityMatrix, form: str = "matrix") -> Dict:
    """Encode a state as a state-file document.

    Args:
        rho: State to encode
        form: "matrix" or "tensor" (the tensor form keeps nonzero entries)
    """
    if form == "matrix":
        return {
            "n_qubits": rho.n_qubits,
            "matrix": {"re": rho.matrix.real.tolist(), "im": rho.matrix.imag.tolist()},
        }
    if form == "tensor":
        tensor = to_bloch(rho).support(tolerance=1e-15)
        return {
            "n_qubits": rho.n_qubits,
            "tensor": [{"alpha": a.to_list(), "value": v} for a, v in tensor.items()],
        }
    raise ArgumentError(f"Unknown state-file form {form!r}")


def save_state(rho: DensityMatrix, path: Union[str, Path], form: str = "matrix") -> None:
    """Write a state file."""
    Path(path).write_text(json.dumps(state_payload(rho, form)), encoding="utf-8")
