"""Entanglement non-increasing projections built from Pauli generator families.

A projection is described by an ``EnipSpec``: a family of generators
{P_1, ..., P_n} and the set G of Pauli strings that survive it. The map

    Pi_G(rho) = 2^-n sum_beta P'_beta rho P'_beta^dagger

averages over the 2^n subset-products P'_beta of the generators, which keeps
exactly the correlation tensor entries commuting with every generator. The
same map is obtained by flipping a coin per generator in sequence,

    rho_i = (rho_{i-1} + P_i rho_{i-1} P_i) / 2,

which needs only n conjugations instead of 2^n.
"""

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from config.settings import settings
from quantum.pauli import (
    PauliString,
    commutation_mask,
    commutes,
    dense_matrix,
    generate_group,
    gf2_rank,
    index_array,
)
from quantum.state import DensityMatrix
from utils.errors import (
    ArgumentError,
    DimensionError,
    InvalidSpecError,
    SizeLimitError,
    SpecConstructionError,
    StateFileError,
)
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class EnipSpec:
    """Generator family of a projection and the strings it keeps.

    Attributes:
        n_qubits: Number of qubits
        surviving: The set G of Pauli strings left untouched
        generators: The family {P_1, ..., P_n}, in application order
        label: Free-form name recorded in verification reports
    """

    n_qubits: int
    surviving: FrozenSet[PauliString]
    generators: Tuple[PauliString, ...]
    label: str = "custom"

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ArgumentError(f"A projection needs at least one qubit, got {self.n_qubits}")
        object.__setattr__(self, "surviving", frozenset(self.surviving))
        object.__setattr__(self, "generators", tuple(self.generators))
        for p in list(self.surviving) + list(self.generators):
            if p.n_qubits != self.n_qubits:
                raise DimensionError(
                    f"String {p.to_list()} does not act on {self.n_qubits} qubits"
                )

    def to_dict(self) -> Dict:
        """Spec-file form of the spec."""
        return {
            "n_qubits": self.n_qubits,
            "surviving": [p.to_list() for p in sorted(self.surviving)],
            "generators": [p.to_list() for p in self.generators],
        }


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking a spec against the commutation conditions.

    Attributes:
        n_qubits: Number of qubits
        label: The spec's label (for standard specs, the chosen variant)
        method: "exhaustive" (all 4^N strings scanned) or "counting"
        group_size: Number of subset-products, 2^n
        distinct: Whether the subset-products have pairwise distinct strings
        commutant: Strings commuting with every group element, sorted
        matches_surviving: Whether the commutant equals spec.surviving
        first_violation: Description of the first failed condition, if any
    """

    n_qubits: int
    label: str
    method: str
    group_size: int
    distinct: bool
    commutant: Tuple[PauliString, ...]
    matches_surviving: bool
    first_violation: Optional[str] = None
    surviving: Tuple[PauliString, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.first_violation is None

    def to_dict(self) -> Dict:
        return {
            "n_qubits": self.n_qubits,
            "label": self.label,
            "method": self.method,
            "group_size": self.group_size,
            "distinct": self.distinct,
            "commutant": [p.to_list() for p in self.commutant],
            "surviving": [p.to_list() for p in self.surviving],
            "matches_surviving": self.matches_surviving,
            "passed": self.passed,
            "first_violation": self.first_violation,
        }


def _first_violation(
    spec: EnipSpec,
    distinct: bool,
    commutant: Optional[FrozenSet[PauliString]]
) -> Optional[str]:
    identity = PauliString.identity(spec.n_qubits)
    if identity not in spec.surviving:
        return "surviving set does not contain the all-zero string"
    if not distinct:
        return "group elements do not have pairwise distinct strings"
    for alpha in sorted(spec.surviving):
        for g in spec.generators:
            if not commutes(alpha, g):
                return f"surviving string {alpha} anticommutes with generator {g}"
    if commutant is not None:
        for alpha in sorted(commutant - spec.surviving):
            return f"string {alpha} outside the surviving set commutes with every generator"
    return None


@lru_cache(maxsize=128)
def verify_spec(spec: EnipSpec) -> VerificationReport:
    """Check a spec against the conditions that define its projection.

    Up to settings.EXHAUSTIVE_SCAN_MAX_QUBITS qubits every one of the 4^N
    strings is tested against the generators. Above that the commutant is
    certified by counting: with 2^n distinct group elements it has exactly
    4^N / 2^n members, so a surviving set of that size whose members all
    commute with the generators is the whole commutant.

    Args:
        spec: Spec to check

    Returns:
        A VerificationReport; failures are reported, never raised

    Raises:
        SizeLimitError: If the spec has more than settings.MAX_GENERATORS generators
    """
    n = spec.n_qubits
    if len(spec.generators) > settings.MAX_GENERATORS:
        raise SizeLimitError(
            f"{len(spec.generators)} generators exceeds the limit of {settings.MAX_GENERATORS}"
        )
    group_size = 2 ** len(spec.generators)

    if n <= settings.EXHAUSTIVE_SCAN_MAX_QUBITS:
        method = "exhaustive"
        group = generate_group(spec.generators, n)
        distinct = len({g.string for g in group}) == len(group)
        strings = index_array(n)
        mask = np.ones(len(strings), dtype=bool)
        # commuting with every generator is commuting with every product of them
        for g in spec.generators:
            mask &= commutation_mask(strings, g)
        commutant = frozenset(PauliString(tuple(row)) for row in strings[mask])
        violation = _first_violation(spec, distinct, commutant)
    else:
        method = "counting"
        distinct = gf2_rank(spec.generators) == len(spec.generators)
        violation = _first_violation(spec, distinct, None)
        expected = 4 ** n // group_size
        if violation is None and len(spec.surviving) != expected:
            violation = (
                f"surviving set has {len(spec.surviving)} strings, "
                f"the commutant has {expected}"
            )
        commutant = spec.surviving if violation is None else frozenset()

    report = VerificationReport(
        n_qubits=n,
        label=spec.label,
        method=method,
        group_size=group_size,
        distinct=distinct,
        commutant=tuple(sorted(commutant)),
        matches_surviving=commutant == spec.surviving,
        first_violation=violation,
        surviving=tuple(sorted(spec.surviving)),
    )
    logger.debug(
        f"Verified spec '{spec.label}' on {n} qubits ({method}): "
        f"passed={report.passed}, commutant size {len(commutant)}"
    )
    return report


def _require_valid(rho: DensityMatrix, spec: EnipSpec) -> None:
    if rho.n_qubits != spec.n_qubits:
        raise DimensionError(
            f"Spec acts on {spec.n_qubits} qubits, state has {rho.n_qubits}"
        )
    report = verify_spec(spec)
    if not report.passed:
        raise InvalidSpecError(f"Spec '{spec.label}' fails verification: {report.first_violation}")


def _hermitian_state(n_qubits: int, matrix: np.ndarray) -> DensityMatrix:
    return DensityMatrix(n_qubits, (matrix + matrix.conj().T) / 2)


def project_group_average(rho: DensityMatrix, spec: EnipSpec) -> DensityMatrix:
    """Apply Pi_G as the uniform average over all 2^n subset-products.

    Above settings.GROUP_AVERAGE_MAX_QUBITS qubits the sequential form is used
    instead; both give the same map.

    Args:
        rho: State on spec.n_qubits qubits
        spec: Verified projection spec

    Returns:
        The projected state, supported on spec.surviving

    Raises:
        InvalidSpecError: If the spec fails verification
        DimensionError: If the qubit counts differ
    """
    _require_valid(rho, spec)
    if rho.n_qubits > settings.GROUP_AVERAGE_MAX_QUBITS:
        logger.debug(
            f"Group average on {rho.n_qubits} qubits switches to the sequential projection"
        )
        return project_recursive(rho, spec)

    group = generate_group(spec.generators, spec.n_qubits)
    total = np.zeros_like(rho.matrix)
    for element in group:
        # the phase cancels under conjugation
        p = dense_matrix(element.string)
        total += p @ rho.matrix @ p
    return _hermitian_state(rho.n_qubits, total / len(group))


def project_recursive(rho: DensityMatrix, spec: EnipSpec) -> DensityMatrix:
    """Apply Pi_G one generator at a time with a fair coin per step.

    Args:
        rho: State on spec.n_qubits qubits
        spec: Verified projection spec

    Returns:
        The projected state

    Raises:
        InvalidSpecError: If the spec fails verification
        DimensionError: If the qubit counts differ
    """
    _require_valid(rho, spec)
    matrix = np.array(rho.matrix)
    for g in spec.generators:
        p = dense_matrix(g)
        matrix = (matrix + p @ matrix @ p) / 2
    return _hermitian_state(rho.n_qubits, matrix)


def egn_readout_strings(n: int) -> Tuple[PauliString, PauliString, PauliString]:
    """The strings read out as d1, d2 and d3.

    Returns:
        (sigma_1^{N-1} sigma_2, sigma_2^N, sigma_3^{N-1} identity)
    """
    if n < 2:
        raise ArgumentError(f"EG_N states need at least 2 qubits, got {n}")
    return (
        PauliString((1,) * (n - 1) + (2,)),
        PauliString((2,) * n),
        PauliString((3,) * (n - 1) + (0,)),
    )


def _pair(n: int, site: int, index: int) -> PauliString:
    indices = [0] * n
    indices[site] = indices[site + 1] = index
    return PauliString(tuple(indices))


def _standard_generators(n: int, variant: str) -> List[PauliString]:
    if n == 2:
        return [PauliString((3, 3)), PauliString((0, 2))]
    generators = [_pair(n, k, 3) for k in range(n - 1)]
    generators += [_pair(n, k, 2) for k in range(n - 2)]
    if variant == "single_site":
        generators.append(PauliString.single(n, n - 1, 2))
    else:
        generators.append(_pair(n, n - 2, 2))
    return generators


STANDARD_VARIANTS = ("single_site", "pair")


@lru_cache(maxsize=32)
def standard_egn_spec(n: int) -> EnipSpec:
    """Build the projection onto EG_N states.

    The generators are sigma_3 sigma_3 on each neighbouring pair, sigma_2
    sigma_2 on the pairs (k, k+1) for k <= N-2, and a final sigma_2 element.
    The final element is sigma_2 on qubit N alone ("single_site"); the pair
    sigma_2 sigma_2 on (N-1, N) ("pair") is tried only if that fails. For
    N = 2 the family is {sigma_3 sigma_3, identity sigma_2}.

    Args:
        n: Number of qubits, at least 2

    Returns:
        A verified spec whose label names the chosen variant

    Raises:
        ArgumentError: If n < 2
        SizeLimitError: If n exceeds settings.EGN_MAX_QUBITS
        SpecConstructionError: If no variant passes verification

    Example:
        >>> spec = standard_egn_spec(3)
        >>> len(spec.generators), len(spec.surviving)
        (4, 4)
    """
    if n < 2:
        raise ArgumentError(f"EG_N states need at least 2 qubits, got {n}")
    if n > settings.EGN_MAX_QUBITS:
        raise SizeLimitError(f"{n} qubits exceeds the limit of {settings.EGN_MAX_QUBITS}")

    surviving = frozenset((PauliString.identity(n),) + egn_readout_strings(n))
    first_failure = None
    for variant in STANDARD_VARIANTS:
        spec = EnipSpec(
            n_qubits=n,
            surviving=surviving,
            generators=tuple(_standard_generators(n, variant)),
            label=f"egn_standard:{variant}",
        )
        report = verify_spec(spec)
        if report.passed:
            if variant != STANDARD_VARIANTS[0]:
                logger.warning(f"Standard EG_{n} spec uses the '{variant}' variant")
            return spec
        first_failure = first_failure or report.first_violation
        logger.debug(f"EG_{n} variant '{variant}' rejected: {report.first_violation}")

    raise SpecConstructionError(
        f"No standard EG_{n} generator family passes verification: {first_failure}",
        condition=first_failure,
    )


# =============================================================================
# SPEC FILES
# =============================================================================


class SpecFile(BaseModel):
    """JSON schema of a spec file."""

    n_qubits: int = Field(ge=1)
    surviving: List[List[int]]
    generators: List[List[int]]


def parse_spec(payload: Dict, label: str = "file") -> EnipSpec:
    """Build a spec from a decoded spec-file document.

    Raises:
        StateFileError: If the document does not match ``SpecFile``
    """
    try:
        document = SpecFile.model_validate(payload)
        return EnipSpec(
            n_qubits=document.n_qubits,
            surviving=frozenset(PauliString(tuple(s)) for s in document.surviving),
            generators=tuple(PauliString(tuple(g)) for g in document.generators),
            label=label,
        )
    except ValidationError as e:
        raise StateFileError(f"Malformed spec file: {e.errors()[0]['msg']}") from e
    except (ArgumentError, DimensionError) as e:
        raise StateFileError(f"Malformed spec file: {e}") from e


def load_spec(path: Union[str, Path]) -> EnipSpec:
    """Load a spec file.

    Raises:
        StateFileError: If the file cannot be read or decoded
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise StateFileError(f"Cannot read spec file {path}: {e}") from e
    return parse_spec(payload, label=Path(path).stem)
