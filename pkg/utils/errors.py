"""Exception hierarchy for egn-bounds.

Every error raised by the library derives from ``EgnError`` (itself a
``ValueError``), so the CLI can separate domain failures (exit 1) from
usage errors (exit 2) with a single ``except`` clause.
"""

from typing import Optional


class EgnError(ValueError):
    """Base class for all egn-bounds errors."""


class DimensionError(EgnError):
    """Operands act on different numbers of qubits."""


class SizeLimitError(EgnError):
    """A qubit or generator count exceeds the configured maximum."""


class ArgumentError(EgnError):
    """An argument is outside its documented domain."""


class UsageError(ArgumentError):
    """A command-line value or flag combination is invalid."""


class InvalidStateError(EgnError):
    """A matrix is not a valid density matrix."""


class UnphysicalTensorError(InvalidStateError):
    """A correlation tensor does not describe a positive semidefinite state.

    Attributes:
        min_eigenvalue: Smallest eigenvalue of the reconstructed matrix
    """

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class InvalidSpecError(EgnError):
    """A projection was requested with a spec that fails verification."""


class SpecConstructionError(EgnError):
    """A standard projection spec could not be built.

    Attributes:
        condition: The first violated verification condition
    """

    def __init__(self, message: str, condition: Optional[str] = None):
        super().__init__(message)
        self.condition = condition


class DomainError(EgnError):
    """A measure was evaluated outside the physical region."""


class StateFileError(EgnError):
    """A state or spec file is unreadable or malformed."""
