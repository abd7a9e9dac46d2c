"""Abstract base class for all egn-bounds CLI commands.

Provides common functionality including timing, structured logging,
error-to-message mapping and the versioned output envelope.
"""

import argparse
import time
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Optional

from config.settings import settings
from utils.errors import EgnError, UsageError
from utils.logger import get_logger, log_command_call


@dataclass
class CommandResult:
    """Standardized result format for all commands.

    ``data`` is a JSON-ready dict, or CSV text for tabular commands.
    """

    success: bool
    data: Optional[Any] = None
    metadata: Optional[Dict[str, Any]] = None
    error: Optional[str] = None
    exit_code: int = 0
    output_format: str = "json"

    def to_dict(self) -> Dict[str, Any]:
        """Convert result to dictionary.

        Returns:
            Dictionary representation of the result
        """
        return asdict(self)

    def payload(self) -> Any:
        """The document printed on standard output."""
        if self.error is not None:
            return {"schema": settings.SCHEMA_VERSION, "error": self.error}
        if self.output_format == "json":
            return {"schema": settings.SCHEMA_VERSION, **self.data}
        return self.data


class BaseCommand(ABC):
    """Abstract base class for all CLI commands.

    Subclasses declare their flags in ``add_arguments`` and compute their
    output in ``compute``; ``execute`` wraps ``compute`` with timing,
    logging and error handling.

    Attributes:
        name: Sub-command name
        help: One-line description for ``--help``
        output_format: "json" or "csv"
        logger: Logger instance
    """

    name: str = ""
    help: str = ""
    output_format: str = "json"

    def __init__(self):
        """Initialize base command."""
        self.logger = get_logger(f"commands.{self.name}")

    @classmethod
    @abstractmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Register the command's flags.

        Args:
            parser: Sub-parser of this command
        """

    @abstractmethod
    def compute(self, args: argparse.Namespace) -> Any:
        """Run the command.

        Args:
            args: Parsed command-line arguments

        Returns:
            A dict for JSON commands, CSV text for CSV commands
        """

    def is_failure(self, data: Any) -> bool:
        """Whether a successfully computed result should still exit nonzero."""
        return False

    def n_qubits_of(self, args: argparse.Namespace, data: Any) -> Optional[int]:
        """Qubit count to log for this call, if known."""
        if isinstance(data, dict) and "n_qubits" in data:
            return data["n_qubits"]
        return getattr(args, "n", None)

    def execute(self, args: argparse.Namespace) -> CommandResult:
        """Run ``compute`` with monitoring.

        Args:
            args: Parsed command-line arguments

        Returns:
            CommandResult with the data or an error message
        """
        return self._execute_with_monitoring(self.compute, args)

    def _execute_with_monitoring(
        self,
        func: Callable[[argparse.Namespace], Any],
        args: argparse.Namespace
    ) -> CommandResult:
        """Execute a function with monitoring and error handling.

        Args:
            func: Function to execute
            args: Parsed command-line arguments

        Returns:
            CommandResult with success status and data or error
        """
        start_time = time.time()

        try:
            data = func(args)
            latency_ms = int((time.time() - start_time) * 1000)
            failed = self.is_failure(data)

            log_command_call(
                self.logger,
                self.name,
                self.n_qubits_of(args, data),
                latency_ms,
                "error" if failed else "success",
            )

            return CommandResult(
                success=not failed,
                data=data,
                metadata={"command": self.name, "latency_ms": latency_ms},
                exit_code=1 if failed else 0,
                output_format=self.output_format,
            )

        except Exception as e:
            latency_ms = int((time.time() - start_time) * 1000)

            error_msg = self.handle_errors(e)
            log_command_call(
                self.logger,
                self.name,
                getattr(args, "n", None),
                latency_ms,
                "error",
                error=error_msg
            )
            if not isinstance(e, EgnError):
                self.logger.exception(f"Unexpected failure in {self.name}")

            return CommandResult(
                success=False,
                error=error_msg,
                metadata={"command": self.name, "latency_ms": latency_ms},
                exit_code=2 if isinstance(e, UsageError) else 1,
                output_format=self.output_format,
            )

    def handle_errors(self, error: Exception) -> str:
        """Handle and format errors consistently.

        Args:
            error: Exception that occurred

        Returns:
            Formatted error message
        """
        error_type = type(error).__name__
        error_msg = str(error)

        # Map library errors to user-facing messages
        error_mapping = {
            "StateFileError": f"Invalid input file: {error_msg}",
            "InvalidStateError": f"Invalid state: {error_msg}",
            "UnphysicalTensorError": f"Unphysical state: {error_msg}",
            "InvalidSpecError": f"Spec fails verification: {error_msg}",
            "SpecConstructionError": f"Cannot build spec: {error_msg}",
            "SizeLimitError": f"Too large: {error_msg}",
            "DimensionError": f"Qubit count mismatch: {error_msg}",
            "DomainError": f"Outside the physical region: {error_msg}",
            "ArgumentError": f"Invalid argument: {error_msg}",
            "UsageError": f"Invalid usage: {error_msg}",
        }

        return error_mapping.get(error_type, f"{error_type}: {error_msg}")
