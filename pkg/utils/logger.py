"""Structured logging utility for egn-bounds.

Every logger writes human-readable lines to standard error and, when
``settings.LOG_FILE`` is set, JSON lines to that file. Standard output is
reserved for the CLI's single JSON or CSV document, so no handler here ever
touches it.

Command executions are logged through ``log_command_call`` with the fields in
``COMMAND_FIELDS`` attached to the record; both formatters know how to show them.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from config.settings import settings

COMMAND_FIELDS = ("command", "n_qubits", "latency_ms", "status", "error")

_configured: List[logging.Logger] = []


def _record_fields(record: logging.LogRecord) -> Dict[str, Any]:
    return {key: getattr(record, key) for key in COMMAND_FIELDS if hasattr(record, key)}


class JSONFormatter(logging.Formatter):
    """One JSON object per record, command fields included."""

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            **_record_fields(record),
        }
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


class ConsoleFormatter(logging.Formatter):
    """Short console lines, colored by level when writing to a terminal.

    Example:
        INFO     [14:02:11] commands.bound: [bound] bound finished (412ms)
    """

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"

    def __init__(self, use_color: bool = False):
        super().__init__()
        self.use_color = use_color

    def _level(self, levelname: str) -> str:
        if not self.use_color:
            return f"{levelname:8}"
        return f"{self.COLORS.get(levelname, '')}{levelname:8}{self.RESET}"

    def format(self, record: logging.LogRecord) -> str:
        clock = datetime.fromtimestamp(record.created).strftime("%H:%M:%S")
        line = f"{self._level(record.levelname)} [{clock}] {record.name}:"
        if hasattr(record, "command"):
            line += f" [{record.command}]"
        line += f" {record.getMessage()}"
        if hasattr(record, "latency_ms"):
            line += f" ({record.latency_ms}ms)"
        if record.exc_info:
            line += "\n" + self.formatException(record.exc_info)
        return line


def _level_number(level: str) -> int:
    number = logging.getLevelName(level.upper())
    if not isinstance(number, int):
        raise ValueError(f"Unknown log level {level!r}")
    return number


def _file_handler(path: str) -> Optional[logging.Handler]:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        handler = logging.FileHandler(path, encoding="utf-8")
    except OSError as e:
        print(f"egn-bounds: file logging disabled ({e})", file=sys.stderr)
        return None
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(JSONFormatter())
    return handler


def get_logger(name: str) -> logging.Logger:
    """Get or create a logger with the egn-bounds handlers.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    console_level = _level_number(settings.LOG_LEVEL)
    console = logging.StreamHandler(sys.stderr)
    console.setLevel(console_level)
    console.setFormatter(ConsoleFormatter(use_color=sys.stderr.isatty()))
    logger.addHandler(console)
    logger.setLevel(console_level)

    if settings.LOG_FILE:
        handler = _file_handler(settings.LOG_FILE)
        if handler is not None:
            logger.addHandler(handler)
            logger.setLevel(logging.DEBUG)

    logger.propagate = False
    _configured.append(logger)
    return logger


def set_level(level: str) -> None:
    """Change the console level of every logger created so far.

    The JSON file, if any, keeps receiving DEBUG records.

    Raises:
        ValueError: If the level name is unknown
    """
    number = _level_number(level)
    for logger in _configured:
        for handler in logger.handlers:
            if not isinstance(handler, logging.FileHandler):
                handler.setLevel(number)
        if not settings.LOG_FILE:
            logger.setLevel(number)


def log_command_call(
    logger: logging.Logger,
    command: str,
    n_qubits: Optional[int],
    latency_ms: int,
    status: str,
    error: Optional[str] = None,
    **kwargs: Any
) -> None:
    """Log one CLI command execution with structured metadata.

    Successful runs are logged at INFO, failures at ERROR.

    Args:
        logger: Logger instance
        command: Command name (e.g. "bound")
        n_qubits: Qubit count the command worked on, if known
        latency_ms: Execution time in milliseconds
        status: "success" or "error"
        error: Error message when status is "error"
        **kwargs: Additional context attached to the record
    """
    extra: Dict[str, Any] = {
        "command": command,
        "n_qubits": n_qubits,
        "latency_ms": latency_ms,
        "status": status,
        **kwargs,
    }
    if error:
        extra["error"] = error

    if status == "success":
        logger.info(f"{command} finished", extra=extra)
    else:
        logger.error(f"{command} failed: {error or 'check failed'}", extra=extra)
