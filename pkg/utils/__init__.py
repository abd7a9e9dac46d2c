"""Utility modules for egn-bounds."""

from utils.errors import EgnError
from utils.formatting import dumps, round_significant
from utils.logger import get_logger

__all__ = ["EgnError", "dumps", "get_logger", "round_significant"]
