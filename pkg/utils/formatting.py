"""Deterministic number formatting and JSON serialization for CLI output.

Every float is rounded to a fixed number of significant digits and printed
in its shortest round-trip form, and object keys are sorted, so identical
inputs produce byte-identical documents across platforms.
"""

import json
import math
from typing import Any, Optional

import numpy as np

from config.settings import settings


def round_significant(value: float, digits: Optional[int] = None) -> float:
    """Round a float to a number of significant digits.

    Args:
        value: Number to round
        digits: Significant digits (defaults to settings.OUTPUT_SIGNIFICANT_DIGITS)

    Returns:
        Rounded float; negative zero is normalized to 0.0
    """
    digits = digits or settings.OUTPUT_SIGNIFICANT_DIGITS
    if not math.isfinite(value):
        return value
    rounded = float(f"{value:.{digits}g}")
    return 0.0 if rounded == 0 else rounded


def normalize(payload: Any, digits: Optional[int] = None) -> Any:
    """Recursively convert a payload into JSON-ready builtins with rounded floats.

    Args:
        payload: Nested dicts, lists, tuples, numpy scalars/arrays and floats
        digits: Significant digits for floats

    Returns:
        The same structure built from dict, list, str, int, bool, float and None
    """
    if isinstance(payload, dict):
        return {str(k): normalize(v, digits) for k, v in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [normalize(v, digits) for v in payload]
    if isinstance(payload, np.ndarray):
        return [normalize(v, digits) for v in payload.tolist()]
    if isinstance(payload, (bool, np.bool_)):
        return bool(payload)
    if isinstance(payload, (int, np.integer)):
        return int(payload)
    if isinstance(payload, (float, np.floating)):
        if not math.isfinite(payload):
            return None
        return round_significant(float(payload), digits)
    return payload


def dumps(payload: Any) -> str:
    """Serialize a payload as deterministic JSON.

    Args:
        payload: JSON-compatible structure (numpy values allowed)

    Returns:
        JSON string with sorted keys and rounded numbers
    """
    return json.dumps(normalize(payload), sort_keys=True)
