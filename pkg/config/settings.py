"""Centralized configuration settings for egn-bounds.

This module defines all configuration parameters for the egn-bounds system,
including the dense-matrix size guard, numerical tolerances, optimizer and
oracle defaults, output formatting and logging settings.
"""

import os
from typing import Optional
from pydantic_settings import BaseSettings
from pydantic import Field


class Settings(BaseSettings):
    """Application settings with environment variable support."""

    # Size guards
    EGN_MAX_QUBITS: int = Field(
        default=10,
        description="Largest qubit count for which dense 2^N x 2^N matrices are built"
    )
    GROUP_AVERAGE_MAX_QUBITS: int = Field(
        default=5,
        description="Above this qubit count the group-average projection runs recursively"
    )
    MAX_GENERATORS: int = Field(
        default=20,
        description="Maximum number of Pauli generators accepted by group generation"
    )
    EXHAUSTIVE_SCAN_MAX_QUBITS: int = Field(
        default=7,
        description="Largest qubit count for the exhaustive 4^N commutation scan"
    )

    # State validation tolerances
    HERMITIAN_TOLERANCE: float = Field(
        default=1e-10,
        description="Max elementwise deviation from Hermiticity"
    )
    TRACE_TOLERANCE: float = Field(
        default=1e-10,
        description="Max deviation of the trace from 1"
    )
    PSD_TOLERANCE: float = Field(
        default=1e-9,
        description="Most negative eigenvalue accepted for a density matrix"
    )
    IMAGINARY_TOLERANCE: float = Field(
        default=1e-10,
        description="Largest imaginary part accepted for Tr(rho P)"
    )
    UNITARY_TOLERANCE: float = Field(
        default=1e-10,
        description="Max elementwise deviation of U U^dagger from the identity"
    )
    PHYSICAL_TOLERANCE: float = Field(
        default=1e-9,
        description="Most negative eigenvalue accepted for a physical EG_N triple"
    )

    # Measures
    BISECTION_TOLERANCE: float = Field(
        default=1e-9,
        description="Absolute tolerance of the even-N robustness bisection"
    )
    BISECTION_UPPER: float = Field(
        default=3.0,
        description="Upper end of the robustness bisection bracket"
    )

    # Local-unitary optimizer
    OPTIMIZER_GRID_POINTS: int = Field(
        default=24,
        description="Grid points per angle in the symmetric coarse search"
    )
    OPTIMIZER_TOP_K: int = Field(
        default=5,
        description="Number of grid points refined by Nelder-Mead"
    )
    OPTIMIZER_MAX_ITERATIONS: int = Field(
        default=500,
        description="Nelder-Mead iteration cap per refinement"
    )
    OPTIMIZER_TOLERANCE: float = Field(
        default=1e-10,
        description="Nelder-Mead convergence tolerance on the objective"
    )
    FRAME_SUPPORT_TOLERANCE: float = Field(
        default=1e-9,
        description="Smallest correlation magnitude that fixes a sign of the canonical Pauli frame"
    )

    # Oracles
    ORACLE_LP_TOLERANCE: float = Field(
        default=1e-10,
        description="Primal feasibility tolerance of the robustness LP"
    )
    ORACLE_GRID_RESOLUTION: int = Field(
        default=400,
        description="Grid points per axis for the brute-force distance oracle"
    )

    # Output
    OUTPUT_SIGNIFICANT_DIGITS: int = Field(
        default=12,
        description="Significant digits of every number in CLI output"
    )
    SCHEMA_VERSION: str = Field(
        default="egn-bounds/1",
        description="Top-level schema tag of CLI JSON documents"
    )

    # Logging
    LOG_LEVEL: str = Field(
        default="WARNING",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)"
    )
    LOG_FILE: Optional[str] = Field(
        default=None,
        description="Path to JSON log file; file logging is off when unset"
    )
    LOG_FORMAT: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log message format"
    )

    class Config:
        """Pydantic configuration."""
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True

    def __init__(self, **kwargs):
        """Initialize settings and ensure the log directory exists."""
        super().__init__(**kwargs)
        if self.LOG_FILE:
            log_dir = os.path.dirname(self.LOG_FILE)
            if log_dir and not os.path.exists(log_dir):
                os.makedirs(log_dir, exist_ok=True)


# Global settings instance
settings = Settings()
