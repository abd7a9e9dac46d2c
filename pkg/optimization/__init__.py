"""Local-unitary search for the tightest EG_N bound."""

from optimization.local_unitary import (
    BoundReport,
    LocalUnitaryParams,
    OptimizerConfig,
    ghz_table,
    optimize,
)

__all__ = ["BoundReport", "LocalUnitaryParams", "OptimizerConfig", "ghz_table", "optimize"]
