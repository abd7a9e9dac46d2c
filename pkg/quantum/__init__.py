"""Pauli algebra, density matrices and Pauli-generated projections.

- pauli: exact Pauli-string products and commutation
- state: validated density matrices and correlation tensors
- projection: projections onto the states a Pauli family leaves invariant
"""

from quantum.pauli import PauliString, PhasedPauli, commutes, multiply
from quantum.projection import EnipSpec, standard_egn_spec, verify_spec
from quantum.state import CorrelationTensor, DensityMatrix

__all__ = [
    "PauliString",
    "PhasedPauli",
    "commutes",
    "multiply",
    "EnipSpec",
    "standard_egn_spec",
    "verify_spec",
    "CorrelationTensor",
    "DensityMatrix",
]
