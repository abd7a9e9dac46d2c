"""Triple-space geometry of EG_N states.

- egn: EG_N triples, their spectra and entanglement measures
- separability: region labels and the M-separable classification
"""

from geometry.egn import EgnTriple, MeasureResult, measures, triple_of
from geometry.separability import Partition, RegionLabel, m_separable_region

__all__ = [
    "EgnTriple",
    "MeasureResult",
    "measures",
    "triple_of",
    "Partition",
    "RegionLabel",
    "m_separable_region",
]
