"""Generalized d-mode Mach-Zehnder interferometry for multiphase estimation.

Heisenberg-Weyl constructions of symmetric multiports, exact N-photon
outcome distributions for d = 3 and 4, classical and quantum Fisher
information, and the optimum/scaling analysis built on them.
"""

from .errors import (
    ConsistencyError,
    DimensionError,
    DomainError,
    GenMZError,
    NotHermitianError,
    PoleError,
    SingularSupportError,
    UnsupportedDimensionError,
)
from .interferometer import PhaseVector

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "DimensionError",
    "DomainError",
    "GenMZError",
    "NotHermitianError",
    "PhaseVector",
    "PoleError",
    "SingularSupportError",
    "UnsupportedDimensionError",
]
