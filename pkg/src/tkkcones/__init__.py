"""Invariant cones, their faces and complex semigroups for Hermitian Lie algebras
built from Hermitian Jordan triple systems."""
from .errors import (ConsistencyError, DomainError, ModeError, NotInSemigroup,
                     NumericalError, StructuralError)
from .jordan_core import EuclideanJordanAlgebra
from .jts import HermitianJts
from .tkk_lie import LieAlgebraG

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError", "DomainError", "EuclideanJordanAlgebra", "HermitianJts",
    "LieAlgebraG", "ModeError", "NotInSemigroup", "NumericalError", "StructuralError",
]
