"""Exact-arithmetic kernel for standard-graded Artinian algebras and a
certifier for G-regularity of small-colength quotients of Gorenstein rings.
"""

from .fields import FieldSpec, GF, QQ
from .linalg import ExactMatrix, Subspace, rref, solve, kernel_matrix
from .rings import (GradedRing, QuotientAlgebra, RingElement, SoclePairing,
                    build_quotient, build_pairing, TruncationError,
                    DegreeRangeError)

__all__ = [
    "FieldSpec", "GF", "QQ",
    "ExactMatrix", "Subspace", "rref", "solve", "kernel_matrix",
    "GradedRing", "QuotientAlgebra", "RingElement", "SoclePairing",
    "build_quotient", "build_pairing", "TruncationError", "DegreeRangeError",
]
