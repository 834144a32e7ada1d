"""envlab: exact symbolic verification of stable-envelope axioms on fixed-point data."""

__version__ = "0.1.0"

from .laurent import ExpVec, LaurentPoly
from .polytope import QPolytope, newton_A
from .spaces import builtin_space, load_space, product, projective_space

__all__ = [
    "__version__",
    "ExpVec",
    "LaurentPoly",
    "QPolytope",
    "newton_A",
    "builtin_space",
    "load_space",
    "product",
    "projective_space",
]
