"""Face-codegeneracy polytopes and the bookkeeping around them."""

from .errors import FcpolyError
from .words import Bidegree, CanonicalForm, Letter, OpWord, normalize, parse_word
from .polytope import CellComplex, fc_polytope, permutohedron
from .factorization import TargetMap, label_polytope

__version__ = "0.1.0"

__all__ = [
    "Bidegree",
    "CanonicalForm",
    "CellComplex",
    "FcpolyError",
    "Letter",
    "OpWord",
    "TargetMap",
    "fc_polytope",
    "label_polytope",
    "normalize",
    "parse_word",
    "permutohedron",
]
