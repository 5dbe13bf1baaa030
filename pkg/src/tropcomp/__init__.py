"""Exact polyhedral geometry for tropical compactifications.

Fans, polyhedral complexes, tropical hypersurfaces over a valued field,
tropicalization from boundary-divisor data, and the combinatorics of toric
schemes over a discrete valuation ring. All arithmetic is exact.
"""

from .fan import (
    Fan,
    FanViolation,
    PolyhedralComplex,
    coarsen,
    common_refinement,
    refines,
    slice_at_height_one,
    star,
    support_membership,
    support_translation_space,
    validate_fan,
)
from .lattice import LatticeContext, primitive_generator, smith_normal_form, solve_integer_linear
from .polyhedral import Cone, Polyhedron, dual_cone, hilbert_basis, intersect, is_face
from .tropical import ValuedCoefficient, ValuedLaurentPolynomial, initial_form, tropical_hypersurface

__version__ = "0.1.0"
