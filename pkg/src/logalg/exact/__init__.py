"""Exact polynomial kernel: Q(i) arithmetic, Groebner bases, syzygies, fraction-field matrices."""
from .groebner import (
    Ideal,
    Submodule,
    groebner_basis,
    ideal_member,
    module_equal,
    module_intersection,
    module_lift,
    module_member,
    normal_form,
    syzygy_module,
)
from .linalg import RationalFunction, adjugate, det, fraction_matrix_inverse, matrix_rank, nullspace, rref
from .numbers import GR, GaussianRational
from .poly import GREVLEX, LEX, MonomialOrder, Poly, conj, doubled_ring, embed, make_ring, parse_poly

__all__ = [
    "GR", "GaussianRational", "Poly", "MonomialOrder", "GREVLEX", "LEX", "make_ring", "parse_poly",
    "doubled_ring", "conj", "embed", "Ideal", "Submodule", "groebner_basis", "normal_form",
    "ideal_member", "syzygy_module", "module_member", "module_equal", "module_lift",
    "module_intersection", "RationalFunction", "det", "adjugate", "fraction_matrix_inverse",
    "rref", "nullspace", "matrix_rank",
]
