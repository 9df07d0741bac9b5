"""Exact arithmetic over F_p: polynomials, Gröbner bases and ideal predicates."""

from .factor import Factorization, factor_split
from .groebner import (
    GroebnerBasis,
    division_with_quotients,
    groebner,
    hilbert_function,
    ideal_equal,
    ideal_intersection,
    ideal_product,
    ideal_sum,
    krull_dimension,
    membership_with_coefficients,
    normal_form,
    radical_membership,
    syzygies,
)
from .polynomial import GREVLEX, MonomialOrder, PolyRing, Polynomial, is_prime

__all__ = [
    "Factorization", "GREVLEX", "GroebnerBasis", "MonomialOrder", "PolyRing",
    "Polynomial", "division_with_quotients", "factor_split", "groebner",
    "hilbert_function", "ideal_equal", "ideal_intersection", "ideal_product",
    "ideal_sum", "is_prime", "krull_dimension", "membership_with_coefficients",
    "normal_form", "radical_membership", "syzygies",
]
