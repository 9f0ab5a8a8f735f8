"""descentlab: exact descent tests for tori and elliptic curves, Weierstrass
functions at high precision, and integer-relation probes."""

from .arith import (ExactComplex, PrecisionContext, Rational, RealAlgebraic, RealField,
                    abs_squared, conjugate, is_quadratic_irrational, is_rational,
                    is_rational_square, rank_over_Q, to_big)
from .textformat import parse_exact
from .weierstrass import Lattice

__version__ = "0.1.0"

__all__ = [
    "ExactComplex", "PrecisionContext", "Rational", "RealAlgebraic", "RealField",
    "abs_squared", "conjugate", "is_quadratic_irrational", "is_rational",
    "is_rational_square", "rank_over_Q", "to_big", "parse_exact", "Lattice",
]
