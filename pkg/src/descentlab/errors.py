"""Exception hierarchy.

The CLI maps these onto exit codes: ParseError -> 1, DomainError -> 2,
InsufficientPrecisionError -> 3.
"""


class DescentLabError(Exception):
    """Base class for all package errors."""


class ParseError(DescentLabError, ValueError):
    """Malformed textual input (numbers, objects, expressions)."""


class DomainError(DescentLabError, ValueError):
    """Input is well formed but outside the domain of an operation."""


class FieldMismatchError(DomainError):
    pass


class DegenerateLatticeError(DomainError):
    pass


class PoleError(DomainError):
    """Evaluation point within pole tolerance of a singularity."""

    def __init__(self, message, coordinate=None):
        super().__init__(message)
        self.coordinate = coordinate


class DegenerateHomomorphismError(DomainError):
    pass


class NumericOverflowError(DomainError):
    pass


class InsufficientPrecisionError(DescentLabError):
    pass
