"""Exception hierarchy for the lattice toolkit.

Every error raised on bad input derives from ``LatticeError``, a ``ValueError``.
"""


class LatticeError(ValueError):
    """Base class for all input and consistency errors."""


class DimensionError(LatticeError):
    """A matrix is not square, or a vector has the wrong length."""


class ShapeError(LatticeError):
    """A matrix is ragged or not symmetric, or a row has the wrong width."""


class RankError(LatticeError):
    """Rows that must be linearly independent are not."""


class DefinitenessError(LatticeError):
    """A form that must be positive definite is not."""


class PreconditionError(LatticeError):
    """An argument violates a documented precondition (e.g. an invalid discriminant)."""


class ParseError(LatticeError):
    """An input file could not be read as a lattice basis."""


class ConsistencyError(LatticeError):
    """Exact arithmetic produced a result that should be impossible; indicates a bug."""
