"""
Exception hierarchy for the HWM toolkit.

Library code raises these; the command line maps ``exit_code`` to the
process exit status (2 validation, 3 budget, 4 schema).
"""

from typing import Any, Optional


class HWMError(Exception):
    """Base class for every toolkit error."""

    exit_code = 1


# Structural validation


class HypergraphValidationError(HWMError):
    """A hypergraph (or an object encoded as one) violates an invariant."""

    exit_code = 2

    def __init__(self, message: str, vertex: Optional[str] = None, port: Optional[Any] = None):
        super().__init__(message)
        self.vertex = vertex
        self.port = port


class MissingPort(HypergraphValidationError):
    """A port is covered by no hyperedge."""


class DuplicatePort(HypergraphValidationError):
    """A port appears in two hyperedges (or twice in one)."""


class UnknownSymbol(HypergraphValidationError):
    """A label or word symbol is not in the alphabet."""


class EmptyHyperedge(HypergraphValidationError):
    """A hyperedge has no ports."""


class ArityMismatch(HypergraphValidationError):
    """A port slot or tensor order disagrees with the symbol arity."""


class AlphabetMismatch(HypergraphValidationError):
    """Two operands were built over incompatible alphabets."""


class InvalidTree(HypergraphValidationError):
    """Positions/labels do not form a tree over the ranked alphabet."""


class EmptyWord(HypergraphValidationError):
    """The encoding requires a nonempty word."""


class OddLength(HypergraphValidationError):
    """The 3-ary encoding requires an even-length word."""


class InvalidMap(HypergraphValidationError):
    """A vertex map is not a tiling map."""


class NotClosedBinary(HypergraphValidationError):
    """Normalized values are only defined on graphs whose hyperedges all have two ports."""


# Algebra / model construction


class AlgebraError(HWMError):
    """A tensor, product algebra or model is inconsistent."""

    exit_code = 2


class BasisMismatch(AlgebraError):
    """Operands use different basis families or dimensions."""


class InvalidLabel(AlgebraError):
    """A basis label is outside the algebra's basis."""


class NotDense(AlgebraError):
    """The operation needs a dense (integer-indexed) algebra."""


class NotSymmetric(AlgebraError):
    """A product table or matrix is not symmetric."""

    def __init__(self, message: str, indices: Optional[tuple] = None):
        super().__init__(message)
        self.indices = indices


class NotAssociative(AlgebraError):
    """A product table is not associative."""

    def __init__(self, message: str, indices: Optional[tuple] = None):
        super().__init__(message)
        self.indices = indices


class NotSquare(AlgebraError):
    """A matrix is not square."""


class ShapeMismatch(AlgebraError):
    """Matrix and tensor shapes disagree."""


class ModeOutOfRange(AlgebraError):
    """A tensor mode index is out of range."""


class WrongAlgebra(AlgebraError):
    """The engine does not apply to this product algebra."""


class NotReal(AlgebraError):
    """A real-valued model was required."""


class DimensionMismatch(AlgebraError):
    """Vectors/matrices of a representation disagree in dimension."""


class DegenerateRep(AlgebraError):
    """No basis with nonzero initial/final coordinates exists."""


class ZeroSelfValue(AlgebraError):
    """A template evaluates to zero on itself."""


# Resources and documents


class BudgetExceeded(HWMError):
    """An evaluation would exceed its configured budget."""

    exit_code = 3

    def __init__(self, message: str, needed: Optional[int] = None, budget: Optional[int] = None):
        super().__init__(message)
        self.needed = needed
        self.budget = budget


class SchemaError(HWMError):
    """A JSON document does not match its schema."""

    exit_code = 4

    def __init__(self, message: str, location: str = "/"):
        super().__init__(f"{location}: {message}")
        self.location = location
