from enum import Enum
from typing import Dict
from typing import Type


class ProjendoException(Exception):
    """Base class for all projendo specific exceptions."""


class ProjendoError(ProjendoException):
    """Raised for errors reported back to the caller of an operation.

    Every concrete error carries a machine-readable ``ERROR_CODE`` and the ``EXIT_STATUS`` the command line
    interface terminates with when the error reaches it.
    """

    ERROR_CODE: str = "error"
    EXIT_STATUS: int = 1


class InvalidParameterError(ProjendoError):
    """Raised when an input violates the precondition of an operation."""

    ERROR_CODE = "invalid-parameter"
    EXIT_STATUS = 2


class FieldMismatchError(InvalidParameterError):
    """Raised when elements of two distinct number fields meet in one operation."""

    ERROR_CODE = "field-mismatch"


class ShapeMismatchError(InvalidParameterError):
    """Raised when variable counts, degrees, dimensions or lengths do not agree."""

    ERROR_CODE = "shape-mismatch"


class ZeroDivisionFieldError(InvalidParameterError):
    """Raised when the zero element of a field is inverted."""

    ERROR_CODE = "division-by-zero"


class SingularMatrixError(InvalidParameterError):
    """Raised when an invertible matrix is required and a singular one is given."""

    ERROR_CODE = "singular-matrix"


class ZeroMapError(InvalidParameterError):
    """Raised when a map is built from components that are all zero."""

    ERROR_CODE = "zero-map"


class UncertifiedMapError(InvalidParameterError):
    """Raised when an operation requires a certified-regular map and receives another."""

    ERROR_CODE = "uncertified-map"


class SmoothnessNotCertifiedError(InvalidParameterError):
    """Raised when a gradient map is requested for a form whose zero locus is not certified smooth."""

    ERROR_CODE = "smoothness-not-certified"


class GroupEnumerationError(InvalidParameterError):
    """Raised when the closure of a set of generators exceeds the enumeration cap."""

    ERROR_CODE = "group-enumeration"


class NoInvariantsError(InvalidParameterError):
    """Raised when a group has no nonzero invariant form in the requested degree."""

    ERROR_CODE = "no-invariants"


class SearchBudgetExhaustedError(InvalidParameterError):
    """Raised when a search runs through its budget without a certified result."""

    ERROR_CODE = "search-budget-exhausted"


class OracleGuardError(InvalidParameterError):
    """Raised when an exhaustive enumeration would exceed its guard."""

    ERROR_CODE = "oracle-guard"


class DegenerateSystemError(InvalidParameterError):
    """Raised when a formal system has no content for the given parameters."""

    ERROR_CODE = "degenerate-system"


class SchemaError(InvalidParameterError):
    """Raised when a JSON document does not follow the expected schema."""

    ERROR_CODE = "schema"


class InternalInvariantError(ProjendoError):
    """Raised when a computed result fails its own postcondition, which signals a defect."""

    ERROR_CODE = "internal-invariant"
    EXIT_STATUS = 1


class EquivarianceVerificationError(InternalInvariantError):
    """Raised when a constructed endomorphism fails the exact equivariance check."""

    ERROR_CODE = "equivariance-verification"


class InconsistentSolutionError(InternalInvariantError):
    """Raised when a solved class does not satisfy the equation it was solved from."""

    ERROR_CODE = "inconsistent-solution"


class InvalidParameterMessage(str, Enum):
    """Error Messages for Invalid Parameters passed."""

    ZERO_INVERSE = "Cannot invert the zero element"
    ZERO_MAP = "A projective map needs at least one nonzero component"
    EMPTY_COMPONENTS = "A projective map needs at least one component"
    EMPTY_GENERATORS = "A matrix group needs at least one generator"
    NO_INVARIANTS = "The group has no nonzero invariant form in this degree"
    ZERO_FORM = "The zero form has no factorization"
    NON_BINARY = "The operation is only defined for binary forms"
    NOT_P1_MAP = "The operation is only defined for maps from P1 to P1"
    LOW_DEGREE = "The operation requires a map of degree at least 2"
    TRIVIAL_SUBGROUP = "The one-parameter subgroup must be nontrivial, (c, b) != (0, 0)"
    FIBER_DEGREE = "The fiber degree k must be at least 1"
    VACUOUS_PULLBACK = "The pullback system is vacuous for k = 1"


def _collect(error_class: Type[ProjendoError]) -> Dict[str, Type[ProjendoError]]:
    collected = {error_class.ERROR_CODE: error_class}
    for subclass in error_class.__subclasses__():
        collected.update(_collect(subclass))
    return collected


ERRORS_BY_CODE: dict = _collect(ProjendoError)


def FIELD_MISMATCH(first: object, second: object) -> str:
    """Error message for operands living in different number fields.

    Args:
        first (object): The field of the first operand.
        second (object): The field of the second operand.

    Returns:
        str: The error message string.

    """
    return f"Operands belong to different fields: {first} and {second}"


def SHAPE_MISMATCH(what: str, expected: object, given: object) -> str:
    """Error message for disagreeing shapes.

    Args:
        what (str): The quantity that disagrees, for example "num_vars".
        expected (object): The expected value.
        given (object): The value that was given.

    Returns:
        str: The error message string.

    """
    return f"Mismatched {what}: expected {expected}, given {given}"


def OUT_OF_RANGE(what: str, value: object, lower: object, upper: object) -> str:
    """Error message for an index or parameter outside its allowed range.

    Args:
        what (str): The name of the parameter.
        value (object): The given value.
        lower (object): The smallest allowed value.
        upper (object): The largest allowed value, or None when unbounded.

    Returns:
        str: The error message string.

    """
    bound = f"[{lower}, {upper}]" if upper is not None else f">= {lower}"
    return f"{what} must be {bound}, given {value}"


def CAP_EXCEEDED(what: str, cap: int) -> str:
    """Error message for an enumeration that outgrew its cap.

    Args:
        what (str): The thing being enumerated.
        cap (int): The cap that was exceeded.

    Returns:
        str: The error message string.

    """
    return f"{what} exceeds the cap of {cap}; the generators likely generate an infinite group"


def BUDGET_EXHAUSTED(what: str, budget: int) -> str:
    """Error message for a search that ran out of candidates.

    Args:
        what (str): The search that failed.
        budget (int): The number of candidates tried.

    Returns:
        str: The error message string.

    """
    return f"{what}: no certified candidate within a budget of {budget}"


def MALFORMED(what: str, detail: str) -> str:
    """Error message for a JSON document that cannot be parsed.

    Args:
        what (str): The kind of document.
        detail (str): What is wrong with it.

    Returns:
        str: The error message string.

    """
    return f"Malformed {what}: {detail}"
