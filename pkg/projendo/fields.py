"""Exact scalars: rationals and simple number fields Q(a) = Q[t]/(mu(t)).

Rationals are the elements of sympy's ``QQ`` domain. A :class:`NumberField` wraps either ``QQ`` (degree 1) or an
``AlgebraicField`` generated by a root of the given minimal polynomial; its elements are wrapped in
:class:`FieldElement` at the public surface, while forms and matrices store the raw domain elements.
"""
import functools
import logging
from enum import Enum
from fractions import Fraction
from typing import Any
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

from sympy import CRootOf
from sympy import Poly
from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.domains.domain import Domain
from sympy.polys.polyerrors import CoercionFailed

from projendo.constants import IRREDUCIBILITY_VERIFICATION_DEGREE
from projendo.exceptions import FIELD_MISMATCH
from projendo.exceptions import FieldMismatchError
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import InvalidParameterMessage
from projendo.exceptions import MALFORMED
from projendo.exceptions import SchemaError
from projendo.exceptions import ZeroDivisionFieldError

logger = logging.getLogger(__name__)

BigRational = QQ.dtype
"""type: Arbitrary precision rationals, always in lowest terms with a positive denominator."""

RationalLike = Union[int, str, Fraction, Any]


def rational(value: RationalLike) -> Any:
    """Convert an integer, a ``"p/q"`` string, a :class:`fractions.Fraction` or a rational to a :data:`BigRational`.

    Args:
        value (RationalLike): The value to convert.

    Returns:
        BigRational: The rational in lowest terms.

    Raises:
        SchemaError: If the value is not a rational number.

    """
    if isinstance(value, bool):
        raise SchemaError(MALFORMED("rational", repr(value)))
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                numerator, denominator = text.split("/")
                return QQ(int(numerator), int(denominator))
            return QQ(int(text))
        except (ValueError, ZeroDivisionError) as e:
            raise SchemaError(MALFORMED("rational", repr(value))) from e
    if isinstance(value, QQ.dtype):
        return value
    try:
        return QQ.convert(value)
    except CoercionFailed as e:
        raise SchemaError(MALFORMED("rational", repr(value))) from e


def rational_to_json(value: Any) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when the denominator is 1.

    Args:
        value (BigRational): The rational to serialize.

    Returns:
        str: The canonical string form.

    """
    value = rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class FieldOp(str, Enum):
    """The ring operations accepted by :func:`field_arithmetic` and :func:`form_arithmetic`."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"


class NumberField:
    """A simple number field Q(a), given by the monic minimal polynomial of its generator a.

    A minimal polynomial of degree 1 denotes the rationals themselves. Up to degree 4 the polynomial is verified
    irreducible; above that irreducibility is taken on trust and recorded in :attr:`irreducibility_verified`.

    Examples:
        >>> gaussian = NumberField([1, 0, 1])
        >>> i = gaussian.generator()
        >>> (i * i).coords
        (-1, 0)

    """

    _symbol = Symbol("t")

    def __init__(self, minimal_polynomial: Sequence[RationalLike], verify_irreducible: Optional[bool] = None) -> None:
        """Initialize the field from the coefficients of its minimal polynomial.

        Args:
            minimal_polynomial (Sequence[RationalLike]): The coefficients of mu, lowest degree first.
            verify_irreducible (Optional[bool]): (Optional) Force (True) or skip (False) the irreducibility
                verification. By default it runs up to degree 4.

        Raises:
            InvalidParameterError: If the polynomial is not monic, has degree 0, or is reducible.

        """
        coefficients = [rational(c) for c in minimal_polynomial]
        while coefficients and not coefficients[-1]:
            coefficients.pop()
        if len(coefficients) < 2:
            message = "The minimal polynomial must have degree at least 1"
            raise InvalidParameterError(message)
        if coefficients[-1] != QQ.one:
            message = f"The minimal polynomial must be monic, given {minimal_polynomial}"
            raise InvalidParameterError(message)

        self._degree = len(coefficients) - 1
        if self._degree == 1:
            self._minimal_polynomial = (QQ.zero, QQ.one)
            self._domain: Domain = QQ
            self._irreducibility_verified = True
            return

        self._minimal_polynomial = tuple(coefficients)
        poly = Poly(list(reversed(coefficients)), self._symbol, domain=QQ)
        if verify_irreducible is None:
            verify_irreducible = self._degree <= IRREDUCIBILITY_VERIFICATION_DEGREE
        if verify_irreducible:
            if not poly.is_irreducible:
                message = f"The minimal polynomial {poly.as_expr()} is reducible over QQ"
                raise InvalidParameterError(message)
        else:
            logger.info("irreducibility of %s taken on trust", poly.as_expr())
        self._irreducibility_verified = bool(verify_irreducible)
        self._domain = QQ.algebraic_field((poly, CRootOf(poly, 0)))

    @classmethod
    def rationals(cls) -> "NumberField":
        """Return the field of rational numbers."""
        return _cached_field(("0", "1"))

    @property
    def degree(self) -> int:
        """Return the degree d of the field over the rationals."""
        return self._degree

    @property
    def minimal_polynomial(self) -> Tuple[Any, ...]:
        """Return the coefficients of the minimal polynomial, lowest degree first."""
        return self._minimal_polynomial

    @property
    def domain(self) -> Domain:
        """Return the sympy domain the elements live in."""
        return self._domain

    @property
    def irreducibility_verified(self) -> bool:
        """Return whether the minimal polynomial was verified irreducible."""
        return self._irreducibility_verified

    @property
    def is_rational(self) -> bool:
        """Return whether this is the field of rational numbers."""
        return self._degree == 1

    def element(self, coords: Sequence[RationalLike]) -> "FieldElement":
        """Build the element sum(coords[j] * a**j).

        Args:
            coords (Sequence[RationalLike]): Exactly d rational coordinates, lowest power first.

        Returns:
            FieldElement: The element.

        Raises:
            InvalidParameterError: If the number of coordinates differs from the degree of the field.

        """
        if len(coords) != self._degree:
            message = f"Expected {self._degree} coordinates, given {len(coords)}"
            raise InvalidParameterError(message)
        return FieldElement(self, self.from_coords(coords))

    def from_coords(self, coords: Sequence[RationalLike]) -> Any:
        """Build a raw domain element from its coordinates, lowest power first."""
        values = [rational(c) for c in coords]
        if self.is_rational:
            return values[0]
        return self._domain.new(list(reversed(values)))

    def coords_of(self, value: Any) -> Tuple[Any, ...]:
        """Return the d rational coordinates of a raw domain element, lowest power first."""
        if self.is_rational:
            return (value,)
        high_to_low = value.to_list()
        low_to_high = list(reversed(high_to_low)) + [QQ.zero] * (self._degree - len(high_to_low))
        return tuple(low_to_high)

    def convert(self, value: Any) -> Any:
        """Convert an integer, rational or :class:`FieldElement` of this field into a raw domain element.

        Raises:
            FieldMismatchError: If a :class:`FieldElement` of another field is given.

        """
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(FIELD_MISMATCH(self, value.field))
            return value.value
        if isinstance(value, (int, str, Fraction)) or isinstance(value, QQ.dtype):
            return self._domain.convert_from(rational(value), QQ)
        return self._domain.convert(value)

    def __call__(self, value: Any) -> "FieldElement":
        return FieldElement(self, self.convert(value))

    def zero(self) -> "FieldElement":
        """Return the additive identity."""
        return FieldElement(self, self._domain.zero)

    def one(self) -> "FieldElement":
        """Return the multiplicative identity."""
        return FieldElement(self, self._domain.one)

    def generator(self) -> "FieldElement":
        """Return the generator a of the field (for the rationals, the root of ``t``, which is 0)."""
        if self.is_rational:
            return self.zero()
        return FieldElement(self, self._domain.new([QQ.one, QQ.zero]))

    def to_json(self) -> List[str]:
        """Serialize the field as its minimal polynomial coefficients, lowest degree first."""
        return [rational_to_json(c) for c in self._minimal_polynomial]

    @staticmethod
    def from_json(data: Any) -> "NumberField":
        """Parse a field from its list of minimal polynomial coefficients.

        Raises:
            SchemaError: If the data is not a list of rationals.

        """
        if data is None:
            return NumberField.rationals()
        if not isinstance(data, list):
            raise SchemaError(MALFORMED("field", "expected a list of coefficients"))
        return _cached_field(tuple(rational_to_json(rational(c)) for c in data))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NumberField) and self._minimal_polynomial == other._minimal_polynomial

    def __hash__(self) -> int:
        return hash(self._minimal_polynomial)

    def __str__(self) -> str:
        if self.is_rational:
            return "QQ"
        poly = Poly(list(reversed(self._minimal_polynomial)), self._symbol, domain=QQ)
        return f"QQ<{poly.as_expr()}>"

    def __repr__(self) -> str:
        return f"NumberField({self.to_json()})"


@functools.lru_cache(maxsize=None)
def _cached_field(coefficients: Tuple[str, ...]) -> NumberField:
    return NumberField(list(coefficients))


class FieldElement:
    """An exact scalar of a :class:`NumberField`.

    Instances are immutable; arithmetic between elements of distinct fields raises :class:`FieldMismatchError`.
    """

    __slots__ = ("_field", "_value")

    def __init__(self, field: NumberField, value: Any) -> None:
        """Initialize from a field and a raw element of its domain.

        Args:
            field (NumberField): The field the element belongs to.
            value (Any): The raw sympy domain element.

        """
        self._field = field
        self._value = value

    @property
    def field(self) -> NumberField:
        """Return the field of the element."""
        return self._field

    @property
    def value(self) -> Any:
        """Return the raw sympy domain element."""
        return self._value

    @property
    def coords(self) -> Tuple[Any, ...]:
        """Return the d rational coordinates of the element, lowest power first."""
        return self._field.coords_of(self._value)

    def is_zero(self) -> bool:
        """Return whether the element is zero."""
        return not self._value

    def _check(self, other: "FieldElement") -> Any:
        if isinstance(other, FieldElement):
            if other._field != self._field:
                raise FieldMismatchError(FIELD_MISMATCH(self._field, other._field))
            return other._value
        return self._field.convert(other)

    def __add__(self, other: Any) -> "FieldElement":
        return FieldElement(self._field, self._value + self._check(other))

    def __radd__(self, other: Any) -> "FieldElement":
        return self + other

    def __sub__(self, other: Any) -> "FieldElement":
        return FieldElement(self._field, self._value - self._check(other))

    def __rsub__(self, other: Any) -> "FieldElement":
        return FieldElement(self._field, self._check(other) - self._value)

    def __mul__(self, other: Any) -> "FieldElement":
        return FieldElement(self._field, self._value * self._check(other))

    def __rmul__(self, other: Any) -> "FieldElement":
        return self * other

    def __neg__(self) -> "FieldElement":
        return FieldElement(self._field, -self._value)

    def __truediv__(self, other: Any) -> "FieldElement":
        return self * field_inverse(other if isinstance(other, FieldElement) else self._field(other))

    def __pow__(self, exponent: int) -> "FieldElement":
        return field_power(self, exponent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self._field == other._field and self._value == other._value
        if isinstance(other, (int, Fraction)) or isinstance(other, QQ.dtype):
            return self._value == self._field.convert(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._field, self.coords))

    def __str__(self) -> str:
        if self._field.is_rational:
            return rational_to_json(self._value)
        terms = [f"{rational_to_json(c)}*a^{j}" for j, c in enumerate(self.coords) if c]
        return " + ".join(terms) or "0"

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    def to_json(self) -> dict:
        """Serialize as ``{"field": [...], "coords": [...]}``."""
        return {"field": self._field.to_json(), "coords": [rational_to_json(c) for c in self.coords]}

    @staticmethod
    def from_json(data: Any, field: Optional[NumberField] = None) -> "FieldElement":
        """Parse an element from its JSON object, or from a bare rational in the given field.

        Args:
            data (Any): Either ``{"field": [...], "coords": [...]}``, an integer, or a rational string.
            field (Optional[NumberField]): The field expected by the caller. Bare rationals are placed in it.

        Returns:
            FieldElement: The parsed element.

        Raises:
            SchemaError: If the data does not describe a field element.
            FieldMismatchError: If the element's field differs from the expected one.

        """
        if isinstance(data, dict):
            if "coords" not in data:
                raise SchemaError(MALFORMED("field element", "missing 'coords'"))
            parsed_field = NumberField.from_json(data.get("field")) if "field" in data else field
            parsed_field = parsed_field or NumberField.rationals()
            if field is not None and parsed_field != field:
                raise FieldMismatchError(FIELD_MISMATCH(field, parsed_field))
            coords = data["coords"]
            if not isinstance(coords, list) or len(coords) != parsed_field.degree:
                raise SchemaError(MALFORMED("field element", f"expected {parsed_field.degree} coordinates"))
            return parsed_field.element(coords)
        field = field or NumberField.rationals()
        return FieldElement(field, field.convert(rational(data)))


def field_arithmetic(a: FieldElement, b: FieldElement, op: FieldOp) -> FieldElement:
    """Add, subtract or multiply two elements of the same field.

    Args:
        a (FieldElement): The first operand.
        b (FieldElement): The second operand.
        op (FieldOp): The operation.

    Returns:
        FieldElement: The exact result, reduced modulo the minimal polynomial.

    Raises:
        FieldMismatchError: If the operands belong to different fields.

    Examples:
        >>> gaussian = NumberField([1, 0, 1])
        >>> i = gaussian.generator()
        >>> field_arithmetic(1 + i, 1 - i, FieldOp.MUL) == 2
        True

    """
    if a.field != b.field:
        raise FieldMismatchError(FIELD_MISMATCH(a.field, b.field))
    op = FieldOp(op)
    if op == FieldOp.ADD:
        return a + b
    if op == FieldOp.SUB:
        return a - b
    return a * b


def field_inverse(a: FieldElement) -> FieldElement:
    """Return the multiplicative inverse of a nonzero element.

    Over a proper number field the inverse is computed by the extended Euclidean algorithm against the minimal
    polynomial (the domain's inversion).

    Raises:
        ZeroDivisionFieldError: If ``a`` is zero.

    """
    if a.is_zero():
        raise ZeroDivisionFieldError(InvalidParameterMessage.ZERO_INVERSE.value)
    domain = a.field.domain
    return FieldElement(a.field, domain.quo(domain.one, a.value))


def field_divide(a: FieldElement, b: FieldElement) -> FieldElement:
    """Return a / b for b nonzero."""
    if a.field != b.field:
        raise FieldMismatchError(FIELD_MISMATCH(a.field, b.field))
    return a * field_inverse(b)


def field_power(a: FieldElement, exponent: int) -> FieldElement:
    """Return a raised to an integer power; negative powers go through :func:`field_inverse`."""
    if exponent < 0:
        return field_power(field_inverse(a), -exponent)
    result = a.field.domain.one
    base = a.value
    while exponent:
        if exponent & 1:
            result = result * base
        base = base * base
        exponent >>= 1
    return FieldElement(a.field, result)
