"""Sparse homogeneous polynomials (forms) over a :class:`NumberField`.

A :class:`Form` wraps a sympy ``PolyElement`` of the ring ``K[x0, ..., xr]`` with graded lexicographic order, so
the leading term of a nonzero form is its graded-lex-first term (the one with the highest power of ``x0``).
"""
import functools
from dataclasses import dataclass
from typing import Any
from typing import Dict
from typing import Iterator
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple

from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement
from sympy.polys.rings import PolyRing

from projendo.constants import VARIABLE_PREFIX
from projendo.exceptions import FIELD_MISMATCH
from projendo.exceptions import FieldMismatchError
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import MALFORMED
from projendo.exceptions import OUT_OF_RANGE
from projendo.exceptions import SHAPE_MISMATCH
from projendo.exceptions import SchemaError
from projendo.exceptions import ShapeMismatchError
from projendo.fields import FieldElement
from projendo.fields import FieldOp
from projendo.fields import NumberField
from projendo.linear_algebra import FieldMatrix


@dataclass(frozen=True)
class Monomial:
    """A monomial x0^e0 * ... * xr^er, stored as its exponent vector."""

    exponents: Tuple[int, ...]

    @property
    def degree(self) -> int:
        """Return the total degree."""
        return sum(self.exponents)

    @property
    def num_vars(self) -> int:
        """Return the number of variables."""
        return len(self.exponents)

    def __str__(self) -> str:
        factors = [
            f"{VARIABLE_PREFIX}{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(self.exponents) if e
        ]
        return "*".join(factors) or "1"


def monomials(num_vars: int, degree: int) -> List[Tuple[int, ...]]:
    """Return every exponent vector of the given total degree, in descending graded-lex order.

    Examples:
        >>> monomials(2, 2)
        [(2, 0), (1, 1), (0, 2)]

    """
    return list(_monomials(num_vars, degree))


def _monomials(num_vars: int, degree: int) -> Iterator[Tuple[int, ...]]:
    if num_vars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _monomials(num_vars - 1, degree - first):
            yield (first,) + rest


@functools.lru_cache(maxsize=None)
def polynomial_ring(field: NumberField, num_vars: int) -> PolyRing:
    """Return the graded-lex polynomial ring ``K[x0, ..., x(num_vars-1)]`` over the field."""
    return PolyRing([f"{VARIABLE_PREFIX}{i}" for i in range(num_vars)], field.domain, grlex)


class Form:
    """A homogeneous polynomial with a fixed number of variables and a fixed degree.

    The zero form keeps its degree, so ``x0**2 - x0**2`` is the zero form of degree 2. Instances are immutable.

    Examples:
        >>> QQ = NumberField.rationals()
        >>> f = Form.from_terms(QQ, 2, 2, {(2, 0): 1, (0, 2): -1})
        >>> f.coefficient((2, 0)) == 1
        True

    """

    __slots__ = ("_field", "_num_vars", "_degree", "_poly")

    def __init__(self, field: NumberField, num_vars: int, degree: int, poly: PolyElement) -> None:
        """Initialize a form from a polynomial of :func:`polynomial_ring`.

        Args:
            field (NumberField): The coefficient field.
            num_vars (int): The number of variables, at least 2.
            degree (int): The degree, at least 0.
            poly (PolyElement): The polynomial; every term must have total degree ``degree``.

        Raises:
            ShapeMismatchError: If the polynomial is not homogeneous of the given degree.

        """
        if num_vars < 2:
            raise ShapeMismatchError(OUT_OF_RANGE("num_vars", num_vars, 2, None))
        if degree < 0:
            raise ShapeMismatchError(OUT_OF_RANGE("degree", degree, 0, None))
        for monom in poly.keys():
            if sum(monom) != degree:
                raise ShapeMismatchError(SHAPE_MISMATCH("term degree", degree, sum(monom)))
        self._field = field
        self._num_vars = num_vars
        self._degree = degree
        self._poly = poly

    @classmethod
    def from_terms(
        cls, field: NumberField, num_vars: int, degree: int, terms: Mapping[Tuple[int, ...], Any]
    ) -> "Form":
        """Build a form from a mapping of exponent vectors to coefficients; zero coefficients are dropped."""
        ring = polynomial_ring(field, num_vars)
        for exponents in terms:
            if len(exponents) != num_vars:
                raise ShapeMismatchError(SHAPE_MISMATCH("exponent length", num_vars, len(exponents)))
        poly = ring.from_dict({tuple(e): field.convert(c) for e, c in terms.items()})
        return cls(field, num_vars, degree, poly)

    @classmethod
    def from_poly(cls, field: NumberField, num_vars: int, poly: PolyElement, degree: Optional[int] = None) -> "Form":
        """Wrap a polynomial, reading the degree from its terms unless given (a zero polynomial needs it)."""
        if degree is None:
            if not poly:
                message = "The degree of the zero form must be given"
                raise ShapeMismatchError(message)
            degree = sum(next(iter(poly.keys())))
        return cls(field, num_vars, degree, poly)

    @classmethod
    def zero(cls, field: NumberField, num_vars: int, degree: int) -> "Form":
        """Return the zero form of the given shape."""
        return cls(field, num_vars, degree, polynomial_ring(field, num_vars).zero)

    @classmethod
    def constant(cls, field: NumberField, num_vars: int, value: Any = 1) -> "Form":
        """Return a constant form of degree 0."""
        ring = polynomial_ring(field, num_vars)
        return cls(field, num_vars, 0, ring.ground_new(field.convert(value)))

    @classmethod
    def monomial(cls, field: NumberField, exponents: Sequence[int], coefficient: Any = 1) -> "Form":
        """Return the form coefficient * x^exponents."""
        exponents = tuple(exponents)
        return cls.from_terms(field, len(exponents), sum(exponents), {exponents: coefficient})

    @classmethod
    def variable(cls, field: NumberField, num_vars: int, index: int) -> "Form":
        """Return the linear form x_index."""
        if not 0 <= index < num_vars:
            raise InvalidParameterError(OUT_OF_RANGE("variable index", index, 0, num_vars - 1))
        exponents = tuple(1 if i == index else 0 for i in range(num_vars))
        return cls.monomial(field, exponents)

    @property
    def field(self) -> NumberField:
        """Return the coefficient field."""
        return self._field

    @property
    def num_vars(self) -> int:
        """Return the number of variables r+1."""
        return self._num_vars

    @property
    def degree(self) -> int:
        """Return the degree m."""
        return self._degree

    @property
    def poly(self) -> PolyElement:
        """Return the underlying sympy polynomial."""
        return self._poly

    @property
    def ring(self) -> PolyRing:
        """Return the polynomial ring of the form."""
        return self._poly.ring

    def is_zero(self) -> bool:
        """Return whether the form is zero."""
        return not self._poly

    def terms(self) -> List[Tuple[Monomial, FieldElement]]:
        """Return the nonzero terms in descending graded-lex order."""
        return [(Monomial(monom), FieldElement(self._field, coeff)) for monom, coeff in self._poly.terms()]

    def raw_terms(self) -> Dict[Tuple[int, ...], Any]:
        """Return the nonzero terms as a dictionary of exponent vectors to raw domain elements."""
        return dict(self._poly)

    def coefficient(self, exponents: Sequence[int]) -> FieldElement:
        """Return the coefficient of x^exponents (zero when absent)."""
        return FieldElement(self._field, self._poly.get(tuple(exponents), self._field.domain.zero))

    def coefficient_vector(self) -> List[Any]:
        """Return the raw coefficients of every degree-m monomial, in descending graded-lex order."""
        zero = self._field.domain.zero
        return [self._poly.get(e, zero) for e in monomials(self._num_vars, self._degree)]

    def leading_coefficient(self) -> FieldElement:
        """Return the graded-lex-first nonzero coefficient (zero for the zero form)."""
        if self.is_zero():
            return self._field.zero()
        return FieldElement(self._field, self._poly.LC)

    def monic(self) -> "Form":
        """Return the form divided by its graded-lex-first coefficient; the zero form is returned unchanged."""
        if self.is_zero():
            return self
        return self._new(self._poly.monic())

    def scale(self, scalar: Any) -> "Form":
        """Return the form multiplied by a scalar of its field."""
        return form_scale(self, scalar)

    def _new(self, poly: PolyElement, degree: Optional[int] = None) -> "Form":
        return Form(self._field, self._num_vars, self._degree if degree is None else degree, poly)

    def __add__(self, other: "Form") -> "Form":
        return form_arithmetic(self, other, FieldOp.ADD)

    def __sub__(self, other: "Form") -> "Form":
        return form_arithmetic(self, other, FieldOp.SUB)

    def __mul__(self, other: "Form") -> "Form":
        if isinstance(other, Form):
            return form_arithmetic(self, other, FieldOp.MUL)
        return form_scale(self, other)

    def __rmul__(self, other: Any) -> "Form":
        return form_scale(self, other)

    def __neg__(self) -> "Form":
        return self._new(-self._poly)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self._field == other._field
            and self._num_vars == other._num_vars
            and self._degree == other._degree
            and self._poly == other._poly
        )

    def __hash__(self) -> int:
        key = tuple((monom, self._field.coords_of(coeff)) for monom, coeff in self._poly.terms())
        return hash((self._num_vars, self._degree, key))

    def __str__(self) -> str:
        return str(self._poly)

    def __repr__(self) -> str:
        return f"Form({self._poly}, degree={self._degree})"

    def to_json(self) -> dict:
        """Serialize as ``{"vars": n, "degree": m, "terms": [[[e0, ...], <FieldElement>], ...]}``."""
        return {
            "vars": self._num_vars,
            "degree": self._degree,
            "terms": [[list(monom.exponents), coeff.to_json()] for monom, coeff in self.terms()],
        }

    @staticmethod
    def from_json(data: Any, field: Optional[NumberField] = None) -> "Form":
        """Parse a form from its JSON object.

        Coefficients may be field element objects or bare rationals; an optional top-level ``"field"`` key gives
        the field of the bare ones.

        Raises:
            SchemaError: If the data does not describe a form.

        """
        if not isinstance(data, dict) or not {"vars", "degree", "terms"} <= set(data):
            raise SchemaError(MALFORMED("form", "expected the keys 'vars', 'degree' and 'terms'"))
        if "field" in data:
            parsed = NumberField.from_json(data["field"])
            if field is not None and parsed != field:
                raise FieldMismatchError(FIELD_MISMATCH(field, parsed))
            field = parsed
        if field is None:
            field = _infer_field(data["terms"])
        terms: Dict[Tuple[int, ...], Any] = {}
        for term in data["terms"]:
            if not isinstance(term, list) or len(term) != 2 or not isinstance(term[0], list):
                raise SchemaError(MALFORMED("form term", repr(term)))
            exponents = tuple(int(e) for e in term[0])
            coefficient = FieldElement.from_json(term[1], field)
            terms[exponents] = terms.get(exponents, field.domain.zero) + coefficient.value
        return Form.from_terms(field, int(data["vars"]), int(data["degree"]), terms)


def _infer_field(terms: list) -> NumberField:
    for term in terms:
        if isinstance(term, list) and len(term) == 2 and isinstance(term[1], dict) and "field" in term[1]:
            return NumberField.from_json(term[1]["field"])
    return NumberField.rationals()


def _check_compatible(f: Form, g: Form) -> None:
    if f.field != g.field:
        raise FieldMismatchError(FIELD_MISMATCH(f.field, g.field))
    if f.num_vars != g.num_vars:
        raise ShapeMismatchError(SHAPE_MISMATCH("num_vars", f.num_vars, g.num_vars))


def form_arithmetic(f: Form, g: Form, op: FieldOp) -> Form:
    """Add, subtract or multiply two forms.

    Args:
        f (Form): The first operand.
        g (Form): The second operand.
        op (FieldOp): The operation.

    Returns:
        Form: The result; degrees add under multiplication and zero coefficients are pruned.

    Raises:
        ShapeMismatchError: If the variable counts differ, or the degrees differ for add and sub.
        FieldMismatchError: If the fields differ.

    """
    _check_compatible(f, g)
    op = FieldOp(op)
    if op == FieldOp.MUL:
        return Form(f.field, f.num_vars, f.degree + g.degree, f.poly * g.poly)
    if f.degree != g.degree:
        raise ShapeMismatchError(SHAPE_MISMATCH("degree", f.degree, g.degree))
    poly = f.poly + g.poly if op == FieldOp.ADD else f.poly - g.poly
    return Form(f.field, f.num_vars, f.degree, poly)


def form_scale(f: Form, scalar: Any) -> Form:
    """Return scalar * f for a scalar of f's field."""
    value = f.field.convert(scalar)
    return Form(f.field, f.num_vars, f.degree, f.poly.mul_ground(value))


def partial_derivative(f: Form, index: int) -> Form:
    """Return the partial derivative of f with respect to x_index, a form of degree m-1.

    Raises:
        InvalidParameterError: If the index is out of range or f is constant.

    """
    if not 0 <= index < f.num_vars:
        raise InvalidParameterError(OUT_OF_RANGE("variable index", index, 0, f.num_vars - 1))
    if f.degree < 1:
        message = "Cannot differentiate a form of degree 0"
        raise InvalidParameterError(message)
    return Form(f.field, f.num_vars, f.degree - 1, f.poly.diff(f.ring.gens[index]))


def gradient(f: Form) -> List[Form]:
    """Return the list of all partial derivatives of f."""
    return [partial_derivative(f, i) for i in range(f.num_vars)]


def substitute_linear(f: Form, matrix: FieldMatrix) -> Form:
    """Return the form x -> f(Mx).

    The substitution is contravariant: ``substitute_linear(f, M @ N)`` equals
    ``substitute_linear(substitute_linear(f, M), N)``.

    Raises:
        ShapeMismatchError: If M is not (r+1) x (r+1).
        FieldMismatchError: If M lives over another field.

    """
    if matrix.shape != (f.num_vars, f.num_vars):
        raise ShapeMismatchError(SHAPE_MISMATCH("matrix shape", (f.num_vars, f.num_vars), matrix.shape))
    if matrix.field != f.field:
        raise FieldMismatchError(FIELD_MISMATCH(f.field, matrix.field))
    ring = f.ring
    images = [sum((c * x for c, x in zip(row, ring.gens) if c), ring.zero) for row in matrix.raw_rows()]
    return Form(f.field, f.num_vars, f.degree, substitute_polys(f.poly, images, ring))


def substitute_polys(poly: PolyElement, images: Sequence[PolyElement], target_ring: PolyRing) -> PolyElement:
    """Replace every generator x_i of ``poly`` by ``images[i]``, an element of ``target_ring``.

    Powers of the images are cached, so the cost is one multiplication per term and variable.
    """
    powers: List[List[PolyElement]] = [[target_ring.one] for _ in images]
    result = target_ring.zero
    for monom, coeff in poly.terms():
        term = target_ring.ground_new(coeff)
        for i, exponent in enumerate(monom):
            if not exponent:
                continue
            cache = powers[i]
            while len(cache) <= exponent:
                cache.append(cache[-1] * images[i])
            term = term * cache[exponent]
        result += term
    return result


def evaluate(f: Form, point: Sequence[Any]) -> FieldElement:
    """Evaluate f at a point given by num_vars field elements (or rationals).

    Raises:
        ShapeMismatchError: If the point has the wrong length.

    """
    if len(point) != f.num_vars:
        raise ShapeMismatchError(SHAPE_MISMATCH("point length", f.num_vars, len(point)))
    values = [f.field.convert(v) for v in point]
    domain = f.field.domain
    total = domain.zero
    for monom, coeff in f.poly.terms():
        term = coeff
        for value, exponent in zip(values, monom):
            if exponent:
                term = term * value**exponent
        total += term
    return FieldElement(f.field, total)


def content_gcd(forms: Sequence[Form]) -> Form:
    """Return the monic greatest common divisor of a list of forms (zero forms are ignored).

    Raises:
        InvalidParameterError: If every form is zero.

    """
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        message = "The gcd of zero forms is undefined"
        raise InvalidParameterError(message)
    divisor = nonzero[0].poly
    for f in nonzero[1:]:
        _check_compatible(nonzero[0], f)
        divisor = divisor.gcd(f.poly)
        if divisor.is_ground:
            break
    first = nonzero[0]
    if divisor.is_ground:
        return Form.constant(first.field, first.num_vars)
    return Form.from_poly(first.field, first.num_vars, divisor.monic())


def exact_quotient(f: Form, divisor: Form) -> Form:
    """Return f / divisor for a divisor known to divide f exactly."""
    _check_compatible(f, divisor)
    return Form(f.field, f.num_vars, f.degree - divisor.degree, f.poly.exquo(divisor.poly))


def euler_defect(f: Form) -> Form:
    """Return sum(x_i * df/dx_i) - m*f, which vanishes for every homogeneous f."""
    total = Form.zero(f.field, f.num_vars, f.degree)
    if f.degree == 0:
        return total
    for i in range(f.num_vars):
        total = total + Form.variable(f.field, f.num_vars, i) * partial_derivative(f, i)
    return total - form_scale(f, f.degree)
