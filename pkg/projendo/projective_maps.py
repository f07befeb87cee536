"""Rational maps between projective spaces given by tuples of forms up to a common scalar.

The two-sided action of ``GL(r+1) x GL(s+1)`` on maps is ``(g, h) . F = h F(g^-1 x)``; conjugation is the
diagonal case ``g = h``. Maps from P^1 to P^1 are classified by their ramification divisor.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from sympy.polys.domains.domain import Domain
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from projendo.compute_options import ComputeOptions
from projendo.exceptions import FIELD_MISMATCH
from projendo.exceptions import FieldMismatchError
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import InvalidParameterMessage
from projendo.exceptions import MALFORMED
from projendo.exceptions import SHAPE_MISMATCH
from projendo.exceptions import SchemaError
from projendo.exceptions import ShapeMismatchError
from projendo.exceptions import SingularMatrixError
from projendo.exceptions import UncertifiedMapError
from projendo.exceptions import ZeroMapError
from projendo.fields import FieldElement
from projendo.fields import NumberField
from projendo.forms import Form
from projendo.forms import content_gcd
from projendo.forms import exact_quotient
from projendo.forms import monomials
from projendo.forms import partial_derivative
from projendo.forms import substitute_linear
from projendo.forms import substitute_polys
from projendo.linear_algebra import FieldMatrix
from projendo.resultants import Regularity
from projendo.resultants import RegularityCertificate
from projendo.resultants import binary_coefficients
from projendo.resultants import certify_components
from projendo.resultants import sylvester_determinant

logger = logging.getLogger(__name__)


class ProjectiveMap:
    """A map P^r --> P^s given by s+1 forms of degree m in r+1 variables, up to a common nonzero scalar.

    Maps are built with :func:`make_map`, which removes the common factor of the components and fixes the scalar
    so that the graded-lex-first coefficient of the first nonzero component is 1. Two maps are projectively equal
    exactly when their components are equal.
    """

    __slots__ = ("_components", "_regularity")

    def __init__(self, components: Tuple[Form, ...], regularity: Regularity = Regularity.UNCHECKED) -> None:
        """Initialize from already reduced and normalized components; use :func:`make_map` instead.

        Args:
            components (Tuple[Form, ...]): The normalized components.
            regularity (Regularity): The regularity verdict attached to the map.

        """
        self._components = tuple(components)
        self._regularity = Regularity(regularity)

    @property
    def components(self) -> Tuple[Form, ...]:
        """Return the component forms."""
        return self._components

    @property
    def regularity(self) -> Regularity:
        """Return the regularity verdict."""
        return self._regularity

    @property
    def field(self) -> NumberField:
        """Return the coefficient field."""
        return self._components[0].field

    @property
    def source_dim(self) -> int:
        """Return r, the dimension of the source projective space."""
        return self._components[0].num_vars - 1

    @property
    def target_dim(self) -> int:
        """Return s, the dimension of the target projective space."""
        return len(self._components) - 1

    @property
    def degree(self) -> int:
        """Return the common degree m of the components."""
        return self._components[0].degree

    @property
    def is_certified_regular(self) -> bool:
        """Return whether the map is certified to be a morphism."""
        return self._regularity == Regularity.CERTIFIED_REGULAR

    def with_regularity(self, regularity: Regularity) -> "ProjectiveMap":
        """Return the same map with another regularity verdict."""
        return ProjectiveMap(self._components, regularity)

    def coefficient_vector(self) -> List[Any]:
        """Return the raw coefficients of all components, component by component in graded-lex order."""
        vector: List[Any] = []
        for component in self._components:
            vector.extend(component.coefficient_vector())
        return vector

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProjectiveMap):
            return NotImplemented
        return self._components == other._components

    def __hash__(self) -> int:
        return hash(self._components)

    def __str__(self) -> str:
        return "(" + " : ".join(str(c) for c in self._components) + ")"

    def __repr__(self) -> str:
        return f"ProjectiveMap({self}, {self._regularity.value})"

    def to_json(self) -> dict:
        """Serialize the map."""
        return {
            "degree": self.degree,
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "components": [c.to_json() for c in self._components],
            "regularity": self._regularity.value,
        }

    @staticmethod
    def from_json(data: Any) -> "ProjectiveMap":
        """Parse a map; the components are reduced and normalized by :func:`make_map`.

        Raises:
            SchemaError: If the data does not describe a map.

        """
        components = components_from_json(data)
        regularity = Regularity(data.get("regularity", Regularity.UNCHECKED.value))
        result = make_map(components)
        if result.degree == components[0].degree and regularity != Regularity.UNCHECKED:
            result = result.with_regularity(regularity)
        return result


def components_from_json(data: Any) -> List[Form]:
    """Parse the component forms of a map document exactly as written, without reduction.

    Raises:
        SchemaError: If the data has no component list.

    """
    if not isinstance(data, dict) or not isinstance(data.get("components"), list) or not data["components"]:
        raise SchemaError(MALFORMED("map", "expected a nonempty 'components' list"))
    field = NumberField.from_json(data["field"]) if "field" in data else None
    components = [Form.from_json(c, field) for c in data["components"]]
    if field is None:
        fields = {c.field for c in components}
        if len(fields) > 1:
            rational = NumberField.rationals()
            proper = [f for f in fields if f != rational]
            if len(proper) > 1:
                raise FieldMismatchError(FIELD_MISMATCH(proper[0], proper[1]))
            components = [Form.from_json(c, proper[0]) for c in data["components"]]
    if "degree" in data and int(data["degree"]) != components[0].degree:
        raise SchemaError(MALFORMED("map", "'degree' disagrees with the components"))
    return components


def _check_components(components: Sequence[Form]) -> None:
    if not components:
        raise ShapeMismatchError(InvalidParameterMessage.EMPTY_COMPONENTS.value)
    first = components[0]
    for c in components[1:]:
        if c.field != first.field:
            raise FieldMismatchError(FIELD_MISMATCH(first.field, c.field))
        if c.num_vars != first.num_vars:
            raise ShapeMismatchError(SHAPE_MISMATCH("num_vars", first.num_vars, c.num_vars))
        if c.degree != first.degree:
            raise ShapeMismatchError(SHAPE_MISMATCH("degree", first.degree, c.degree))


def normalize_components(components: Sequence[Form]) -> Tuple[Form, ...]:
    """Scale a tuple of forms so that the leading coefficient of its first nonzero component is 1."""
    leading = next(c.leading_coefficient() for c in components if not c.is_zero())
    inverse = FieldElement(leading.field, leading.field.domain.quo(leading.field.domain.one, leading.value))
    return tuple(c.scale(inverse) for c in components)


def make_map(components: Sequence[Form]) -> ProjectiveMap:
    """Build a map from its components, removing their common factor and fixing the scalar.

    Args:
        components (Sequence[Form]): Forms of a common degree in a common number of variables.

    Returns:
        ProjectiveMap: The content-reduced, normalized map with regularity "unchecked".

    Raises:
        ShapeMismatchError: If the components disagree in shape or the list is empty.
        ZeroMapError: If every component is zero.

    Examples:
        >>> QQ = NumberField.rationals()
        >>> F = make_map([Form.monomial(QQ, (2, 1)), Form.monomial(QQ, (1, 2))])
        >>> F.degree
        1

    """
    _check_components(components)
    if all(c.is_zero() for c in components):
        raise ZeroMapError(InvalidParameterMessage.ZERO_MAP.value)
    divisor = content_gcd(components)
    if divisor.degree > 0:
        reduced = []
        for c in components:
            if c.is_zero():
                reduced.append(Form.zero(c.field, c.num_vars, c.degree - divisor.degree))
            else:
                reduced.append(exact_quotient(c, divisor))
        components = reduced
    return ProjectiveMap(normalize_components(components))


def identity_map(field: NumberField, dim: int) -> ProjectiveMap:
    """Return the identity map of P^dim, certified regular."""
    variables = [Form.variable(field, dim + 1, i) for i in range(dim + 1)]
    return ProjectiveMap(tuple(variables), Regularity.CERTIFIED_REGULAR)


def map_coefficients(F: ProjectiveMap) -> List[FieldElement]:
    """Return the coordinates of F in coefficient space: every component's graded-lex coefficient vector, in turn."""
    return [FieldElement(F.field, value) for value in F.coefficient_vector()]


def components_from_coefficients(
    field: NumberField, vector: Sequence[Any], source_dim: int, degree: int
) -> List[Form]:
    """Split a coefficient vector into its component forms, without reduction or normalization.

    Raises:
        ShapeMismatchError: If the vector length is not a multiple of the number of degree-m monomials.

    """
    basis = monomials(source_dim + 1, degree)
    if not basis or len(vector) % len(basis):
        raise ShapeMismatchError(SHAPE_MISMATCH("coefficient vector length", f"multiple of {len(basis)}", len(vector)))
    components = []
    for start in range(0, len(vector), len(basis)):
        chunk = vector[start : start + len(basis)]
        terms = {e: field.convert(c) for e, c in zip(basis, chunk)}
        components.append(Form.from_terms(field, source_dim + 1, degree, terms))
    return components


def map_from_coefficients(field: NumberField, vector: Sequence[Any], source_dim: int, degree: int) -> ProjectiveMap:
    """Rebuild a map from its coefficient vector; the inverse of :func:`map_coefficients` up to normalization."""
    return make_map(components_from_coefficients(field, vector, source_dim, degree))


def topological_degree(F: ProjectiveMap, options: Optional[ComputeOptions] = None) -> int:
    """Return m^r, the number of preimages of a general point under a regular self-map of P^r.

    Raises:
        ShapeMismatchError: If F is not a self-map.
        UncertifiedMapError: If F is not regular.

    """
    if F.source_dim != F.target_dim:
        raise ShapeMismatchError(SHAPE_MISMATCH("target_dim", F.source_dim, F.target_dim))
    F = ensure_certified(F, options)
    return F.degree**F.source_dim


def certify_regular(F: ProjectiveMap, options: Optional[ComputeOptions] = None) -> ProjectiveMap:
    """Return F with its regularity decided by :func:`certify_map`."""
    return F.with_regularity(certify_map(F, options).regularity)


def certify_map(F: ProjectiveMap, options: Optional[ComputeOptions] = None) -> RegularityCertificate:
    """Decide whether the components of a self-map of P^r have a common projective zero.

    Raises:
        ShapeMismatchError: If the source and target dimensions differ.

    """
    if F.source_dim != F.target_dim:
        raise ShapeMismatchError(SHAPE_MISMATCH("target_dim", F.source_dim, F.target_dim))
    return certify_components(F.components, options)


def ensure_certified(F: ProjectiveMap, options: Optional[ComputeOptions] = None) -> ProjectiveMap:
    """Certify an unchecked map and return it.

    Raises:
        UncertifiedMapError: If the map is not regular.

    """
    if F.regularity == Regularity.UNCHECKED:
        logger.debug("certifying %s before use", F)
        F = certify_regular(F, options)
    if not F.is_certified_regular:
        message = f"The map {F} is not certified regular ({F.regularity.value})"
        raise UncertifiedMapError(message)
    return F


def compose(F: ProjectiveMap, G: ProjectiveMap) -> ProjectiveMap:
    """Return F o G, of degree deg F * deg G.

    Raises:
        ShapeMismatchError: If G's target is not F's source.
        UncertifiedMapError: If either map is not certified regular.

    """
    if G.target_dim != F.source_dim:
        raise ShapeMismatchError(SHAPE_MISMATCH("G.target_dim", F.source_dim, G.target_dim))
    if F.field != G.field:
        raise FieldMismatchError(FIELD_MISMATCH(F.field, G.field))
    for name, map_ in (("F", F), ("G", G)):
        if not map_.is_certified_regular:
            message = f"{name} = {map_} is not certified regular ({map_.regularity.value})"
            raise UncertifiedMapError(message)
    ring = G.components[0].ring
    images = [g.poly for g in G.components]
    degree = F.degree * G.degree
    composed = [
        Form(F.field, G.source_dim + 1, degree, substitute_polys(f.poly, images, ring)) for f in F.components
    ]
    return make_map(composed).with_regularity(Regularity.CERTIFIED_REGULAR)


def apply_target_matrix(h: FieldMatrix, components: Sequence[Form]) -> List[Form]:
    """Return the components of h o F, that is sum_j h_ij F_j."""
    if h.shape != (len(components), len(components)):
        raise ShapeMismatchError(SHAPE_MISMATCH("target matrix shape", (len(components),) * 2, h.shape))
    first = components[0]
    result = []
    for row in h.raw_rows():
        poly = first.ring.zero
        for coeff, component in zip(row, components):
            if coeff:
                poly += component.poly.mul_ground(coeff)
        result.append(Form(first.field, first.num_vars, first.degree, poly))
    return result


def pair_act_components(g: FieldMatrix, h: FieldMatrix, components: Sequence[Form]) -> List[Form]:
    """Return the components of h F(g^-1 x) without reduction or normalization."""
    if not h.is_invertible():
        message = f"The matrix {h} is not invertible"
        raise SingularMatrixError(message)
    substituted = [substitute_linear(c, g.inverse()) for c in components]
    return apply_target_matrix(h, substituted)


def pair_act(g: FieldMatrix, h: FieldMatrix, F: ProjectiveMap) -> ProjectiveMap:
    """Return (g, h) . F = h F(g^-1 x); the regularity verdict is preserved.

    Raises:
        SingularMatrixError: If g or h is singular.
        ShapeMismatchError: If the matrix sizes do not match the map.

    """
    if g.shape != (F.source_dim + 1, F.source_dim + 1):
        raise ShapeMismatchError(SHAPE_MISMATCH("source matrix shape", (F.source_dim + 1,) * 2, g.shape))
    return make_map(pair_act_components(g, h, F.components)).with_regularity(F.regularity)


def conjugate_act(g: FieldMatrix, F: ProjectiveMap) -> ProjectiveMap:
    """Return g F(g^-1 x), the pair action of (g, g).

    Raises:
        ShapeMismatchError: If F is not a self-map.

    """
    if F.source_dim != F.target_dim:
        raise ShapeMismatchError(SHAPE_MISMATCH("target_dim", F.source_dim, F.target_dim))
    return pair_act(g, g, F)


def projectively_equal(F: ProjectiveMap, G: ProjectiveMap) -> bool:
    """Return whether F = mu * G for a nonzero scalar mu, by comparing normalized representatives."""
    return F.components == G.components


def stabilizer_check(F: ProjectiveMap, g: FieldMatrix, h: Optional[FieldMatrix] = None) -> bool:
    """Return whether (g, h) fixes F projectively; without h the conjugation action of g is used."""
    moved = conjugate_act(g, F) if h is None else pair_act(g, h, F)
    return projectively_equal(moved, F)


def _check_p1_map(F: ProjectiveMap) -> None:
    if F.source_dim != 1 or F.target_dim != 1:
        raise InvalidParameterError(InvalidParameterMessage.NOT_P1_MAP.value)


def ramification_form(F: ProjectiveMap, options: Optional[ComputeOptions] = None) -> Form:
    """Return the Jacobian determinant of a P^1 -> P^1 map, normalized to leading coefficient 1.

    Its zeros are the ramification points; it has degree 2m - 2. For m = 1 the constant form 1 is returned.

    Raises:
        InvalidParameterError: If F is not a map from P^1 to P^1.
        UncertifiedMapError: If F is not regular.

    """
    _check_p1_map(F)
    F = ensure_certified(F, options)
    f0, f1 = F.components
    if F.degree == 1:
        return Form.constant(F.field, 2)
    jacobian = partial_derivative(f0, 0) * partial_derivative(f1, 1) - partial_derivative(f0, 1) * partial_derivative(
        f1, 0
    )
    return jacobian.monic()


class BinaryFormFactorization:
    """A binary form written as constant * prod(factor ** multiplicity) over its base field.

    Factors are irreducible over the base field, pairwise non-proportional and have leading coefficient 1.
    """

    def __init__(self, constant: FieldElement, factors: List[Tuple[Form, int]]) -> None:
        """Initialize the factorization.

        Args:
            constant (FieldElement): The scalar in front.
            factors (List[Tuple[Form, int]]): The (factor, multiplicity) pairs.

        """
        self.constant = constant
        self.factors = factors

    @property
    def point_count(self) -> int:
        """Return the number of distinct geometric roots, counting d for an irreducible factor of degree d."""
        return sum(factor.degree for factor, _ in self.factors)

    @property
    def multiplicities(self) -> List[int]:
        """Return the multiplicity of every factor."""
        return [multiplicity for _, multiplicity in self.factors]

    def expand(self) -> Form:
        """Return the product constant * prod(factor ** multiplicity)."""
        field = self.constant.field
        result = Form.constant(field, 2, self.constant)
        for factor, multiplicity in self.factors:
            for _ in range(multiplicity):
                result = result * factor
        return result

    def to_json(self) -> dict:
        """Serialize the factorization."""
        return {
            "constant": self.constant.to_json(),
            "factors": [{"factor": f.to_json(), "multiplicity": k} for f, k in self.factors],
        }


def _homogenize(coefficients_high_to_low: Sequence[Any], field: NumberField) -> Form:
    degree = len(coefficients_high_to_low) - 1
    terms = {(degree - i, i): c for i, c in enumerate(coefficients_high_to_low) if c}
    return Form.from_terms(field, 2, degree, terms)


def _factor_sort_key(item: Tuple[Form, int]) -> tuple:
    factor, _ = item
    coords = [factor.field.coords_of(c) for c in reversed(factor.coefficient_vector())]
    return (factor.degree, coords)


def squarefree_factorization(f: Form) -> BinaryFormFactorization:
    """Factor a nonzero binary form over its base field.

    The form is dehomogenized at x1 = 1 after splitting off the largest power of x1, decomposed into square-free
    parts by gcd computations, and each part is factored over the base field; the factors are rehomogenized.

    Raises:
        InvalidParameterError: If f is zero or not binary.

    """
    if f.num_vars != 2:
        raise InvalidParameterError(InvalidParameterMessage.NON_BINARY.value)
    if f.is_zero():
        raise InvalidParameterError(InvalidParameterMessage.ZERO_FORM.value)
    field = f.field
    domain = field.domain
    x1_power = min(monom[1] for monom in f.raw_terms())
    dehomogenized_degree = f.degree - x1_power
    coefficients = binary_coefficients(f.raw_terms(), f.degree, domain.zero)[: dehomogenized_degree + 1]

    univariate: PolyRing = PolyRing(["t"], domain, grlex)
    poly = univariate.from_dict({(dehomogenized_degree - i,): c for i, c in enumerate(coefficients) if c})

    factors: List[Tuple[Form, int]] = []
    if x1_power:
        factors.append((Form.variable(field, 2, 1), x1_power))
    constant, parts = poly.sqf_list()
    for part, multiplicity in parts:
        if part.degree() < 1:
            continue
        part_constant, irreducibles = part.factor_list()
        constant = constant * part_constant**multiplicity
        for irreducible, inner in irreducibles:
            leading = irreducible.LC
            constant = constant * leading ** (inner * multiplicity)
            monic = irreducible.monic()
            degree = monic.degree()
            high_to_low = [monic.get((degree - i,), domain.zero) for i in range(degree + 1)]
            factors.append((_homogenize(high_to_low, field), inner * multiplicity))
    factors.sort(key=_factor_sort_key)
    return BinaryFormFactorization(FieldElement(field, domain.convert(constant)), factors)


class OrbitTag(str, Enum):
    """The position of a map's orbit under the two-sided action."""

    TORUS_FORM = "TorusForm"
    BOUNDARY = "Boundary"
    CLOSED = "Closed"


@dataclass(frozen=True)
class OrbitType:
    """The orbit classification of a P^1 -> P^1 map together with the ramification data it was read from.

    Attributes:
        tag (OrbitTag): The classification.
        witness (BinaryFormFactorization): The factorization of the ramification form.

    """

    tag: OrbitTag
    witness: BinaryFormFactorization

    def to_json(self) -> dict:
        """Serialize the classification."""
        return {
            "tag": self.tag.value,
            "ramification": self.witness.to_json(),
            "point_count": self.witness.point_count,
        }


def classify_orbit(F: ProjectiveMap, options: Optional[ComputeOptions] = None) -> OrbitType:
    """Classify a regular P^1 -> P^1 map of degree m >= 2 by its ramification divisor.

    TorusForm: the ramification is supported at exactly two points, each of multiplicity m - 1. Boundary: not
    TorusForm, but some point has multiplicity m - 1. Closed: otherwise.

    Raises:
        InvalidParameterError: If F is not a P^1 -> P^1 map of degree at least 2.
        UncertifiedMapError: If F is not regular.

    """
    _check_p1_map(F)
    if F.degree < 2:
        raise InvalidParameterError(InvalidParameterMessage.LOW_DEGREE.value)
    factorization = squarefree_factorization(ramification_form(F, options))
    top = F.degree - 1
    multiplicities = factorization.multiplicities
    if factorization.point_count == 2 and all(k == top for k in multiplicities):
        tag = OrbitTag.TORUS_FORM
    elif any(k == top for k in multiplicities):
        tag = OrbitTag.BOUNDARY
    else:
        tag = OrbitTag.CLOSED
    return OrbitType(tag, factorization)


def branch_form(F: ProjectiveMap, options: Optional[ComputeOptions] = None) -> Form:
    """Return the branch form of a P^1 -> P^1 map: the binary form in the target coordinates (y0, y1) vanishing
    at the images of the ramification points, with multiplicities.

    It is the resultant in x of the ramification form R(x) and y1 f0(x) - y0 f1(x), of degree 2m - 2, normalized
    to leading coefficient 1. For m = 1 the constant form 1 is returned.
    """
    _check_p1_map(F)
    F = ensure_certified(F, options)
    if F.degree == 1:
        return Form.constant(F.field, 2)
    field = F.field
    domain: Domain = field.domain
    target = domain.poly_ring("y0", "y1")
    y0, y1 = target.gens
    f0, f1 = F.components
    m = F.degree
    zero = domain.zero
    f0_coeffs = binary_coefficients(f0.raw_terms(), m, zero)
    f1_coeffs = binary_coefficients(f1.raw_terms(), m, zero)
    pencil = [y1 * target.convert(a) - y0 * target.convert(b) for a, b in zip(f0_coeffs, f1_coeffs)]
    ramification = ramification_form(F, options)
    r_coeffs = [target.convert(c) for c in binary_coefficients(ramification.raw_terms(), 2 * m - 2, zero)]
    determinant = sylvester_determinant(r_coeffs, pencil, target)
    return Form.from_terms(field, 2, 2 * m - 2, dict(determinant)).monic()
