"""Decision procedures for maps fixed by group elements and for one-parameter degenerations of maps.

The action ``(g, h) . F = h F(g^-1 x)`` is linear on the coefficient space of component tuples. Its eigenspaces
hold the maps fixed projectively by ``(g, h)``; whether an eigenspace contains a morphism is decided by
specializing a generic member, and failing that by the resultant of the generic member computed over a
polynomial ring in the eigenspace parameters.
"""
import logging
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from enum import Enum
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

from sympy.polys.domains.domain import Domain
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from projendo.compute_options import ComputeOptions
from projendo.exceptions import FIELD_MISMATCH
from projendo.exceptions import FieldMismatchError
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import InvalidParameterMessage
from projendo.exceptions import OUT_OF_RANGE
from projendo.exceptions import SHAPE_MISMATCH
from projendo.exceptions import ShapeMismatchError
from projendo.exceptions import SingularMatrixError
from projendo.fields import FieldElement
from projendo.fields import NumberField
from projendo.forms import Form
from projendo.forms import monomials
from projendo.forms import substitute_linear
from projendo.linear_algebra import FieldMatrix
from projendo.linear_algebra import integer_combinations
from projendo.projective_maps import ProjectiveMap
from projendo.projective_maps import components_from_coefficients
from projendo.projective_maps import make_map
from projendo.resultants import Regularity
from projendo.resultants import RegularityCertificate
from projendo.resultants import certify_components
from projendo.resultants import macaulay_full_rank
from projendo.resultants import sylvester_determinant

logger = logging.getLogger(__name__)

MapLike = Union[ProjectiveMap, Sequence[Form]]


def _components_of(F: MapLike) -> Tuple[Form, ...]:
    return F.components if isinstance(F, ProjectiveMap) else tuple(F)


@dataclass(frozen=True)
class CoefficientOperator:
    """The matrix of ``F -> h F(g^-1 x)`` on the coefficient vectors of degree-m component tuples.

    Coordinates are ordered component by component, each component by the descending graded-lex order of the
    degree-m monomials, as in :meth:`ProjectiveMap.coefficient_vector`.

    Attributes:
        degree (int): The degree m of the components.
        source_dim (int): r, so that the components have r+1 variables.
        target_dim (int): s, so that there are s+1 components.
        matrix (FieldMatrix): The square operator matrix of size (s+1) * binomial(m+r, r).

    """

    degree: int
    source_dim: int
    target_dim: int
    matrix: FieldMatrix

    @property
    def size(self) -> int:
        """Return the dimension of the coefficient space."""
        return self.matrix.shape[0]

    def apply(self, F: MapLike) -> List[Any]:
        """Return the raw coefficient vector of the un-normalized image of F."""
        components = _components_of(F)
        vector: List[Any] = []
        for component in components:
            vector.extend(component.coefficient_vector())
        if len(vector) != self.size:
            raise ShapeMismatchError(SHAPE_MISMATCH("coefficient vector length", self.size, len(vector)))
        return self.matrix.apply(vector)

    def to_json(self) -> dict:
        """Serialize the operator."""
        return {
            "degree": self.degree,
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "matrix": self.matrix.to_json(),
        }


def pair_coefficient_operator(g: FieldMatrix, h: FieldMatrix, degree: int) -> CoefficientOperator:
    """Return the linear operator of the two-sided action of (g, h) on degree-m maps.

    The column of the basis map with ``x^e`` in component i holds ``h[k][i]`` times the coefficients of
    ``(g^-1 x)^e`` in component k.

    Raises:
        SingularMatrixError: If g or h is singular.
        InvalidParameterError: If the degree is not positive.

    """
    if degree < 1:
        raise InvalidParameterError(OUT_OF_RANGE("degree", degree, 1, None))
    if not h.is_invertible():
        message = f"The matrix {h} is not invertible"
        raise SingularMatrixError(message)
    if g.field != h.field:
        raise FieldMismatchError(FIELD_MISMATCH(g.field, h.field))
    field = g.field
    g_inverse = g.inverse()
    num_vars = g.shape[0]
    num_components = h.shape[0]
    basis = monomials(num_vars, degree)
    size = num_components * len(basis)
    zero = field.domain.zero
    h_rows = h.raw_rows()

    columns: List[List[Any]] = []
    for i in range(num_components):
        for exponents in basis:
            substituted = substitute_linear(Form.monomial(field, exponents), g_inverse).coefficient_vector()
            column = []
            for k in range(num_components):
                scale = h_rows[k][i]
                column.extend(scale * c if scale else zero for c in substituted)
            columns.append(column)
    rows = [[columns[j][i] for j in range(size)] for i in range(size)]
    return CoefficientOperator(degree, num_vars - 1, num_components - 1, FieldMatrix.from_rows(field, rows))


def coefficient_operator(g: FieldMatrix, degree: int) -> CoefficientOperator:
    """Return the linear operator of the conjugation ``F -> g F(g^-1 x)`` on degree-m self-maps."""
    return pair_coefficient_operator(g, g, degree)


class Verdict(str, Enum):
    """Whether an eigenspace of fixed maps contains a morphism."""

    CONTAINS_REGULAR = "contains-a-regular-map"
    CONTAINS_NO_REGULAR = "contains-no-regular-map"
    UNDECIDED = "undecided"


@dataclass
class EigenspaceReport:
    """One eigenspace of a coefficient operator together with its regularity verdict.

    Attributes:
        eigenvalue (FieldElement): The eigenvalue, which lies in the base field.
        basis (List[Tuple[Form, ...]]): A basis of the eigenspace, each vector written as its component tuple.
        verdict (Verdict): Whether some member is a morphism.
        witness (Optional[ProjectiveMap]): A certified-regular member when one was found by specialization.
        method (str): How the verdict was reached: "specialization", "symbolic" or "none".

    """

    eigenvalue: FieldElement
    basis: List[Tuple[Form, ...]]
    verdict: Verdict
    witness: Optional[ProjectiveMap] = None
    method: str = "none"

    @property
    def dim(self) -> int:
        """Return the dimension of the eigenspace."""
        return len(self.basis)

    def to_json(self) -> dict:
        """Serialize the report."""
        result: Dict[str, Any] = {
            "eigenvalue": self.eigenvalue.to_json(),
            "dim": self.dim,
            "basis": [[c.to_json() for c in member] for member in self.basis],
            "verdict": self.verdict.value,
            "method": self.method,
        }
        if self.witness is not None:
            result["witness"] = self.witness.to_json()
        return result


@dataclass
class FixedMapsReport:
    """The fixed maps of a group element, eigenspace by eigenspace.

    Attributes:
        degree (int): The degree m of the maps.
        source_dim (int): The dimension r of the source.
        eigenspaces (List[EigenspaceReport]): One report per eigenvalue in the base field.
        remainder (List[FieldElement]): The factor of the characteristic polynomial without roots in the base
            field, highest degree first; ``[1]`` when the polynomial splits.

    """

    degree: int
    source_dim: int
    eigenspaces: List[EigenspaceReport] = dataclass_field(default_factory=list)
    remainder: List[FieldElement] = dataclass_field(default_factory=list)

    @property
    def has_regular_fixed_map(self) -> bool:
        """Return whether some eigenspace contains a morphism."""
        return any(e.verdict == Verdict.CONTAINS_REGULAR for e in self.eigenspaces)

    def to_json(self) -> dict:
        """Serialize the report."""
        return {
            "degree": self.degree,
            "source_dim": self.source_dim,
            "eigenspaces": [e.to_json() for e in self.eigenspaces],
            "charpoly_remainder": [c.to_json() for c in self.remainder],
        }


def _split_charpoly(matrix: FieldMatrix) -> Tuple[List[Any], List[Any]]:
    """Return the eigenvalues in the base field and the remaining factor of the characteristic polynomial."""
    domain = matrix.domain
    coefficients = matrix.charpoly()
    n = len(coefficients) - 1
    ring = PolyRing(["lambda"], domain, grlex)
    charpoly = ring.from_dict({(n - i,): c for i, c in enumerate(coefficients) if c})
    _, factors = charpoly.factor_list()
    eigenvalues = []
    remainder = ring.one
    for factor, multiplicity in factors:
        if factor.degree() == 1:
            eigenvalues.append(-factor.get((0,), domain.zero) / factor.get((1,), domain.zero))
        else:
            remainder = remainder * factor.monic() ** multiplicity
    degree = remainder.degree()
    remainder_coefficients = [remainder.get((degree - i,), domain.zero) for i in range(degree + 1)]
    return eigenvalues, remainder_coefficients


def _generic_member(basis: Sequence[Sequence[Any]], domain: Domain) -> Tuple[Domain, List[Any]]:
    parameters = domain.poly_ring(*[f"t{j}" for j in range(len(basis))])
    ring = parameters.ring
    vector = []
    for idx in range(len(basis[0])):
        entry = ring.zero
        for gen, member in zip(ring.gens, basis):
            if member[idx]:
                entry += gen * ring.ground_new(member[idx])
        vector.append(entry)
    return parameters, vector


def _symbolic_regular(basis: Sequence[Sequence[Any]], field: NumberField, source_dim: int, degree: int) -> bool:
    """Return whether the resultant of the generic eigenspace member is a nonzero polynomial in the parameters."""
    parameters, vector = _generic_member(basis, field.domain)
    size = len(monomials(source_dim + 1, degree))
    chunks = [vector[i : i + size] for i in range(0, len(vector), size)]
    if source_dim == 1:
        return bool(sylvester_determinant(chunks[0], chunks[1], parameters))
    exponents = monomials(source_dim + 1, degree)
    term_dicts = [{e: c for e, c in zip(exponents, chunk) if c} for chunk in chunks]
    return macaulay_full_rank(term_dicts, [degree] * len(chunks), source_dim + 1, parameters)


def _eigenspace_verdict(
    basis: List[List[Any]], field: NumberField, source_dim: int, degree: int, options: ComputeOptions
) -> Tuple[Verdict, Optional[ProjectiveMap], str]:
    domain = field.domain
    attempts = 0
    for block in integer_combinations(len(basis), options.specialization_bound):
        for support, values in block:
            if attempts >= options.search_budget:
                break
            attempts += 1
            vector = [domain.zero] * len(basis[0])
            for index, value in zip(support, values):
                scalar = field.convert(value)
                vector = [a + scalar * b for a, b in zip(vector, basis[index])]
            components = components_from_coefficients(field, vector, source_dim, degree)
            certificate: RegularityCertificate = certify_components(components, options)
            if certificate.regularity == Regularity.CERTIFIED_REGULAR:
                witness = make_map(components).with_regularity(Regularity.CERTIFIED_REGULAR)
                logger.debug("regular member found after %d specializations: %s", attempts, witness)
                return Verdict.CONTAINS_REGULAR, witness, "specialization"
    if len(basis) > options.symbolic_parameter_cap:
        logger.warning(
            "eigenspace of dimension %d exceeds the symbolic cap %d", len(basis), options.symbolic_parameter_cap
        )
        return Verdict.UNDECIDED, None, "none"
    logger.debug("deciding an eigenspace of dimension %d symbolically", len(basis))
    if _symbolic_regular(basis, field, source_dim, degree):
        return Verdict.CONTAINS_REGULAR, None, "symbolic"
    return Verdict.CONTAINS_NO_REGULAR, None, "symbolic"


def _fixed_maps(operator: CoefficientOperator, options: Optional[ComputeOptions]) -> FixedMapsReport:
    options = options or ComputeOptions()
    matrix = operator.matrix
    field = matrix.field
    eigenvalues, remainder = _split_charpoly(matrix)
    eigenvalues.sort(key=field.coords_of)
    report = FixedMapsReport(operator.degree, operator.source_dim)
    report.remainder = [FieldElement(field, c) for c in remainder]
    identity = FieldMatrix.identity(field, operator.size)
    for eigenvalue in eigenvalues:
        basis = (matrix - identity.scale(eigenvalue)).nullspace()
        verdict, witness, method = _eigenspace_verdict(basis, field, operator.source_dim, operator.degree, options)
        logger.info("eigenvalue %s: eigenspace of dimension %d, %s", field(eigenvalue), len(basis), verdict.value)
        members = [
            tuple(components_from_coefficients(field, v, operator.source_dim, operator.degree)) for v in basis
        ]
        report.eigenspaces.append(EigenspaceReport(FieldElement(field, eigenvalue), members, verdict, witness, method))
    return report


def fixed_maps(g: FieldMatrix, degree: int, options: Optional[ComputeOptions] = None) -> FixedMapsReport:
    """Return the self-maps of degree m fixed projectively by conjugation with g, by eigenspace.

    Args:
        g (FieldMatrix): An invertible matrix.
        degree (int): The degree m >= 1.
        options (Optional[ComputeOptions]): (Optional) The specialization and symbolic limits.

    Returns:
        FixedMapsReport: Every base-field eigenvalue with its eigenspace and verdict, and the unsplit remainder of
        the characteristic polynomial.

    """
    return _fixed_maps(coefficient_operator(g, degree), options)


def pair_fixed_maps(
    g: FieldMatrix, h: FieldMatrix, degree: int, options: Optional[ComputeOptions] = None
) -> FixedMapsReport:
    """Return the self-maps of degree m fixed projectively by the two-sided action of (g, h).

    Raises:
        ShapeMismatchError: If g and h have different sizes.

    """
    if g.shape != h.shape:
        raise ShapeMismatchError(SHAPE_MISMATCH("target matrix shape", g.shape, h.shape))
    return _fixed_maps(pair_coefficient_operator(g, h, degree), options)


@dataclass(frozen=True)
class WeightProfile:
    """The weights of the terms of a map under a one-parameter diagonal subgroup.

    Attributes:
        source_exponents (Tuple[int, ...]): c, acting on the source as diag(lambda^c).
        target_exponents (Tuple[int, ...]): b, acting on the target as diag(lambda^b).
        weights (Tuple[Tuple[int, Tuple[int, ...], int], ...]): (component i, monomial e, b_i - <c, e>) for
            every nonzero term.

    """

    source_exponents: Tuple[int, ...]
    target_exponents: Tuple[int, ...]
    weights: Tuple[Tuple[int, Tuple[int, ...], int], ...]

    @property
    def fixed(self) -> bool:
        """Return whether all weights coincide, that is the subgroup fixes the map projectively."""
        return len({w for _, _, w in self.weights}) <= 1

    @property
    def minimal_weight(self) -> int:
        """Return the smallest weight."""
        return min(w for _, _, w in self.weights)

    def to_json(self) -> dict:
        """Serialize the profile."""
        return {
            "source_exponents": list(self.source_exponents),
            "target_exponents": list(self.target_exponents),
            "weights": [{"component": i, "monomial": list(e), "weight": w} for i, e, w in self.weights],
            "fixed": self.fixed,
        }


def pair_torus_weight_analysis(c: Sequence[int], b: Sequence[int], F: MapLike) -> WeightProfile:
    """Return the weights of F under the subgroup (diag(lambda^c), diag(lambda^b)) of the two-sided action.

    F may be a :class:`ProjectiveMap` or a raw tuple of components (which is not content-reduced).

    Raises:
        ShapeMismatchError: If the exponent vectors do not match the dimensions of F.

    """
    components = _components_of(F)
    if len(c) != components[0].num_vars:
        raise ShapeMismatchError(SHAPE_MISMATCH("source exponents", components[0].num_vars, len(c)))
    if len(b) != len(components):
        raise ShapeMismatchError(SHAPE_MISMATCH("target exponents", len(components), len(b)))
    weights = []
    for i, component in enumerate(components):
        for monomial, _ in component.terms():
            pairing = sum(a * e for a, e in zip(c, monomial.exponents))
            weights.append((i, monomial.exponents, b[i] - pairing))
    if not weights:
        raise InvalidParameterError(InvalidParameterMessage.ZERO_MAP.value)
    return WeightProfile(tuple(c), tuple(b), tuple(weights))


def torus_weight_analysis(a: Sequence[int], F: MapLike) -> WeightProfile:
    """Return the weights ``a_i - <a, e>`` of F under conjugation by diag(lambda^a).

    Examples:
        >>> QQ = NumberField.rationals()
        >>> torus_weight_analysis((0, 1), [Form.monomial(QQ, (3, 0)), Form.monomial(QQ, (0, 3))]).fixed
        False

    """
    return pair_torus_weight_analysis(a, a, F)


class LimitTag(str, Enum):
    """The nature of a one-parameter limit."""

    REGULAR_LIMIT = "RegularLimit"
    CONSTANT_OR_DEGENERATE = "ConstantOrDegenerate"


@dataclass
class LimitResult:
    """The lambda -> 0 limit of a P^1 -> P^1 map under (diag(lambda^-c, lambda^c), diag(lambda^-b, lambda^b)).

    Attributes:
        tag (LimitTag): RegularLimit when the limit tuple has no common zero.
        limit (Tuple[Form, ...]): The minimal-weight terms of each component, possibly zero or irregular.
        surviving_terms (List[Tuple[int, Tuple[int, ...]]]): (component, monomial) of every kept term.
        weight (int): The minimal weight.
        certificate (RegularityCertificate): How the regularity of the limit was decided.

    """

    tag: LimitTag
    limit: Tuple[Form, ...]
    surviving_terms: List[Tuple[int, Tuple[int, ...]]]
    weight: int
    certificate: RegularityCertificate

    @property
    def limit_map(self) -> ProjectiveMap:
        """Return the limit as a normalized map, certified regular for a RegularLimit."""
        result = make_map(self.limit)
        if self.tag == LimitTag.REGULAR_LIMIT:
            return result.with_regularity(Regularity.CERTIFIED_REGULAR)
        return result

    def to_json(self) -> dict:
        """Serialize the limit."""
        return {
            "tag": self.tag.value,
            "limit": [c.to_json() for c in self.limit],
            "surviving_terms": [{"component": i, "monomial": list(e)} for i, e in self.surviving_terms],
            "weight": self.weight,
            "certificate": self.certificate.to_json(),
        }


def one_param_limit(
    F: MapLike, c: int, b: int, options: Optional[ComputeOptions] = None
) -> LimitResult:
    """Return the limit of F under the one-parameter subgroup as lambda goes to 0.

    The term ``x0^i x1^(m-i)`` of component 0 has weight ``(2i - m)c - b`` and the one of component 1 has weight
    ``(2i - m)c + b``; the limit keeps exactly the terms of minimal weight.

    Raises:
        InvalidParameterError: If F is not a P^1 -> P^1 map or (c, b) = (0, 0).

    """
    components = _components_of(F)
    if len(components) != 2 or components[0].num_vars != 2:
        raise InvalidParameterError(InvalidParameterMessage.NOT_P1_MAP.value)
    if c == 0 and b == 0:
        raise InvalidParameterError(InvalidParameterMessage.TRIVIAL_SUBGROUP.value)
    profile = pair_torus_weight_analysis((-c, c), (-b, b), components)
    weight = profile.minimal_weight
    surviving = [(i, e) for i, e, w in profile.weights if w == weight]
    limit = []
    for i, component in enumerate(components):
        kept = {e: component.raw_terms()[e] for j, e in surviving if j == i}
        limit.append(Form.from_terms(component.field, 2, component.degree, kept))
    certificate = certify_components(limit, options)
    tag = (
        LimitTag.REGULAR_LIMIT
        if certificate.regularity == Regularity.CERTIFIED_REGULAR
        else LimitTag.CONSTANT_OR_DEGENERATE
    )
    logger.debug("limit under (c, b) = (%d, %d) keeps %d terms: %s", c, b, len(surviving), tag.value)
    return LimitResult(tag, tuple(limit), surviving, weight, certificate)
