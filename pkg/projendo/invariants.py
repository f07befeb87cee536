"""Finite matrix groups, their invariant forms, and endomorphisms of projective space commuting with them.

The construction follows the gradient route: for a G-invariant form f with smooth zero locus, the gradient map
``I = grad f`` intertwines the action of G with its dual action, and for an invariant f' of the dual group the
composition ``grad f' o grad f`` commutes with every element of G.
"""
import itertools
import logging
import random
from collections import deque
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from enum import Enum
from typing import Any
from typing import Dict
from typing import Iterator
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from projendo.compute_options import ComputeOptions
from projendo.constants import DEFAULT_SEED
from projendo.exceptions import BUDGET_EXHAUSTED
from projendo.exceptions import CAP_EXCEEDED
from projendo.exceptions import EquivarianceVerificationError
from projendo.exceptions import FIELD_MISMATCH
from projendo.exceptions import FieldMismatchError
from projendo.exceptions import GroupEnumerationError
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import InvalidParameterMessage
from projendo.exceptions import MALFORMED
from projendo.exceptions import NoInvariantsError
from projendo.exceptions import OUT_OF_RANGE
from projendo.exceptions import SHAPE_MISMATCH
from projendo.exceptions import SchemaError
from projendo.exceptions import SearchBudgetExhaustedError
from projendo.exceptions import ShapeMismatchError
from projendo.exceptions import SingularMatrixError
from projendo.exceptions import SmoothnessNotCertifiedError
from projendo.fields import NumberField
from projendo.forms import Form
from projendo.forms import gradient
from projendo.forms import monomials
from projendo.forms import substitute_linear
from projendo.linear_algebra import FieldMatrix
from projendo.linear_algebra import independent_subset
from projendo.linear_algebra import integer_combinations
from projendo.parallel import run_parallel
from projendo.projective_maps import ProjectiveMap
from projendo.projective_maps import apply_target_matrix
from projendo.projective_maps import compose
from projendo.projective_maps import make_map
from projendo.resultants import Regularity
from projendo.resultants import certify_components

logger = logging.getLogger(__name__)


class FiniteMatrixGroup:
    """An explicitly enumerated finite subgroup of GL(r+1) over a number field.

    Instances are produced by :func:`enumerate_group` (or :func:`dual_group`); ``elements`` is the full closure of
    ``generators`` and starts with the identity.
    """

    def __init__(self, generators: Tuple[FieldMatrix, ...], elements: Tuple[FieldMatrix, ...]) -> None:
        """Initialize the group from its generators and its enumerated elements.

        Args:
            generators (Tuple[FieldMatrix, ...]): The generating matrices.
            elements (Tuple[FieldMatrix, ...]): Every element of the group, identity first.

        """
        self.generators = generators
        self.elements = elements

    @property
    def field(self) -> NumberField:
        """Return the field of the matrix entries."""
        return self.elements[0].field

    @property
    def dim(self) -> int:
        """Return r+1, the size of the matrices."""
        return self.elements[0].shape[0]

    @property
    def order(self) -> int:
        """Return the number of elements."""
        return len(self.elements)

    def __contains__(self, matrix: FieldMatrix) -> bool:
        return matrix in set(self.elements)

    def __repr__(self) -> str:
        return f"FiniteMatrixGroup(order={self.order}, dim={self.dim}, field={self.field})"

    def to_json(self) -> dict:
        """Serialize the group by its generators, with its order for reference."""
        return {
            "field": self.field.to_json(),
            "generators": [[[e.to_json() for e in row] for row in g.rows()] for g in self.generators],
            "order": self.order,
        }

    @staticmethod
    def from_json(data: Any, options: Optional[ComputeOptions] = None) -> "FiniteMatrixGroup":
        """Parse ``{"field": [...], "generators": [[row, ...], ...], "cap": N}`` and enumerate the group.

        The ``cap`` key is optional and overrides the enumeration cap of ``options``.

        Raises:
            SchemaError: If the document is malformed.
            GroupEnumerationError: If the closure exceeds the cap.

        """
        if not isinstance(data, dict) or not isinstance(data.get("generators"), list):
            raise SchemaError(MALFORMED("group", "expected a 'generators' list"))
        field = NumberField.from_json(data["field"]) if "field" in data else None
        generators = [FieldMatrix.from_json(g, field) for g in data["generators"]]
        cap = data.get("cap")
        return enumerate_group(generators, cap=int(cap) if cap is not None else None, options=options)


def enumerate_group(
    generators: Sequence[FieldMatrix], cap: Optional[int] = None, options: Optional[ComputeOptions] = None
) -> FiniteMatrixGroup:
    """Enumerate the group generated by invertible matrices, breadth first, deduplicating by exact equality.

    Args:
        generators (Sequence[FieldMatrix]): Invertible square matrices over a common field.
        cap (Optional[int]): (Optional) The largest accepted order; defaults to ``options.enumeration_cap``.
        options (Optional[ComputeOptions]): (Optional) The computation limits.

    Returns:
        FiniteMatrixGroup: The enumerated group.

    Raises:
        InvalidParameterError: If there are no generators or the cap is not positive.
        SingularMatrixError: If a generator is singular.
        GroupEnumerationError: If the closure outgrows the cap.

    Examples:
        >>> QQ = NumberField.rationals()
        >>> enumerate_group([FieldMatrix.diagonal(QQ, [-1, -1])]).order
        2

    """
    options = options or ComputeOptions()
    cap = options.enumeration_cap if cap is None else cap
    if cap < 1:
        raise InvalidParameterError(OUT_OF_RANGE("cap", cap, 1, None))
    if not generators:
        raise InvalidParameterError(InvalidParameterMessage.EMPTY_GENERATORS.value)
    first = generators[0]
    for g in generators:
        if g.field != first.field:
            raise FieldMismatchError(FIELD_MISMATCH(first.field, g.field))
        if g.shape != first.shape:
            raise ShapeMismatchError(SHAPE_MISMATCH("generator shape", first.shape, g.shape))
        if not g.is_invertible():
            message = f"The generator {g} is not invertible"
            raise SingularMatrixError(message)

    identity = FieldMatrix.identity(first.field, first.shape[0])
    seen = {identity}
    elements = [identity]
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in generators:
            product = current @ g
            if product in seen:
                continue
            seen.add(product)
            elements.append(product)
            if len(elements) > cap:
                raise GroupEnumerationError(CAP_EXCEEDED("The group order", cap))
            queue.append(product)
    logger.info("enumerated a group of order %d in GL(%d)", len(elements), first.shape[0])
    return FiniteMatrixGroup(tuple(generators), tuple(elements))


def dual_group(G: FiniteMatrixGroup) -> FiniteMatrixGroup:
    """Return the dual (contragredient) group, made of the inverse transposes of the elements of G."""

    def dual(g: FieldMatrix) -> FieldMatrix:
        return g.inverse().transpose()

    return FiniteMatrixGroup(tuple(dual(g) for g in G.generators), tuple(dual(g) for g in G.elements))


def _check_dim(G: FiniteMatrixGroup, f: Form) -> None:
    if f.num_vars != G.dim:
        raise ShapeMismatchError(SHAPE_MISMATCH("num_vars", G.dim, f.num_vars))
    if f.field != G.field:
        raise FieldMismatchError(FIELD_MISMATCH(G.field, f.field))


def reynolds_project(G: FiniteMatrixGroup, f: Form) -> Form:
    """Return the average of f over the group, ``(1/|G|) sum_g f(g^-1 x)``, which is exactly G-invariant.

    Raises:
        ShapeMismatchError: If f has a different number of variables than G.

    Examples:
        >>> QQ = NumberField.rationals()
        >>> swap = enumerate_group([FieldMatrix.from_rows(QQ, [[0, 1], [1, 0]])])
        >>> str(reynolds_project(swap, Form.monomial(QQ, (2, 0))))
        '1/2*x0**2 + 1/2*x1**2'

    """
    _check_dim(G, f)
    # g^-1 runs over the same elements as g
    total = Form.zero(f.field, f.num_vars, f.degree)
    for g in G.elements:
        total = total + substitute_linear(f, g)
    return total.scale(G.field.domain.quo(G.field.domain.one, G.field.convert(G.order)))


def is_invariant(G: FiniteMatrixGroup, f: Form) -> bool:
    """Return whether f(g^-1 x) = f(x) exactly for every element of G."""
    _check_dim(G, f)
    return all(substitute_linear(f, g) == f for g in G.generators)


@dataclass(frozen=True)
class InvariantBasis:
    """A basis of the G-invariant forms of one degree.

    Attributes:
        degree (int): The degree m of the forms.
        basis (Tuple[Form, ...]): Linearly independent invariant forms, each with leading coefficient 1.

    """

    degree: int
    basis: Tuple[Form, ...]

    @property
    def dim(self) -> int:
        """Return the dimension of the space of invariants."""
        return len(self.basis)

    def to_json(self) -> dict:
        """Serialize the basis."""
        return {"degree": self.degree, "dim": self.dim, "basis": [f.to_json() for f in self.basis]}


def invariant_basis(G: FiniteMatrixGroup, degree: int) -> InvariantBasis:
    """Return a basis of the invariant forms of the given degree.

    Every degree-m monomial is averaged over the group and a maximal independent subset of the images is kept,
    chosen greedily in descending graded-lex order of the monomials.

    Raises:
        InvalidParameterError: If the degree is not positive.

    """
    if degree < 1:
        raise InvalidParameterError(OUT_OF_RANGE("degree", degree, 1, None))
    images = [reynolds_project(G, Form.monomial(G.field, e)) for e in monomials(G.dim, degree)]
    chosen = independent_subset([image.coefficient_vector() for image in images], G.field.domain)
    basis = tuple(images[i].monic() for i in chosen)
    logger.debug("invariants of degree %d for a group of order %d: dimension %d", degree, G.order, len(basis))
    return InvariantBasis(degree, basis)


def _candidates(basis: Sequence[Form], seed: int) -> Iterator[Form]:
    rng = random.Random(seed) if seed else None
    for block in integer_combinations(len(basis)):
        if rng is not None:
            rng.shuffle(block)
        for support, assignment in block:
            candidate = basis[support[0]].scale(assignment[0])
            for index, value in zip(support[1:], assignment[1:]):
                candidate = candidate + basis[index].scale(value)
            yield candidate


def is_smooth(f: Form, options: Optional[ComputeOptions] = None) -> bool:
    """Return whether the zero locus of f is certified smooth, that is the partials have no common zero."""
    return certify_components(gradient(f), options).regularity == Regularity.CERTIFIED_REGULAR


def smooth_invariant_search(
    G: FiniteMatrixGroup,
    degree: int,
    seed: int = DEFAULT_SEED,
    budget: Optional[int] = None,
    options: Optional[ComputeOptions] = None,
) -> Form:
    """Find an invariant form of the given degree whose zero locus is certified smooth.

    Small integer combinations of the invariant basis are tried level by level (the largest absolute coefficient
    grows by one per level, sparser combinations first). Seed 0 keeps the canonical order; any other seed
    shuffles the candidates within each block reproducibly.

    Args:
        G (FiniteMatrixGroup): The group.
        degree (int): The degree m >= 2.
        seed (int): (Optional) The seed of the candidate order. Defaults to 0.
        budget (Optional[int]): (Optional) The number of candidates to try; defaults to ``options.search_budget``.
        options (Optional[ComputeOptions]): (Optional) The computation limits.

    Returns:
        Form: The first certified candidate.

    Raises:
        InvalidParameterError: If the degree is below 2.
        NoInvariantsError: If the group has no invariants of this degree.
        SearchBudgetExhaustedError: If no candidate within the budget is certified smooth.

    """
    options = options or ComputeOptions()
    budget = options.search_budget if budget is None else budget
    if degree < 2:
        raise InvalidParameterError(OUT_OF_RANGE("degree", degree, 2, None))
    basis = invariant_basis(G, degree).basis
    if not basis:
        raise NoInvariantsError(InvalidParameterMessage.NO_INVARIANTS.value)
    for attempt, candidate in enumerate(itertools.islice(_candidates(basis, seed), budget), start=1):
        if is_smooth(candidate, options):
            logger.info("smooth invariant of degree %d found after %d candidates: %s", degree, attempt, candidate)
            return candidate
        logger.debug("candidate %d rejected: %s", attempt, candidate)
    logger.warning("no smooth invariant of degree %d among %d candidates", degree, budget)
    raise SearchBudgetExhaustedError(BUDGET_EXHAUSTED("Smooth invariant search", budget))


def gradient_map(f: Form, options: Optional[ComputeOptions] = None) -> ProjectiveMap:
    """Return the map x -> (df/dx0 : ... : df/dxr) of degree m - 1.

    Raises:
        SmoothnessNotCertifiedError: If the zero locus of f is not certified smooth.

    """
    if f.degree < 2 or not is_smooth(f, options):
        message = f"The zero locus of {f} is not certified smooth"
        raise SmoothnessNotCertifiedError(message)
    return make_map(gradient(f)).with_regularity(Regularity.CERTIFIED_REGULAR)


class EquivarianceMode(str, Enum):
    """The commutation relation checked by :func:`verify_equivariance`.

    CONJUGATION checks F o g = g o F and INTERTWINING checks F o g = (g^-1)^t o F, both projectively.
    """

    CONJUGATION = "conjugation"
    INTERTWINING = "intertwining"


def _check_element(F: ProjectiveMap, g: FieldMatrix, mode: EquivarianceMode) -> bool:
    source = [substitute_linear(c, g) for c in F.components]
    target_matrix = g if mode == EquivarianceMode.CONJUGATION else g.inverse().transpose()
    target = apply_target_matrix(target_matrix, F.components)
    return make_map(source) == make_map(target)


def equivariance_transcript(
    F: ProjectiveMap, G: FiniteMatrixGroup, mode: EquivarianceMode, options: Optional[ComputeOptions] = None
) -> List[bool]:
    """Check every element of G against F, one parallel task per element.

    Returns:
        List[bool]: Whether the relation holds, per element of ``G.elements``.

    Raises:
        ShapeMismatchError: If the dimensions of F and G disagree.

    """
    options = options or ComputeOptions()
    if F.source_dim + 1 != G.dim or F.target_dim + 1 != G.dim:
        raise ShapeMismatchError(SHAPE_MISMATCH("map dimensions", (G.dim - 1, G.dim - 1), (F.source_dim, F.target_dim)))
    results = run_parallel(
        _check_element,
        [(F, g, EquivarianceMode(mode)) for g in G.elements],
        timeout=options.parallel_timeout,
        max_workers=options.max_parallel_workers,
    )
    return [result is True for result in results]


def verify_equivariance(
    F: ProjectiveMap, G: FiniteMatrixGroup, mode: EquivarianceMode, options: Optional[ComputeOptions] = None
) -> bool:
    """Return whether the relation of ``mode`` holds exactly for every element of G."""
    return all(equivariance_transcript(F, G, mode, options))


@dataclass
class EquivariantConstruction:
    """An endomorphism commuting with a finite group, with every ingredient of its construction.

    Attributes:
        group (FiniteMatrixGroup): The group G.
        degree (int): The degree m of the invariant forms.
        invariant (Form): The smooth G-invariant form f.
        dual_invariant (Form): The smooth invariant form f' of the dual group.
        forward (ProjectiveMap): The gradient map of f, intertwining G with its dual.
        backward (ProjectiveMap): The gradient map of f'.
        endomorphism (ProjectiveMap): backward o forward, of degree (m-1)^2.
        transcript (List[bool]): The conjugation check per element of G.

    """

    group: FiniteMatrixGroup
    degree: int
    invariant: Form
    dual_invariant: Form
    forward: ProjectiveMap
    backward: ProjectiveMap
    endomorphism: ProjectiveMap
    transcript: List[bool] = dataclass_field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        """Serialize the construction and its verification transcript."""
        return {
            "degree": self.degree,
            "group_order": self.group.order,
            "invariant": self.invariant.to_json(),
            "dual_invariant": self.dual_invariant.to_json(),
            "forward": self.forward.to_json(),
            "backward": self.backward.to_json(),
            "endomorphism": self.endomorphism.to_json(),
            "verification": [
                {"element": g.to_json()["rows"], "passed": passed}
                for g, passed in zip(self.group.elements, self.transcript)
            ],
        }


def equivariant_construction(
    G: FiniteMatrixGroup,
    degree: int,
    seed: int = DEFAULT_SEED,
    budget: Optional[int] = None,
    options: Optional[ComputeOptions] = None,
) -> EquivariantConstruction:
    """Build a G-equivariant endomorphism of degree (m-1)^2 and verify it against every group element.

    Raises:
        NoInvariantsError: If G or its dual has no invariants of degree m.
        SearchBudgetExhaustedError: If either smooth invariant search fails.
        EquivarianceVerificationError: If the result does not commute with some element of G.

    """
    invariant = smooth_invariant_search(G, degree, seed, budget, options)
    dual = dual_group(G)
    dual_invariant = smooth_invariant_search(dual, degree, seed, budget, options)
    forward = gradient_map(invariant, options)
    backward = gradient_map(dual_invariant, options)
    endomorphism = compose(backward, forward)
    transcript = equivariance_transcript(endomorphism, G, EquivarianceMode.CONJUGATION, options)
    if not all(transcript):
        failures = transcript.count(False)
        message = f"{endomorphism} fails to commute with {failures} of {G.order} elements"
        raise EquivarianceVerificationError(message)
    return EquivariantConstruction(G, degree, invariant, dual_invariant, forward, backward, endomorphism, transcript)


def equivariant_endomorphism(
    G: FiniteMatrixGroup,
    degree: int,
    seed: int = DEFAULT_SEED,
    budget: Optional[int] = None,
    options: Optional[ComputeOptions] = None,
) -> ProjectiveMap:
    """Return the verified endomorphism of :func:`equivariant_construction`."""
    return equivariant_construction(G, degree, seed, budget, options).endomorphism


def signed_swap_group(field: Optional[NumberField] = None) -> FiniteMatrixGroup:
    """Return the order-8 group of signed permutation matrices of size 2."""
    field = field or NumberField.rationals()
    swap = FieldMatrix.from_rows(field, [[0, 1], [1, 0]])
    return enumerate_group([FieldMatrix.diagonal(field, [1, -1]), swap])


def cube_rotation_group(field: Optional[NumberField] = None) -> FiniteMatrixGroup:
    """Return the order-24 rotation group of the cube, generated by a 4-fold and a 3-fold rotation."""
    field = field or NumberField.rationals()
    quarter_turn = FieldMatrix.from_rows(field, [[0, -1, 0], [1, 0, 0], [0, 0, 1]])
    diagonal_turn = FieldMatrix.from_rows(field, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    return enumerate_group([quarter_turn, diagonal_turn])
