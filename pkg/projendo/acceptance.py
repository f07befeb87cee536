"""The self-test suite run by ``projendo selftest``.

Every criterion is an exact check; randomized properties draw from ``random.Random(seed)``, so a run is reproducible
from its seed.
"""
import logging
import random
import time
from dataclasses import dataclass
from typing import Callable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from projendo.chow import run_chow_checks
from projendo.compute_options import ComputeOptions
from projendo.constants import DEFAULT_SEED
from projendo.exceptions import ProjendoError
from projendo.fields import FieldElement
from projendo.fields import NumberField
from projendo.forms import Form
from projendo.forms import euler_defect
from projendo.forms import monomials
from projendo.git_diagnostics import LimitTag
from projendo.git_diagnostics import Verdict
from projendo.git_diagnostics import fixed_maps
from projendo.git_diagnostics import one_param_limit
from projendo.git_diagnostics import torus_weight_analysis
from projendo.hom_counting import brute_force_homs
from projendo.hom_counting import builtin_group_data
from projendo.hom_counting import builtin_perm_group
from projendo.hom_counting import conjugacy_class_count
from projendo.hom_counting import count_homs
from projendo.invariants import EquivarianceMode
from projendo.invariants import cube_rotation_group
from projendo.invariants import equivariant_construction
from projendo.invariants import is_invariant
from projendo.invariants import reynolds_project
from projendo.invariants import signed_swap_group
from projendo.invariants import verify_equivariance
from projendo.linear_algebra import FieldMatrix
from projendo.projective_maps import OrbitTag
from projendo.projective_maps import ProjectiveMap
from projendo.projective_maps import certify_regular
from projendo.projective_maps import classify_orbit
from projendo.projective_maps import make_map
from projendo.projective_maps import pair_act
from projendo.projective_maps import projectively_equal
from projendo.projective_maps import ramification_form
from projendo.projective_maps import squarefree_factorization
from projendo.resultants import Regularity
from projendo.resultants import certify_components
from projendo.resultants import sylvester_resultant

logger = logging.getLogger(__name__)

PROPERTY_INSTANCES = 100
"""Random instances per infrastructure property."""

CLASSIFICATION_PAIRS = 50
"""Random (g, h) pairs applied to each classification example."""

Check = Callable[[random.Random, ComputeOptions], Tuple[bool, str]]


@dataclass(frozen=True)
class AcceptanceResult:
    """The outcome of one criterion.

    Attributes:
        name (str): The criterion.
        passed (bool): Whether every check of the criterion held.
        detail (str): What was checked, or the first failure.

    """

    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class AcceptanceReport:
    """All criteria of one self-test run."""

    seed: int
    results: Tuple[AcceptanceResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {"seed": self.seed, "passed": self.passed, "results": [r.to_json() for r in self.results]}


def binary_form(field: NumberField, degree: int, coefficients: Sequence[int]) -> Form:
    """Return the binary form ``sum c_i x0^(m-i) x1^i`` from its coefficients, x0^m first."""
    return Form.from_terms(field, 2, degree, {(degree - i, i): c for i, c in enumerate(coefficients) if c})


def binary_map(field: NumberField, degree: int, f0: Sequence[int], f1: Sequence[int]) -> ProjectiveMap:
    """Return the certified map (f0 : f1) of P^1 from the coefficient lists of its components."""
    return certify_regular(make_map([binary_form(field, degree, f0), binary_form(field, degree, f1)]))


def random_invertible(rng: random.Random, field: NumberField, size: int, bound: int = 3) -> FieldMatrix:
    """Draw a matrix with integer entries in [-bound, bound] until it is invertible."""
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(size)] for _ in range(size)]
        matrix = FieldMatrix.from_rows(field, rows)
        if matrix.is_invertible():
            return matrix


def random_form(rng: random.Random, field: NumberField, num_vars: int, degree: int, bound: int = 3) -> Form:
    """Draw a nonzero form with integer coefficients in [-bound, bound]."""
    while True:
        terms = {e: rng.randint(-bound, bound) for e in monomials(num_vars, degree)}
        form = Form.from_terms(field, num_vars, degree, terms)
        if not form.is_zero():
            return form


def random_regular_binary_map(rng: random.Random, field: NumberField, degree: int) -> ProjectiveMap:
    """Draw a certified-regular P^1 -> P^1 map of the given degree that is not a lower degree map in disguise."""
    while True:
        components = [random_form(rng, field, 2, degree) for _ in range(2)]
        F = make_map(components)
        if F.degree != degree:
            continue
        F = certify_regular(F)
        if F.is_certified_regular:
            return F


def _equivariant(rng: random.Random, options: ComputeOptions) -> Tuple[bool, str]:
    notes = []
    for name, group in (("signed-swap", signed_swap_group()), ("cube-rotation", cube_rotation_group())):
        construction = equivariant_construction(group, 4, seed=DEFAULT_SEED, options=options)
        F = construction.endomorphism
        if F.degree != 9 or not F.is_certified_regular:
            return False, f"{name}: endomorphism {F} has degree {F.degree}"
        if not verify_equivariance(F, group, EquivarianceMode.CONJUGATION, options):
            return False, f"{name}: {F} does not commute with the group"
        notes.append(f"{name}: degree 9 verified on {group.order} elements")
    return True, "; ".join(notes)


CLASSIFICATION_EXAMPLES = (
    ((1, 0, 0, 0), (0, 0, 0, 1), OrbitTag.TORUS_FORM),
    ((1, 0, 0, 1), (0, 0, 0, 1), OrbitTag.TORUS_FORM),
    ((1, 0, 1, 0), (0, 0, 0, 1), OrbitTag.BOUNDARY),
    ((1, 0, 0, 1), (0, 0, 1, 0), OrbitTag.CLOSED),
)
"""Cubic maps (f0, f1) by coefficient lists, with their orbit types."""


def _classification(rng: random.Random, options: ComputeOptions) -> Tuple[bool, str]:
    field = NumberField.rationals()
    maps = []
    for f0, f1, expected in CLASSIFICATION_EXAMPLES:
        F = binary_map(field, 3, f0, f1)
        tag = classify_orbit(F, options).tag
        if tag != expected:
            return False, f"{F} classified {tag.value}, expected {expected.value}"
        maps.append((F, expected))
    for _ in range(CLASSIFICATION_PAIRS):
        g, h = random_invertible(rng, field, 2), random_invertible(rng, field, 2)
        for F, expected in maps:
            moved = pair_act(g, h, F)
            tag = classify_orbit(moved, options).tag
            if tag != expected:
                return False, f"{moved} classified {tag.value}, expected {expected.value}"
    return True, f"{len(maps)} examples stable under {CLASSIFICATION_PAIRS} random pairs"


def _limits(rng: random.Random, options: ComputeOptions) -> Tuple[bool, str]:
    field = NumberField.rationals()
    torus = binary_map(field, 3, (1, 0, 0, 0), (0, 0, 0, 1))
    for f0 in ((1, 0, 0, 1), (1, 0, 1, 0)):
        source = [binary_form(field, 3, f0), binary_form(field, 3, (0, 0, 0, 1))]
        result = one_param_limit(source, -1, -3, options)
        if result.tag != LimitTag.REGULAR_LIMIT or result.limit_map != torus:
            return False, f"limit {[str(c) for c in result.limit]} is {result.tag.value}"
        if classify_orbit(result.limit_map, options).tag != OrbitTag.TORUS_FORM:
            return False, "the limit is not of torus form"
    if one_param_limit(source, 1, 3, options).tag != LimitTag.CONSTANT_OR_DEGENERATE:
        return False, "the opposite subgroup does not degenerate the boundary cubic"
    for m in range(1, 6):
        x0_m = binary_form(field, m, (1,) + (0,) * m)
        x1_m = binary_form(field, m, (0,) * m + (1,))
        degenerate = one_param_limit([x0_m, x1_m], 0, 1, options)
        if degenerate.tag != LimitTag.CONSTANT_OR_DEGENERATE:
            return False, f"(x0^{m}, x1^{m}) under (0, 1) gave {degenerate.tag.value}"
    return True, "boundary cubics degenerate to the torus form; (0, 1) degenerates every torus form"


def _jordan_fixed_maps(rng: random.Random, options: ComputeOptions) -> Tuple[bool, str]:
    field = NumberField.rationals()
    jordan = FieldMatrix.from_rows(field, [[1, 1], [0, 1]])
    for m in (3, 4, 5):
        report = fixed_maps(jordan, m, options)
        if not report.eigenspaces or any(e.verdict != Verdict.CONTAINS_NO_REGULAR for e in report.eigenspaces):
            verdicts = [e.verdict.value for e in report.eigenspaces]
            return False, f"degree {m}: verdicts {verdicts}"
    linear = fixed_maps(jordan, 1, options)
    if not linear.has_regular_fixed_map:
        return False, "degree 1: no regular fixed map reported"
    return True, "no regular fixed map in degrees 3, 4, 5; the identity in degree 1"


def _torus_witnesses(rng: random.Random, options: ComputeOptions) -> Tuple[bool, str]:
    field = NumberField.rationals()
    for m in range(2, 6):
        torus = [binary_form(field, m, (1,) + (0,) * m), binary_form(field, m, (0,) * m + (1,))]
        if torus_weight_analysis((0, 1), torus).fixed:
            return False, f"(x0^{m}, x1^{m}) reported fixed by (0, 1)"
    tuple_ = [binary_form(field, 2, (1, 0, 0)), binary_form(field, 2, (0, 1, 0))]
    if not torus_weight_analysis((0, 1), tuple_).fixed:
        return False, "(x0^2, x0*x1) not fixed by (0, 1)"
    if not sylvester_resultant(tuple_[0], tuple_[1]).is_zero():
        return False, "(x0^2, x0*x1) has a nonzero resultant"
    if certify_components(tuple_, options).regularity != Regularity.CERTIFIED_IRREGULAR:
        return False, "(x0^2, x0*x1) not certified irregular"
    return True, "torus forms are moved by (0, 1); (x0^2, x0*x1) is fixed and irregular"


HOM_COUNT_CASES = ((("cyclic", 2), 1, 4), (("A4", None), 1, 48), (("S3", None), 2, 486), (("cyclic", 3), 2, 81))
"""((family, n), genus, count) triples checked against the exhaustive count."""

BUILTIN_GROUPS = tuple(("cyclic", n) for n in range(1, 7)) + tuple(("dihedral", n) for n in range(3, 7)) + (
    ("A4", None),
    ("S4", None),
    ("A5", None),
)


def _hom_counts(rng: random.Random, options: ComputeOptions) -> Tuple[bool, str]:
    for (family, n), genus, expected in HOM_COUNT_CASES:
        formula = count_homs(builtin_group_data(family, n), genus)
        oracle = brute_force_homs(builtin_perm_group(family, n), genus, options)
        if formula != expected or oracle != expected:
            return False, f"{family} {n} genus {genus}: formula {formula}, oracle {oracle}, expected {expected}"
    for family, n in BUILTIN_GROUPS:
        data = builtin_group_data(family, n)
        if count_homs(data, 0) != 1:
            return False, f"{data.name}: genus 0 count is not 1"
        if conjugacy_class_count(builtin_perm_group(family, n)) != len(data.irrep_degrees):
            return False, f"{data.name}: class count disagrees with the representation data"
    return True, f"{len(HOM_COUNT_CASES)} counts match the oracle; {len(BUILTIN_GROUPS)} groups consistent"


def _chow(relation_sign: int) -> Check:
    def check(rng: random.Random, options: ComputeOptions) -> Tuple[bool, str]:
        results = run_chow_checks(relation_sign=relation_sign)
        failed = [r.name for r in results if not r.passed]
        if failed:
            return False, f"{len(failed)} of {len(results)} identities failed: {', '.join(failed)}"
        return True, f"{len(results)} identities hold"

    return check


def _chow_mutation(rng: random.Random, options: ComputeOptions) -> Tuple[bool, str]:
    results = run_chow_checks(relation_sign=-1)
    failed = sum(1 for r in results if not r.passed)
    if not failed:
        return False, "the identities survive a flipped relation sign"
    return True, f"a flipped relation sign breaks {failed} of {len(results)} identities"


def _field_axioms(rng: random.Random, field: NumberField) -> Optional[str]:
    def draw() -> FieldElement:
        return field.element([rng.randint(-5, 5) for _ in range(field.degree)])

    for _ in range(PROPERTY_INSTANCES):
        a, b, c = draw(), draw(), draw()
        if (a + b) + c != a + (b + c) or (a * b) * c != a * (b * c):
            return f"associativity fails for {a}, {b}, {c}"
        if a * (b + c) != a * b + a * c or a * b != b * a:
            return f"distributivity or commutativity fails for {a}, {b}, {c}"
        if not a.is_zero() and a * a**-1 != field.one():
            return f"{a} times its inverse is not 1"
    return None


def _properties(rng: random.Random, options: ComputeOptions) -> Tuple[bool, str]:
    rationals = NumberField.rationals()
    for field in (rationals, NumberField([-2, 0, 1])):
        failure = _field_axioms(rng, field)
        if failure:
            return False, failure
    for _ in range(PROPERTY_INSTANCES):
        f = random_form(rng, rationals, rng.randint(2, 4), rng.randint(0, 4))
        if not euler_defect(f).is_zero():
            return False, f"Euler identity fails for {f}"
    for _ in range(PROPERTY_INSTANCES):
        F = make_map([random_form(rng, rationals, 2, 2) for _ in range(2)])
        g1, h1, g2, h2 = (random_invertible(rng, rationals, 2) for _ in range(4))
        if not projectively_equal(pair_act(g1, h1, pair_act(g2, h2, F)), pair_act(g1 @ g2, h1 @ h2, F)):
            return False, f"the action is not functorial on {F}"
    group = signed_swap_group()
    for _ in range(PROPERTY_INSTANCES):
        f = random_form(rng, rationals, 2, rng.randint(1, 4))
        projected = reynolds_project(group, f)
        if reynolds_project(group, projected) != projected or not is_invariant(group, projected):
            return False, f"the Reynolds operator fails on {f}"
    for _ in range(PROPERTY_INSTANCES):
        m = rng.randint(2, 4)
        F = random_regular_binary_map(rng, rationals, m)
        ramification = ramification_form(F, options)
        if ramification.degree != 2 * m - 2:
            return False, f"the ramification form of {F} has degree {ramification.degree}"
        factorization = squarefree_factorization(ramification)
        if any(k >= m for k in factorization.multiplicities):
            return False, f"a ramification point of {F} has multiplicity at least {m}"
    return True, f"{PROPERTY_INSTANCES} instances per property"


def criteria(relation_sign: int = 1) -> List[Tuple[str, Check]]:
    """Return the named criteria in the order they run."""
    return [
        ("equivariant construction", _equivariant),
        ("orbit classification", _classification),
        ("one-parameter limits", _limits),
        ("fixed maps of a unipotent element", _jordan_fixed_maps),
        ("torus weights", _torus_witnesses),
        ("homomorphism counts", _hom_counts),
        ("chow identities", _chow(relation_sign)),
        ("chow mutation", _chow_mutation),
        ("infrastructure properties", _properties),
    ]


def run_acceptance(
    seed: int = DEFAULT_SEED, options: Optional[ComputeOptions] = None, relation_sign: int = 1
) -> AcceptanceReport:
    """Run every criterion with one seeded generator per criterion.

    Args:
        seed (int): (Optional) The seed of the randomized properties. Defaults to 0.
        options (Optional[ComputeOptions]): (Optional) The computation limits.
        relation_sign (int): (Optional) The sign of the Chow ring relation; -1 corrupts it and must fail the run.

    Returns:
        AcceptanceReport: One result per criterion.

    """
    options = options or ComputeOptions()
    results = []
    for index, (name, check) in enumerate(criteria(relation_sign)):
        rng = random.Random(seed * 1000 + index)
        start = time.perf_counter()
        try:
            passed, detail = check(rng, options)
        except ProjendoError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        logger.info("%s: %s in %.2fs", name, "passed" if passed else "FAILED", time.perf_counter() - start)
        results.append(AcceptanceResult(name, passed, detail))
    return AcceptanceReport(seed, tuple(results))
