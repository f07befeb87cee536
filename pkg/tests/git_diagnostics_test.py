import random

import pytest

from projendo.acceptance import random_form
from projendo.acceptance import random_invertible
from projendo.acceptance import random_regular_binary_map
from projendo.compute_options import ComputeOptions
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import ShapeMismatchError
from projendo.exceptions import SingularMatrixError
from projendo.fields import NumberField
from projendo.forms import Form
from projendo.git_diagnostics import LimitTag
from projendo.git_diagnostics import Verdict
from projendo.git_diagnostics import coefficient_operator
from projendo.git_diagnostics import fixed_maps
from projendo.git_diagnostics import one_param_limit
from projendo.git_diagnostics import pair_coefficient_operator
from projendo.git_diagnostics import pair_fixed_maps
from projendo.git_diagnostics import pair_torus_weight_analysis
from projendo.git_diagnostics import torus_weight_analysis
from projendo.linear_algebra import FieldMatrix
from projendo.projective_maps import OrbitTag
from projendo.projective_maps import ProjectiveMap
from projendo.projective_maps import certify_regular
from projendo.projective_maps import classify_orbit
from projendo.projective_maps import components_from_coefficients
from projendo.projective_maps import components_from_json
from projendo.projective_maps import conjugate_act
from projendo.projective_maps import make_map
from projendo.projective_maps import pair_act
from projendo.projective_maps import projectively_equal
from projendo.projective_maps import stabilizer_check
from tests.test_utils import QQ
from tests.test_utils import binary
from tests.test_utils import load_test_data
from tests.test_utils import matrix

TORUS = (binary(3, [1, 0, 0, 0]), binary(3, [0, 0, 0, 1]))


def load_matrix(file_name: str) -> FieldMatrix:
    return FieldMatrix.from_json(load_test_data("matrices", file_name))


class TestCoefficientOperator:
    def test_conjugation(self) -> None:
        g = matrix([[1, 0], [0, 2]])
        operator = coefficient_operator(g, 3)
        assert operator.size == 8
        image = operator.apply(TORUS)
        assert image == [QQ.convert(v) for v in [1, 0, 0, 0, 0, 0, 0, "1/4"]]
        assert make_map(components_from_coefficients(QQ, image, 1, 3)) == conjugate_act(g, make_map(TORUS))

    def test_agrees_with_pair_act(self) -> None:
        g, h = matrix([[1, 1], [0, 1]]), matrix([[2, 1], [1, 1]])
        F = ProjectiveMap.from_json(load_test_data("maps", "closed3.json"))
        image = pair_coefficient_operator(g, h, 3).apply(F)
        assert make_map(components_from_coefficients(QQ, image, 1, 3)) == pair_act(g, h, F)

    def test_wrong_length(self) -> None:
        operator = coefficient_operator(matrix([[1, 0], [0, 2]]), 2)
        with pytest.raises(ShapeMismatchError):
            operator.apply(TORUS)

    def test_singular(self) -> None:
        with pytest.raises(SingularMatrixError):
            coefficient_operator(matrix([[1, 1], [1, 1]]), 2)

    def test_json(self) -> None:
        document = coefficient_operator(load_matrix("jordan.json"), 2).to_json()
        assert document["degree"] == 2
        assert len(document["matrix"]["rows"]) == 6

    @pytest.mark.parametrize("size,degree,pairs", [(2, 3, 20), (3, 2, 5)])
    def test_functoriality(self, size: int, degree: int, pairs: int) -> None:
        rng = random.Random(size * 10 + degree)
        for _ in range(pairs):
            g1, g2 = random_invertible(rng, QQ, size, 2), random_invertible(rng, QQ, size, 2)
            product = coefficient_operator(g1 @ g2, degree).matrix
            assert product == coefficient_operator(g1, degree).matrix @ coefficient_operator(g2, degree).matrix

    def test_pair_functoriality(self) -> None:
        rng = random.Random(4)
        for _ in range(10):
            g1, g2, h1, h2 = (random_invertible(rng, QQ, 2, 2) for _ in range(4))
            product = pair_coefficient_operator(g1 @ g2, h1 @ h2, 2).matrix
            factors = pair_coefficient_operator(g1, h1, 2).matrix @ pair_coefficient_operator(g2, h2, 2).matrix
            assert product == factors


class TestFixedMaps:
    @pytest.mark.parametrize("degree,regular", [(1, True), (2, False), (3, False), (4, False), (5, False)])
    def test_unipotent(self, degree: int, regular: bool) -> None:
        report = fixed_maps(load_matrix("jordan.json"), degree)
        assert [e.eigenvalue for e in report.eigenspaces] == [QQ.one()]
        assert report.has_regular_fixed_map == regular
        assert report.remainder == [QQ.one()]

    def test_torus_stabilizer(self) -> None:
        report = pair_fixed_maps(load_matrix("diag_1_2.json"), load_matrix("diag_1_8.json"), 3)
        eigenvalues = [e.eigenvalue for e in report.eigenspaces]
        assert eigenvalues == [QQ(v) for v in ["1/8", "1/4", "1/2", 1, 2, 4, 8]]
        fixed = report.eigenspaces[3]
        assert fixed.dim == 2
        assert fixed.verdict == Verdict.CONTAINS_REGULAR
        assert fixed.method == "specialization"
        assert fixed.witness.is_certified_regular
        others = report.eigenspaces[:3] + report.eigenspaces[4:]
        assert all(e.verdict == Verdict.CONTAINS_NO_REGULAR for e in others)

    def test_unsplit_characteristic_polynomial(self) -> None:
        rotation = [[0, -1], [1, 0]]
        report = pair_fixed_maps(FieldMatrix.identity(QQ, 2), matrix(rotation), 1)
        # (lambda^2 + 1)^2
        assert report.remainder == [QQ(v) for v in [1, 0, 2, 0, 1]]
        assert report.eigenspaces == []
        gaussian = NumberField([1, 0, 1])
        split = pair_fixed_maps(FieldMatrix.identity(gaussian, 2), matrix(rotation, gaussian), 1)
        assert split.remainder == [gaussian.one()]
        assert [e.dim for e in split.eigenspaces] == [2, 2]
        assert not split.has_regular_fixed_map

    def test_symbolic_cap(self) -> None:
        options = ComputeOptions(search_budget=0, symbolic_parameter_cap=0)
        report = fixed_maps(FieldMatrix.identity(QQ, 2), 1, options)
        assert report.eigenspaces[0].verdict == Verdict.UNDECIDED
        assert not report.has_regular_fixed_map

    def test_symbolic_verdict(self) -> None:
        report = fixed_maps(FieldMatrix.identity(QQ, 2), 2, ComputeOptions(search_budget=0))
        assert report.eigenspaces[0].method == "symbolic"
        assert report.eigenspaces[0].verdict == Verdict.CONTAINS_REGULAR

    def test_json(self) -> None:
        document = fixed_maps(load_matrix("jordan.json"), 1).to_json()
        assert document["eigenspaces"][0]["verdict"] == "contains-a-regular-map"
        assert "witness" in document["eigenspaces"][0]

    def test_shapes(self) -> None:
        with pytest.raises(ShapeMismatchError):
            pair_fixed_maps(FieldMatrix.identity(QQ, 2), FieldMatrix.identity(QQ, 3), 2)

    @pytest.mark.parametrize(
        "rows", [[[1, 0], [0, 2]], [[1, 1], [0, 1]], [[0, 1], [1, 0]], [[1, 1], [0, 2]], [[-1, 0], [0, 1]]]
    )
    @pytest.mark.parametrize("degree", [2, 3])
    def test_eigenvectors_are_fixed(self, rows: list, degree: int) -> None:
        g = matrix(rows)
        report = fixed_maps(g, degree)
        assert report.eigenspaces
        for eigenspace in report.eigenspaces:
            for member in eigenspace.basis:
                F = make_map(member)
                assert projectively_equal(conjugate_act(g, F), F)
            if eigenspace.witness is not None:
                assert stabilizer_check(eigenspace.witness, g)

    def test_pair_eigenvectors_are_fixed(self) -> None:
        g, h = load_matrix("diag_1_2.json"), load_matrix("diag_1_8.json")
        for eigenspace in pair_fixed_maps(g, h, 3).eigenspaces:
            for member in eigenspace.basis:
                assert stabilizer_check(make_map(member), g, h)


class TestWeights:
    def test_fixed_raw_tuple(self) -> None:
        raw = components_from_json(load_test_data("maps", "irregular2.json"))
        profile = torus_weight_analysis((0, 1), raw)
        assert profile.fixed
        assert profile.minimal_weight == 0

    @pytest.mark.parametrize("degree", [2, 3, 4])
    def test_powers_are_not_fixed(self, degree: int) -> None:
        powers = [Form.monomial(QQ, (degree, 0)), Form.monomial(QQ, (0, degree))]
        profile = torus_weight_analysis((0, 1), powers)
        assert not profile.fixed
        assert profile.minimal_weight == 1 - degree

    def test_two_sided(self) -> None:
        profile = pair_torus_weight_analysis((0, 1), (0, 3), TORUS)
        assert profile.fixed
        assert profile.to_json()["weights"][1] == {"component": 1, "monomial": [0, 3], "weight": 0}

    def test_shapes(self) -> None:
        with pytest.raises(ShapeMismatchError):
            torus_weight_analysis((0, 1, 2), TORUS)
        with pytest.raises(ShapeMismatchError):
            pair_torus_weight_analysis((0, 1), (0, 1, 2), TORUS)

    @pytest.mark.parametrize("degree", [2, 3, 4])
    def test_regular_binary_maps_fix_only_scalar_weights(self, degree: int) -> None:
        rng = random.Random(degree)
        for _ in range(6):
            F = random_regular_binary_map(rng, QQ, degree)
            for a in [(0, 1), (1, 0), (2, -1), (0, 0), (3, 3), (-2, 5)]:
                assert torus_weight_analysis(a, F).fixed == (a[0] == a[1])

    def test_regular_plane_maps_fix_only_scalar_weights(self) -> None:
        rng = random.Random(7)
        checked = 0
        while checked < 4:
            F = certify_regular(make_map([random_form(rng, QQ, 3, 2) for _ in range(3)]))
            if not F.is_certified_regular:
                continue
            checked += 1
            for a in [(0, 1, 2), (0, 0, 1), (1, 1, 1), (2, 0, 2), (-1, -1, -1)]:
                assert torus_weight_analysis(a, F).fixed == (len(set(a)) == 1)


class TestOneParamLimit:
    boundary = ProjectiveMap.from_json(load_test_data("maps", "boundary3.json"))

    def test_boundary_degenerates_to_torus(self) -> None:
        result = one_param_limit(self.boundary, -1, -3)
        assert result.tag == LimitTag.REGULAR_LIMIT
        assert result.limit_map == make_map(TORUS)
        assert result.limit_map.is_certified_regular
        assert result.weight == 0

    def test_opposite_direction(self) -> None:
        result = one_param_limit(self.boundary, 1, 3)
        assert result.tag == LimitTag.CONSTANT_OR_DEGENERATE
        assert result.surviving_terms == [(0, (1, 2))]
        assert result.limit[1].is_zero()

    @pytest.mark.parametrize("degree", [2, 3, 5])
    def test_target_only(self, degree: int) -> None:
        powers = [Form.monomial(QQ, (degree, 0)), Form.monomial(QQ, (0, degree))]
        assert one_param_limit(powers, 0, 1).tag == LimitTag.CONSTANT_OR_DEGENERATE

    def test_fixed_map_is_its_own_limit(self) -> None:
        result = one_param_limit(TORUS, 1, 3)
        assert result.tag == LimitTag.REGULAR_LIMIT
        assert result.limit == TORUS
        assert result.to_json()["tag"] == "RegularLimit"

    def test_trivial_subgroup(self) -> None:
        with pytest.raises(InvalidParameterError):
            one_param_limit(TORUS, 0, 0)

    def test_not_a_p1_map(self) -> None:
        ternary = [Form.monomial(QQ, (1, 0, 0)), Form.monomial(QQ, (0, 1, 0)), Form.monomial(QQ, (0, 0, 1))]
        with pytest.raises(InvalidParameterError):
            one_param_limit(ternary, 1, 1)

    def test_regular_limits_come_from_torus_or_boundary_maps(self) -> None:
        rng = random.Random(11)
        sources = [self.boundary, ProjectiveMap.from_json(load_test_data("maps", "torus3.json"))]
        sources += [ProjectiveMap.from_json(load_test_data("maps", "closed3.json"))]
        sources += [random_regular_binary_map(rng, QQ, degree) for degree in (2, 3, 3, 4)]
        sources += [pair_act(matrix([[1, 0], [k, 1]]), matrix([[1, k], [0, 1]]), self.boundary) for k in (1, 2)]
        regular_limits = 0
        for F in sources:
            source_tag = classify_orbit(F).tag
            for c, b in [(-1, -3), (1, 3), (-1, 1), (0, 1), (2, -1), (1, 1), (-3, 2)]:
                result = one_param_limit(F, c, b)
                if result.tag != LimitTag.REGULAR_LIMIT:
                    continue
                regular_limits += 1
                assert result.limit_map.is_certified_regular
                assert classify_orbit(result.limit_map).tag == OrbitTag.TORUS_FORM
                assert source_tag in (OrbitTag.BOUNDARY, OrbitTag.TORUS_FORM)
        assert regular_limits >= 2
