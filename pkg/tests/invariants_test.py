import random

import pytest

from projendo.acceptance import random_form
from projendo.compute_options import ComputeOptions
from projendo.exceptions import FieldMismatchError
from projendo.exceptions import GroupEnumerationError
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import NoInvariantsError
from projendo.exceptions import SearchBudgetExhaustedError
from projendo.exceptions import ShapeMismatchError
from projendo.exceptions import SingularMatrixError
from projendo.exceptions import SmoothnessNotCertifiedError
from projendo.fields import NumberField
from projendo.forms import Form
from projendo.invariants import EquivarianceMode
from projendo.invariants import FiniteMatrixGroup
from projendo.invariants import cube_rotation_group
from projendo.invariants import dual_group
from projendo.invariants import enumerate_group
from projendo.invariants import equivariance_transcript
from projendo.invariants import equivariant_construction
from projendo.invariants import equivariant_endomorphism
from projendo.invariants import gradient_map
from projendo.invariants import invariant_basis
from projendo.invariants import is_invariant
from projendo.invariants import is_smooth
from projendo.invariants import reynolds_project
from projendo.invariants import signed_swap_group
from projendo.invariants import smooth_invariant_search
from projendo.invariants import verify_equivariance
from projendo.linear_algebra import FieldMatrix
from projendo.projective_maps import identity_map
from projendo.projective_maps import make_map
from tests.test_utils import QQ
from tests.test_utils import binary
from tests.test_utils import load_test_data
from tests.test_utils import matrix


class TestEnumerateGroup:
    def test_builtin_orders(self) -> None:
        assert signed_swap_group().order == 8
        assert cube_rotation_group().order == 24
        assert matrix([[-1, 0], [0, -1]]) in signed_swap_group()

    def test_from_json(self) -> None:
        G = FiniteMatrixGroup.from_json(load_test_data("groups", "signed_swap.json"))
        assert G.order == 8
        assert G.dim == 2
        assert G.field == QQ
        assert FiniteMatrixGroup.from_json(G.to_json()).order == 8

    def test_cap_from_json(self) -> None:
        with pytest.raises(GroupEnumerationError):
            FiniteMatrixGroup.from_json(load_test_data("groups", "cube_capped.json"))

    def test_cap_from_options(self) -> None:
        with pytest.raises(GroupEnumerationError):
            enumerate_group(signed_swap_group().generators, options=ComputeOptions(enumeration_cap=7))
        assert enumerate_group(signed_swap_group().generators, cap=8).order == 8

    def test_infinite_group(self) -> None:
        with pytest.raises(GroupEnumerationError):
            enumerate_group([matrix([[1, 1], [0, 1]])], cap=50)

    def test_elements_are_closed(self) -> None:
        G = cube_rotation_group()
        for g in G.elements:
            for h in G.generators:
                assert g @ h in G

    @pytest.mark.parametrize(
        "generators,error",
        [
            ([], InvalidParameterError),
            ([matrix([[1, 0], [0, 0]])], SingularMatrixError),
            ([matrix([[0, 1], [1, 0]]), matrix([[1]])], ShapeMismatchError),
            ([matrix([[0, 1], [1, 0]]), FieldMatrix.identity(NumberField([1, 0, 1]), 2)], FieldMismatchError),
        ],
    )
    def test_invalid_generators(self, generators: list, error: type) -> None:
        with pytest.raises(error):
            enumerate_group(generators)

    def test_cap_must_be_positive(self) -> None:
        with pytest.raises(InvalidParameterError):
            enumerate_group([matrix([[0, 1], [1, 0]])], cap=0)

    def test_dual_group(self) -> None:
        G = enumerate_group([matrix([[1, 1], [-1, 0]])])
        dual = dual_group(G)
        assert dual.order == G.order == 6
        assert all(g.inverse().transpose() in dual for g in G.elements)


class TestInvariants:
    def test_reynolds_projection(self) -> None:
        rng = random.Random(13)
        G = cube_rotation_group()
        for _ in range(5):
            f = random_form(rng, QQ, 3, 2)
            projected = reynolds_project(G, f)
            assert is_invariant(G, projected)
            assert reynolds_project(G, projected) == projected

    def test_invariant_form_is_fixed(self) -> None:
        G = signed_swap_group()
        f = binary(4, [1, 0, 3, 0, 1])
        assert is_invariant(G, f)
        assert reynolds_project(G, f) == f
        assert not is_invariant(G, binary(2, [1, 0, 2]))

    @pytest.mark.parametrize("degree,dim", [(1, 0), (2, 1), (3, 0), (4, 2), (6, 2), (8, 3)])
    def test_signed_swap_dimensions(self, degree: int, dim: int) -> None:
        basis = invariant_basis(signed_swap_group(), degree)
        assert basis.dim == dim
        assert all(f.leading_coefficient() == 1 for f in basis.basis)

    @pytest.mark.parametrize("degree,dim", [(1, 0), (2, 1), (3, 0), (4, 2)])
    def test_cube_dimensions(self, degree: int, dim: int) -> None:
        assert invariant_basis(cube_rotation_group(), degree).dim == dim

    def test_degree_must_be_positive(self) -> None:
        with pytest.raises(InvalidParameterError):
            invariant_basis(signed_swap_group(), 0)

    def test_shape(self) -> None:
        with pytest.raises(ShapeMismatchError):
            reynolds_project(cube_rotation_group(), binary(2, [1, 0, 1]))


class TestSmoothInvariants:
    def test_is_smooth(self) -> None:
        assert is_smooth(binary(2, [1, 0, -1]))
        assert not is_smooth(binary(2, [1, 0, 0]))
        assert is_smooth(Form.from_terms(QQ, 3, 3, {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1}))

    def test_search(self) -> None:
        assert smooth_invariant_search(signed_swap_group(), 4) == binary(4, [1, 0, 0, 0, 1])
        assert smooth_invariant_search(signed_swap_group(), 4, seed=5).degree == 4

    def test_budget(self) -> None:
        G = enumerate_group([matrix([[-1, 0], [0, 1]])])
        # the basis is x0^2, x1^2 and both are singular
        with pytest.raises(SearchBudgetExhaustedError):
            smooth_invariant_search(G, 2, budget=2)
        assert smooth_invariant_search(G, 2, budget=3) == binary(2, [1, 0, -1])

    def test_no_invariants(self) -> None:
        with pytest.raises(NoInvariantsError):
            smooth_invariant_search(signed_swap_group(), 3)

    def test_degree_below_two(self) -> None:
        with pytest.raises(InvalidParameterError):
            smooth_invariant_search(signed_swap_group(), 1)

    def test_gradient_map(self) -> None:
        F = gradient_map(binary(4, [1, 0, 0, 0, 1]))
        assert F.is_certified_regular
        assert F == make_map([binary(3, [1, 0, 0, 0]), binary(3, [0, 0, 0, 1])])

    @pytest.mark.parametrize("form", [binary(2, [1, 0, 0]), binary(1, [1, 1])])
    def test_gradient_map_needs_smoothness(self, form: Form) -> None:
        with pytest.raises(SmoothnessNotCertifiedError):
            gradient_map(form)


class TestEquivariance:
    def test_signed_swap_construction(self) -> None:
        construction = equivariant_construction(signed_swap_group(), 4)
        assert construction.endomorphism.degree == 9
        assert construction.endomorphism == make_map([Form.monomial(QQ, (9, 0)), Form.monomial(QQ, (0, 9))])
        assert all(construction.transcript)
        assert len(construction.transcript) == 8
        document = construction.to_json()
        assert document["group_order"] == 8
        assert all(entry["passed"] for entry in document["verification"])

    def test_cube_construction(self) -> None:
        G = cube_rotation_group()
        construction = equivariant_construction(G, 4)
        assert construction.endomorphism.degree == 9
        assert verify_equivariance(construction.endomorphism, G, EquivarianceMode.CONJUGATION)

    @pytest.mark.parametrize("group", [signed_swap_group(), cube_rotation_group()], ids=["signed-swap", "cube"])
    def test_endomorphism(self, group: FiniteMatrixGroup) -> None:
        F = equivariant_endomorphism(group, 4, seed=5)
        assert F.degree == (4 - 1) ** 2
        assert F.is_certified_regular
        assert F == equivariant_endomorphism(group, 4, seed=5)
        assert verify_equivariance(F, group, EquivarianceMode.CONJUGATION)

    def test_endomorphism_budget(self) -> None:
        with pytest.raises(SearchBudgetExhaustedError):
            equivariant_endomorphism(cube_rotation_group(), 4, budget=0)

    def test_gradient_intertwines(self) -> None:
        G = enumerate_group([matrix([[1, 1], [-1, 0]])])
        f = smooth_invariant_search(G, 2)
        assert verify_equivariance(gradient_map(f), G, EquivarianceMode.INTERTWINING)

    def test_non_equivariant_map(self) -> None:
        F = make_map([binary(2, [1, 0, 0]), binary(2, [0, 0, 2])])
        transcript = equivariance_transcript(F, signed_swap_group(), EquivarianceMode.CONJUGATION)
        assert not all(transcript)
        assert any(transcript)

    def test_identity_commutes(self) -> None:
        assert verify_equivariance(identity_map(QQ, 2), cube_rotation_group(), EquivarianceMode.CONJUGATION)

    def test_dimensions(self) -> None:
        with pytest.raises(ShapeMismatchError):
            equivariance_transcript(identity_map(QQ, 1), cube_rotation_group(), EquivarianceMode.CONJUGATION)
