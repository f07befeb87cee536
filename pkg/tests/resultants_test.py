import random
from typing import List

import pytest

from projendo.compute_options import ComputeOptions
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import ShapeMismatchError
from projendo.fields import NumberField
from projendo.forms import Form
from projendo.resultants import CertificateMethod
from projendo.resultants import Regularity
from projendo.resultants import certificate_primes
from projendo.resultants import certify_components
from projendo.resultants import common_zero_witness
from projendo.resultants import macaulay_degree
from projendo.resultants import sylvester_matrix
from projendo.resultants import sylvester_resultant
from tests.test_utils import QQ
from tests.test_utils import binary

REGULAR = Regularity.CERTIFIED_REGULAR
IRREGULAR = Regularity.CERTIFIED_IRREGULAR


def ternary(*terms: tuple) -> Form:
    degree = sum(terms[0][0])
    return Form.from_terms(QQ, 3, degree, {e: c for e, c in terms})


class TestSylvester:
    def test_resultant_of_powers(self) -> None:
        assert sylvester_resultant(Form.monomial(QQ, (2, 0)), Form.monomial(QQ, (0, 2))) == 1

    def test_resultant_of_linear_forms(self) -> None:
        assert sylvester_resultant(binary(1, [1, -2]), binary(1, [1, -5])) == -3

    def test_common_root_at_infinity(self) -> None:
        assert sylvester_resultant(Form.monomial(QQ, (1, 1)), Form.monomial(QQ, (0, 2))).is_zero()

    def test_common_root_over_extension(self) -> None:
        # x0^2 + x1^2 and x0^3 + x0*x1^2 share the roots (+-i : 1)
        assert sylvester_resultant(binary(2, [1, 0, 1]), binary(3, [1, 0, 1, 0])).is_zero()

    def test_sylvester_matrix_shape(self) -> None:
        assert sylvester_matrix(binary(2, [1, 0, 1]), binary(3, [1, 0, 0, 1])).shape == (5, 5)

    def test_non_binary(self) -> None:
        with pytest.raises(InvalidParameterError):
            sylvester_resultant(Form.monomial(QQ, (1, 0, 0)), Form.monomial(QQ, (0, 1, 0)))


class TestCertifyComponents:
    @pytest.mark.parametrize(
        "components,regularity,method",
        [
            ([binary(2, [1, 0, 0]), binary(2, [0, 1, 0])], IRREGULAR, CertificateMethod.SYLVESTER),
            ([binary(2, [1, 0, 0]), binary(2, [0, 0, 1])], REGULAR, CertificateMethod.SYLVESTER),
            ([Form.constant(QQ, 2, 5), Form.constant(QQ, 2, 0)], REGULAR, CertificateMethod.CONSTANT),
            ([binary(2, [1, 0, 0]), Form.zero(QQ, 2, 2)], IRREGULAR, CertificateMethod.CONSTANT),
        ],
    )
    def test_binary(self, components: List[Form], regularity: Regularity, method: CertificateMethod) -> None:
        certificate = certify_components(components)
        assert certificate.regularity == regularity
        assert certificate.method == method

    def test_macaulay(self) -> None:
        squares = [ternary(((2, 0, 0), 1)), ternary(((0, 2, 0), 1)), ternary(((0, 0, 2), 1))]
        products = [ternary(((1, 1, 0), 1)), ternary(((0, 1, 1), 1)), ternary(((1, 0, 1), 1))]
        assert certify_components(squares).regularity == Regularity.CERTIFIED_REGULAR
        certificate = certify_components(products)
        assert certificate.regularity == Regularity.CERTIFIED_IRREGULAR
        assert certificate.method == CertificateMethod.MACAULAY

    def test_modular(self) -> None:
        options = ComputeOptions(macaulay_max_dim=1)
        squares = [ternary(((2, 0, 0), "1/2")), ternary(((0, 2, 0), 3)), ternary(((0, 0, 2), 1), ((1, 1, 0), 1))]
        certificate = certify_components(squares, options)
        assert certificate.regularity == Regularity.CERTIFIED_REGULAR
        assert certificate.method == CertificateMethod.MODULAR
        assert len(certificate.primes) == options.certificate_primes

    def test_witness(self) -> None:
        options = ComputeOptions(macaulay_max_dim=1)
        products = [ternary(((1, 1, 0), 1)), ternary(((0, 1, 1), 1)), ternary(((1, 0, 1), 1))]
        certificate = certify_components(products, options)
        assert certificate.regularity == Regularity.CERTIFIED_IRREGULAR
        assert certificate.method == CertificateMethod.WITNESS
        assert [c.coords for c in certificate.witness] == [(0,), (0,), (1,)]
        assert certificate.to_json()["method"] == "witness"

    def test_undecided(self) -> None:
        options = ComputeOptions(macaulay_max_dim=1, witness_search_bound=1)
        # the only common zero is (1 : 2 : 0), outside the search box
        forms = [ternary(((0, 0, 1), 1)), ternary(((1, 0, 0), 2), ((0, 1, 0), -1)), ternary(((0, 0, 1), 3))]
        certificate = certify_components(forms, options)
        assert certificate.regularity == Regularity.UNCHECKED
        assert certificate.method == CertificateMethod.NONE

    def test_number_field(self) -> None:
        gaussian = NumberField([1, 0, 1])
        i = gaussian.generator()
        f0 = Form.from_terms(gaussian, 2, 2, {(2, 0): 1, (0, 2): i})
        f1 = Form.from_terms(gaussian, 2, 2, {(1, 1): 1})
        assert certify_components([f0, f1]).regularity == Regularity.CERTIFIED_REGULAR
        g0 = Form.from_terms(gaussian, 2, 2, {(2, 0): 1, (0, 2): 1})
        g1 = Form.from_terms(gaussian, 2, 2, {(2, 0): i, (1, 1): 1})
        assert certify_components([g0, g1]).regularity == Regularity.CERTIFIED_IRREGULAR

    @pytest.mark.parametrize(
        "components",
        [[], [binary(1, [1, 0])], [binary(1, [1, 0]), binary(1, [0, 1]), binary(1, [1, 1])]],
    )
    def test_shape(self, components: List[Form]) -> None:
        with pytest.raises(ShapeMismatchError):
            certify_components(components)


class TestHelpers:
    @pytest.mark.parametrize("degrees,expected", [([2, 2], 3), ([2, 2, 2], 4), ([1, 1, 1, 1], 1), ([3, 4], 6)])
    def test_macaulay_degree(self, degrees: List[int], expected: int) -> None:
        assert macaulay_degree(degrees) == expected

    def test_certificate_primes(self) -> None:
        primes = certificate_primes(3, 20)
        assert len(set(primes)) == 3
        assert primes == sorted(primes, reverse=True)
        assert all(p < 2**20 for p in primes)

    def test_common_zero_witness(self) -> None:
        assert common_zero_witness([binary(1, [1, -1]), binary(2, [1, 0, -1])], 2) is not None
        assert common_zero_witness([binary(1, [1, 0]), binary(1, [0, 1])], 2) is None


def convolve(a: List[int], b: List[int]) -> List[int]:
    product = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            product[i + j] += x * y
    return product


def nonzero_coefficients(rng: random.Random, length: int) -> List[int]:
    while True:
        coefficients = [rng.randint(-4, 4) for _ in range(length)]
        if any(coefficients):
            return coefficients


def common_zero_mod(f: List[int], g: List[int], p: int) -> bool:
    """Search P^1(F_p) for a common zero of two binary forms given x0^m first."""
    if f[-1] % p == 0 and g[-1] % p == 0:
        return True
    for t in range(p):
        if all(sum(c * t**i for i, c in enumerate(h)) % p == 0 for h in (f, g)):
            return True
    return False


class TestAgainstModularSearch:
    @pytest.mark.parametrize("seed", range(4))
    def test_certificate_matches_resultant_and_modular_zeros(self, seed: int) -> None:
        rng = random.Random(seed)
        for trial in range(10):
            degree = rng.randint(1, 4)
            planted = trial % 2 == 0
            if planted:
                factor = [rng.randint(1, 3), rng.randint(-3, 3)]
                f = convolve(factor, nonzero_coefficients(rng, degree))
                g = convolve(factor, nonzero_coefficients(rng, degree))
            else:
                f = nonzero_coefficients(rng, degree + 1)
                g = nonzero_coefficients(rng, degree + 1)
            components = [binary(degree, f), binary(degree, g)]
            resultant = int(sylvester_resultant(*components).value.numerator)
            irregular = certify_components(components).regularity == IRREGULAR
            assert irregular == (resultant == 0)
            if planted:
                assert irregular
            for p in (5, 7, 11, 13):
                found = common_zero_mod(f, g, p)
                if planted:
                    assert found
                if found:
                    assert resultant % p == 0
