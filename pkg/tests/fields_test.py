import random
from fractions import Fraction

import pytest

from projendo.exceptions import FieldMismatchError
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import SchemaError
from projendo.exceptions import ZeroDivisionFieldError
from projendo.fields import FieldElement
from projendo.fields import FieldOp
from projendo.fields import NumberField
from projendo.fields import field_arithmetic
from projendo.fields import field_divide
from projendo.fields import field_inverse
from projendo.fields import field_power
from projendo.fields import rational
from projendo.fields import rational_to_json
from tests.test_utils import QQ
from tests.test_utils import dict_equals


class TestRationals:
    @pytest.mark.parametrize(
        "value,expected",
        [(3, "3"), ("6/4", "3/2"), ("-2/-4", "1/2"), (Fraction(-10, 4), "-5/2"), (" 7 ", "7"), ("0/5", "0")],
    )
    def test_rational(self, value: object, expected: str) -> None:
        assert rational_to_json(rational(value)) == expected

    @pytest.mark.parametrize("value", ["1/0", "x", "1/2/3", True, None])
    def test_malformed_rational(self, value: object) -> None:
        with pytest.raises(SchemaError):
            rational(value)

    def test_denominator_is_positive(self) -> None:
        value = rational("3/-6")
        assert value.denominator == 2
        assert value.numerator == -1


class TestNumberField:
    gaussian = NumberField([1, 0, 1])
    sqrt2 = NumberField([-2, 0, 1])

    def test_rationals_are_degree_one(self) -> None:
        assert QQ.degree == 1
        assert QQ.is_rational
        assert NumberField(["-3", "1"]) == QQ
        assert str(QQ) == "QQ"

    def test_generator_squares(self) -> None:
        i = self.gaussian.generator()
        assert i * i == -1
        assert (i * i).coords == (-1, 0)
        root = self.sqrt2.generator()
        assert root**2 == 2

    @pytest.mark.parametrize(
        "coefficients",
        [[-1, 0, 1], [0, 0, 1], [-4, 0, 0, 0, 1]],
    )
    def test_reducible_minimal_polynomial(self, coefficients: list) -> None:
        with pytest.raises(InvalidParameterError):
            NumberField(coefficients)

    @pytest.mark.parametrize("coefficients", [[1, 0, 2], [5], []])
    def test_invalid_minimal_polynomial(self, coefficients: list) -> None:
        with pytest.raises(InvalidParameterError):
            NumberField(coefficients)

    def test_unverified_field(self) -> None:
        field = NumberField([-2, 0, 0, 0, 0, 1])
        assert not field.irreducibility_verified
        assert field.degree == 5

    def test_element_needs_degree_coordinates(self) -> None:
        with pytest.raises(InvalidParameterError):
            self.gaussian.element([1])

    def test_json(self) -> None:
        element = self.gaussian.element(["1/2", -3])
        assert dict_equals(element.to_json(), {"field": ["1", "0", "1"], "coords": ["1/2", "-3"]})
        assert FieldElement.from_json(element.to_json()) == element
        assert FieldElement.from_json("2/3") == QQ("2/3")
        assert NumberField.from_json(["1", "0", "1"]) == self.gaussian

    def test_json_field_mismatch(self) -> None:
        with pytest.raises(FieldMismatchError):
            FieldElement.from_json({"field": ["1", "0", "1"], "coords": [0, 1]}, self.sqrt2)

    @pytest.mark.parametrize(
        "data", [{"field": ["1", "0", "1"]}, {"field": ["1", "0", "1"], "coords": [1]}, {"coords": "1"}]
    )
    def test_malformed_json(self, data: dict) -> None:
        with pytest.raises(SchemaError):
            FieldElement.from_json(data)


class TestFieldArithmetic:
    gaussian = NumberField([1, 0, 1])

    @pytest.mark.parametrize(
        "op,expected",
        [(FieldOp.ADD, (2, 0)), (FieldOp.SUB, (0, 2)), (FieldOp.MUL, (2, 0)), ("mul", (2, 0))],
    )
    def test_field_arithmetic(self, op: FieldOp, expected: tuple) -> None:
        i = self.gaussian.generator()
        assert field_arithmetic(1 + i, 1 - i, op).coords == expected

    def test_mixed_fields(self) -> None:
        with pytest.raises(FieldMismatchError):
            field_arithmetic(self.gaussian.one(), QQ.one(), FieldOp.ADD)
        with pytest.raises(FieldMismatchError):
            self.gaussian.one() + QQ.one()

    def test_inverse(self) -> None:
        element = self.gaussian.element([1, 1])
        inverse = field_inverse(element)
        assert inverse.coords == (rational("1/2"), rational("-1/2"))
        assert element * inverse == 1
        assert field_divide(self.gaussian.one(), element) == inverse
        assert element**-1 == inverse

    def test_zero_has_no_inverse(self) -> None:
        with pytest.raises(ZeroDivisionFieldError):
            field_inverse(self.gaussian.zero())
        with pytest.raises(ZeroDivisionFieldError):
            QQ(1) / 0

    @pytest.mark.parametrize("exponent", [0, 1, 2, 7, -3])
    def test_power(self, exponent: int) -> None:
        base = self.gaussian.element([2, 1])
        expected = self.gaussian.one()
        for _ in range(abs(exponent)):
            expected = expected * base
        if exponent < 0:
            expected = field_inverse(expected)
        assert field_power(base, exponent) == expected

    @pytest.mark.parametrize("field", [QQ, NumberField([-2, 0, 1]), NumberField([1, 1, 1])])
    def test_field_axioms(self, field: NumberField) -> None:
        rng = random.Random(7)

        def draw() -> FieldElement:
            return field.element([rng.randint(-5, 5) for _ in range(field.degree)])

        for _ in range(50):
            a, b, c = draw(), draw(), draw()
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a
            if not a.is_zero():
                assert a * field_inverse(a) == field.one()

    def test_hash_agrees_with_equality(self) -> None:
        a = self.gaussian.element([1, 2])
        b = self.gaussian.element(["2/2", "4/2"])
        assert a == b
        assert len({a, b}) == 1
