import random

import pytest

from projendo.acceptance import AcceptanceReport
from projendo.acceptance import AcceptanceResult
from projendo.acceptance import binary_form
from projendo.acceptance import binary_map
from projendo.acceptance import criteria
from projendo.acceptance import random_invertible
from projendo.acceptance import random_regular_binary_map
from projendo.compute_options import ComputeOptions
from tests.test_utils import QQ
from tests.test_utils import binary

CRITERIA = dict(criteria())


class TestHelpers:
    def test_binary_form(self) -> None:
        assert binary_form(QQ, 3, (1, 0, 1, 0)) == binary(3, [1, 0, 1, 0])

    def test_binary_map(self) -> None:
        F = binary_map(QQ, 3, (1, 0, 0, 0), (0, 0, 0, 1))
        assert F.is_certified_regular
        assert F.degree == 3

    def test_random_invertible(self) -> None:
        rng = random.Random(1)
        assert all(random_invertible(rng, QQ, 3).is_invertible() for _ in range(20))

    @pytest.mark.parametrize("degree", [1, 2, 3, 4])
    def test_random_regular_binary_map(self, degree: int) -> None:
        F = random_regular_binary_map(random.Random(degree), QQ, degree)
        assert F.degree == degree
        assert F.is_certified_regular


class TestCriteria:
    def test_names(self) -> None:
        assert len(CRITERIA) == 9
        assert "chow mutation" in CRITERIA

    @pytest.mark.parametrize("name", sorted(CRITERIA))
    def test_criterion_passes(self, name: str) -> None:
        passed, detail = CRITERIA[name](random.Random(0), ComputeOptions())
        assert passed, detail

    def test_corrupted_relation_fails(self) -> None:
        check = dict(criteria(relation_sign=-1))["chow identities"]
        passed, detail = check(random.Random(0), ComputeOptions())
        assert not passed
        assert "identities failed" in detail

    def test_report(self) -> None:
        report = AcceptanceReport(7, (AcceptanceResult("a", True, "ok"), AcceptanceResult("b", False, "broken")))
        assert not report.passed
        assert report.to_json()["results"][1] == {"name": "b", "passed": False, "detail": "broken"}
