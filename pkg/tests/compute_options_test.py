from datetime import timedelta
from typing import Any
from typing import Dict

import pytest

from projendo.compute_options import ComputeOptions
from projendo.exceptions import InvalidParameterError


class TestComputeOptions:
    def test_defaults(self) -> None:
        options = ComputeOptions()
        assert options.enumeration_cap > 0
        assert options.parallel_timeout is None

    @pytest.mark.parametrize(
        "overrides",
        [
            {"search_budget": 0},
            {"symbolic_parameter_cap": 0},
            {"witness_search_bound": 0},
            {"max_parallel_workers": None},
            {"parallel_timeout": timedelta(seconds=1)},
        ],
    )
    def test_boundary_values(self, overrides: Dict[str, Any]) -> None:
        options = ComputeOptions(**overrides)
        assert all(getattr(options, name) == value for name, value in overrides.items())

    @pytest.mark.parametrize(
        "overrides",
        [
            {"enumeration_cap": 0},
            {"search_budget": -1},
            {"certificate_primes": 0},
            {"prime_bits": 2},
            {"macaulay_max_degree": 0},
            {"enumeration_cap": True},
            {"search_budget": 1.5},
            {"max_parallel_workers": 0},
            {"parallel_timeout": timedelta(0)},
        ],
    )
    def test_out_of_range(self, overrides: Dict[str, Any]) -> None:
        with pytest.raises(InvalidParameterError):
            ComputeOptions(**overrides)
