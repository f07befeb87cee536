import time
from datetime import timedelta

import pytest

from projendo.exceptions import ZeroDivisionFieldError
from projendo.fields import field_inverse
from projendo.parallel import execute_parallel
from projendo.parallel import run_parallel
from tests.test_utils import QQ


def square(value: int) -> int:
    return value * value


def slow_square(value: int, delay: float) -> int:
    time.sleep(delay)
    return value * value


class TestParallel:
    @pytest.mark.asyncio
    @pytest.mark.parametrize("number_of_tasks", [1, 5, 20])
    async def test_order_of_results(self, number_of_tasks: int) -> None:
        args = [(n, 0.01 * (number_of_tasks - n)) for n in range(number_of_tasks)]
        results = await execute_parallel(slow_square, args, max_workers=4)
        assert results == [n * n for n in range(number_of_tasks)]

    @pytest.mark.asyncio
    async def test_empty(self) -> None:
        assert await execute_parallel(square, []) == []

    @pytest.mark.asyncio
    async def test_timeout(self) -> None:
        args = [(2, 0.0), (3, 1.0)]
        results = await execute_parallel(slow_square, args, timeout=timedelta(seconds=0.5), max_workers=2)
        assert results == [4, None]

    @pytest.mark.asyncio
    async def test_exception_propagates(self) -> None:
        with pytest.raises(ZeroDivisionFieldError):
            await execute_parallel(field_inverse, [(QQ.one(),), (QQ.zero(),)])

    def test_run_parallel(self) -> None:
        assert run_parallel(square, [(n,) for n in range(10)], max_workers=3) == [n * n for n in range(10)]
