import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import timedelta
from typing import Any
from typing import Callable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Set

from projendo.utils import asyncio_run

logger = logging.getLogger(__name__)


async def execute_parallel(
    func: Callable[..., Any],
    args_list: Sequence[tuple],
    timeout: Optional[timedelta] = None,
    max_workers: Optional[int] = None,
) -> List[Optional[Any]]:
    """Evaluate ``func`` on every argument tuple concurrently in a thread pool.

    Args:
        func (Callable[..., Any]): The pure function to evaluate.
        args_list (Sequence[tuple]): One tuple of positional arguments per evaluation.
        timeout (Optional[timedelta]): The duration of time to wait for the evaluations to complete before
            returning. Defaults to no timeout.
        max_workers (Optional[int]): The number of worker threads. Defaults to the executor default.

    Returns:
        List[Optional[Any]]: The results in the order of ``args_list``, with None for evaluations that timed out.

    Raises:
        Exception: The first exception raised by any of the evaluations.

    """
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        # One task per argument tuple, all running concurrently
        tasks = [asyncio.ensure_future(loop.run_in_executor(executor, func, *args)) for args in args_list]
        if not tasks:
            return []

        done, pending = await asyncio.wait(tasks, timeout=timeout.total_seconds() if timeout else timeout)

        results = [task.result() if task in done and not task.exception() else None for task in tasks]
        thrown_exceptions = [task.exception() for task in tasks if task in done and task.exception()]

        await _close_tasks(tasks=pending)
        if pending:
            logger.warning("%d of %d parallel evaluations timed out", len(pending), len(tasks))

    if thrown_exceptions:
        raise thrown_exceptions[0]

    return results


def run_parallel(
    func: Callable[..., Any],
    args_list: Sequence[tuple],
    timeout: Optional[timedelta] = None,
    max_workers: Optional[int] = None,
) -> List[Optional[Any]]:
    """Synchronous entry point for :func:`execute_parallel`.

    Args:
        func (Callable[..., Any]): The pure function to evaluate.
        args_list (Sequence[tuple]): One tuple of positional arguments per evaluation.
        timeout (Optional[timedelta]): The time limit of the whole evaluation. Defaults to no timeout.
        max_workers (Optional[int]): The number of worker threads.

    Returns:
        List[Optional[Any]]: The results in input order.

    """
    return asyncio_run(execute_parallel(func, args_list, timeout=timeout, max_workers=max_workers))


async def _close_tasks(tasks: Set[asyncio.Future]) -> None:
    for task in tasks:
        task.cancel()
        try:
            await task
        except asyncio.CancelledError:
            pass
