"""
Task Runner

Bounded concurrent execution of independent experiment tasks in worker
threads. Failures are returned alongside results instead of aborting the
whole run.
"""

import asyncio
import logging
import zlib
from dataclasses import dataclass
from typing import Any, Callable, Generic, List, Optional, Sequence, TypeVar

from sim.dualpolicy import derive_seed
from tactile.config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class TaskOutcome(Generic[T]):
    """Result of one task."""

    item: T
    success: bool
    value: Any = None
    error: Optional[str] = None


def task_seed(master_seed: int, name: str) -> int:
    """Per-task seed derived from the master seed and a stable task name."""
    return derive_seed(master_seed, zlib.crc32(name.encode("utf-8")))


async def run_tasks(
    items: Sequence[T],
    fn: Callable[[T], R],
    max_concurrency: Optional[int] = None,
) -> List[TaskOutcome[T]]:
    """
    Run fn over items in threads, at most max_concurrency at a time.

    Args:
        items: Task inputs
        fn: Blocking function applied to each item
        max_concurrency: Defaults to MAX_CONCURRENT_RUNS

    Returns:
        One TaskOutcome per item, in input order
    """
    if not items:
        return []

    # Create semaphore to limit concurrent tasks
    semaphore = asyncio.Semaphore(max_concurrency or get_settings().max_concurrent_runs)

    async def run_with_semaphore(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(fn, item)

    results = await asyncio.gather(*(run_with_semaphore(i) for i in items), return_exceptions=True)

    outcomes = []
    for item, result in zip(items, results):
        if isinstance(result, Exception):
            logger.exception(f"Task {item!r} failed: {result}", exc_info=result)
            outcomes.append(TaskOutcome(item=item, success=False, error=str(result)))
        else:
            outcomes.append(TaskOutcome(item=item, success=True, value=result))
    return outcomes


@dataclass
class ExperimentResult:
    """Table written to results.csv plus where and how the run ended."""

    table: Any
    run_dir: Any
    failures: int = 0

    @property
    def ok(self) -> bool:
        return self.failures == 0
