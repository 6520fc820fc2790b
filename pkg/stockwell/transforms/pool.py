"""
Worker pool shared by the per-angle loops.

The pool hands out one task per item and returns the results in input order,
so reductions over the results are deterministic whatever the thread count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from stockwell.config.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """
    Apply ``fn`` to every item, possibly in parallel.

    Args:
        fn: Pure function of one item.
        items: Work items, usually angle indices.
        threads: Number of worker threads, ``settings.THREADS`` when None.

    Returns:
        list: Results in the order of ``items``.
    """
    items = list(items)
    threads = settings.THREADS if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug("Dispatching %d tasks to %d threads", len(items), threads)
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as executor:
        return list(executor.map(fn, items))
