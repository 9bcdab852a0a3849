"""Ordered worker-pool map for independent sweep tasks.

Results always come back in input order so that every report is assembled
by a deterministic reduction, whatever the pool size.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from src import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """Apply ``func`` to every item, possibly in parallel, preserving order.

    Parameters
    ----------
    func : Callable
        Pure function of one task
    items : Iterable
        Task descriptions
    threads : int, optional
        Pool size; defaults to ``settings.THREADS``

    Returns
    -------
    list
        ``[func(item) for item in items]``
    """
    items = list(items)
    workers = min(threads or settings.THREADS, len(items))
    if workers <= 1:
        return [func(item) for item in items]
    logger.debug("dispatching %d tasks on %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
