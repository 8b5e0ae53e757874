"""
Ordered parallel map over independent work items.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from src.config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def resolve_threads(threads: Optional[int] = None) -> int:
    """Explicit thread count, else THERMOGRAPH_THREADS, else the CPU count."""
    count = threads if threads is not None else get_settings().threads
    if count < 1:
        raise ValueError(f"Thread count must be >= 1, got {count}")
    return count


def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Apply func to every item, results in input order.

    A single thread runs inline; the first exception raised by a worker
    propagates to the caller.
    """
    items = list(items)
    workers = min(resolve_threads(threads), max(len(items), 1))
    if workers == 1:
        return [func(item) for item in items]
    logger.debug("mapping %d items over %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
