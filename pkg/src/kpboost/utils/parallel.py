# -*- coding: utf-8 -*-
"""
Thread-pool helpers with deterministic result ordering
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from ..config.settings import AppSettings

T = TypeVar("T")
R = TypeVar("R")


def worker_count(requested: Optional[int] = None) -> int:
    """Resolve the worker count, never above the KPBOOST_THREADS cap"""
    cap = AppSettings.worker_count()
    if requested is None:
        return cap
    return max(1, min(requested, cap))


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """Map over items in a thread pool, returning results in input order"""
    items = list(items)
    workers = worker_count(workers)
    if workers == 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def chunk_ranges(total: int, chunk: int) -> List[range]:
    """Split range(total) into consecutive ranges of at most `chunk` items"""
    chunk = max(1, chunk)
    return [range(start, min(start + chunk, total)) for start in range(0, total, chunk)]
