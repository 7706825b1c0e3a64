"""Process-pool map whose output order matches the input order."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable


def parallel_map(fn: Callable, items: Iterable, threads: int = 1, initializer=None, initargs=()) -> list:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        if initializer is not None:
            initializer(*initargs)
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads, initializer=initializer, initargs=initargs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))
