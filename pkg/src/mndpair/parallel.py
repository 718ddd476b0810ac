"""Order-preserving parallel map.

The worker count comes from ``MNDPAIR_THREADS`` (default: available CPUs).
Results are returned in input order, so every reduction downstream sees the
same sequence regardless of scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "MNDPAIR_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}") from None
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1))


def map_ordered(fn: Callable[[T], R], items: Iterable[T], min_items: int = 8) -> list[R]:
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) < min_items:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
