"""
Ordered parallel map

Work items (test points, sphere radii) are independent. Results are always
collected in input order, so report bytes never depend on the thread count.
The pool size is capped by the COARSEDEG_THREADS environment variable.
"""

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "COARSEDEG_THREADS"


def resolve_threads(requested: int | None = None) -> int:
    """
    Resolve the number of worker threads

    Args:
        requested: Explicit request (None = read the environment)

    Returns:
        A positive thread count, never above the COARSEDEG_THREADS cap
    """
    cap_text = os.environ.get(THREADS_ENV, "").strip()
    try:
        cap = max(int(cap_text), 1) if cap_text else None
    except ValueError:
        cap = None

    threads = requested if requested is not None else (cap or 1)
    threads = max(int(threads), 1)
    if cap is not None:
        threads = min(threads, cap)
    return threads


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """
    Apply fn to every item, possibly concurrently, returning results in order

    Args:
        fn: Pure function of one item
        items: Work items
        threads: Requested worker count (see resolve_threads)

    Returns:
        [fn(item) for item in items], in input order
    """
    work = list(items)
    workers = resolve_threads(threads)
    if workers <= 1 or len(work) <= 1:
        return [fn(item) for item in work]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        # Executor.map yields in submission order
        return list(pool.map(fn, work))
