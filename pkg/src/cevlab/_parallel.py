"""Replicate-range partitioning shared by the simulators.

Work is cut into fixed-size replicate chunks that do not depend on the
worker count, and results are always consumed in chunk order.  Together
with counter-addressed randomness this makes every output independent of
``threads``.
"""

from __future__ import annotations

import os
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

CHUNK = 1 << 18

T = TypeVar("T")
R = TypeVar("R")


def default_threads() -> int:
    return os.cpu_count() or 1


def chunk_bounds(n: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(lo, min(n, lo + chunk)) for lo in range(0, n, chunk)]


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> Iterator[R]:
    """Like ``map`` but optionally threaded; yields results in input order.

    At most ``2 * threads`` tasks are in flight so memory stays bounded.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        for item in items:
            yield fn(item)
        return
    window = 2 * threads
    with ThreadPoolExecutor(max_workers=threads) as pool:
        pending = [pool.submit(fn, item) for item in items[:window]]
        nxt = window
        while pending:
            result = pending.pop(0).result()
            if nxt < len(items):
                pending.append(pool.submit(fn, items[nxt]))
                nxt += 1
            yield result
