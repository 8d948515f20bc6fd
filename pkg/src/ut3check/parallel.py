"""Deterministic first-hit search over an indexed enumeration.

The scanning function takes a half-open index range and returns ``(index,
payload)`` for the smallest hit in that range, or None.  With several workers
the ranges run in separate processes and the smallest index wins, so the result
never depends on completion order.
"""

from __future__ import annotations

import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional

Hit = Optional[tuple]
ScanFn = Callable[[int, int], Hit]


def _chunks(total: int, size: int):
    for start in range(0, total, size):
        yield start, min(start + size, total)


def first_hit(scan: ScanFn, total: int, workers: int = 1, chunk: int | None = None) -> Hit:
    if total <= 0:
        return None
    if workers <= 1:
        return scan(0, total)
    if chunk is None:
        chunk = max(1, -(-total // (4 * workers)))
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        futures = [pool.submit(scan, a, b) for a, b in _chunks(total, chunk)]
        hits = [f.result() for f in futures]
    found = [h for h in hits if h is not None]
    return min(found, key=lambda h: h[0]) if found else None

