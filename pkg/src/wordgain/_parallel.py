"""Order-preserving parallel map over documents.

Workers receive pure per-document functions, so results are identical for
any job count; merges elsewhere are sums or sorted collections, keeping
every artifact byte-stable regardless of parallelism.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    if jobs <= 1 or not items:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (jobs * 8))
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items, chunksize=chunksize))
