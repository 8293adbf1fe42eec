"""Thread budget resolution and deterministic chunked execution."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")

ENV_THREADS = "PERSYM_THREADS"


def default_threads() -> int:
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{ENV_THREADS}={env!r} is not an integer") from None
        if value < 1:
            raise ValueError(f"{ENV_THREADS} must be >= 1")
        return value
    return os.cpu_count() or 1


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        return default_threads()
    if threads < 1:
        raise ValueError("thread budget must be >= 1")
    return threads


def split_range(total: int, pieces: int) -> list[tuple[int, int]]:
    """Contiguous, near-equal, non-empty chunks covering [0, total)."""
    pieces = max(1, min(pieces, total))
    base, extra = divmod(total, pieces)
    out, lo = [], 0
    for i in range(pieces):
        hi = lo + base + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def map_chunks(
    work: Callable[[int, int], T],
    total: int,
    threads: int | None,
    min_chunk: int = 1 << 12,
) -> list[T]:
    """Run ``work(lo, hi)`` over chunks of [0, total); results in chunk order.

    Callers merge the partials with an associative, commutative operation, so
    the final answer does not depend on the thread budget.
    """
    threads = resolve_threads(threads)
    if total <= 0:
        return []
    pieces = 1 if total <= min_chunk else min(threads * 4, -(-total // min_chunk))
    chunks = split_range(total, pieces)
    if threads == 1 or len(chunks) == 1:
        return [work(lo, hi) for lo, hi in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: work(*c), chunks))
