"""Rank tables as previously published, kept verbatim (typos included) so
reports can compare them against exact computation."""

from __future__ import annotations

from .model import Shape

PUBLISHED_GAMMA: dict[tuple[tuple[int, ...], int], tuple[int, ...]] = {
    ((2, 2, 2, 2), 3): (1, 45, 1650, 63840),
    ((3, 3, 3), 4): (1, 21, 378, 6384, 255360),
    ((4, 4, 4, 4), 4): (1, 45, 1650, 56160, 268377600),
    # four 2x3 blocks plus one free row of width 3
    ((1, 2, 2, 2, 2), 3): (1, 97, 6870, 5177320),
}

PUBLISHED_RQ: dict[tuple[tuple[int, ...], int, int], int] = {
    ((4, 4, 4, 4), 4, 4): (1 << 45) * 527243,
}


def _key(shape: Shape) -> tuple[tuple[int, ...], int]:
    # rank counts do not depend on the order of the blocks
    return tuple(sorted(shape.s)), shape.k


def published_gamma(shape: Shape) -> tuple[int, ...] | None:
    return PUBLISHED_GAMMA.get(_key(shape))


def published_rq(shape: Shape, q: int) -> int | None:
    s, k = _key(shape)
    return PUBLISHED_RQ.get((s, k, q))
