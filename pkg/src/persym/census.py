"""Exhaustive rank census of a shape family, plus the free-row transform."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import CapacityError, ShapeError
from .gf2 import rank
from .model import CoeffAssignment, Shape, build_matrix
from .parallel import map_chunks

log = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 1 << 32
METHODS = ("exhaustive", "blockwise", "python", "auto")


@dataclass(frozen=True)
class RankDistribution:
    """Exact counts ``counts[i]`` of family members of rank i, i = 0..k.

    Entries above ``shape.rank_cap`` are always zero.
    """

    shape: Shape
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.counts) != self.shape.k + 1:
            raise ShapeError(
                f"{self.shape.label()} needs {self.shape.k + 1} counts, got {len(self.counts)}"
            )
        if any(c < 0 for c in self.counts):
            raise ShapeError("counts must be non-negative")
        if any(self.counts[self.shape.rank_cap + 1 :]):
            raise ShapeError(f"ranks above {self.shape.rank_cap} are impossible for {self.shape.label()}")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __getitem__(self, i: int) -> int:
        return self.counts[i] if 0 <= i < len(self.counts) else 0


def _shape_array(shape: Shape) -> np.ndarray:
    return np.asarray(shape.s, dtype=np.int64)


def check_cap(what: str, states: int, cap: int) -> None:
    if states > cap:
        raise CapacityError(what, states, cap)


def rank_census(
    shape: Shape,
    thread_budget: int | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
    method: str = "exhaustive",
) -> RankDistribution:
    """Count the members of ``shape``'s family by rank.

    ``exhaustive`` walks every assignment index with a compiled elimination,
    split into contiguous chunks across ``thread_budget`` threads.
    ``blockwise`` enumerates each block on its own and joins row spaces
    block by block; it is exact and reaches families far beyond the
    exhaustive cap (the cap does not apply to it).
    ``auto`` picks between those two by family size.
    ``python`` is the slow reference path built on :func:`persym.gf2.rank`.
    """
    if method == "auto":
        method = _auto_method(shape, state_cap)
    if method not in METHODS:
        raise ValueError(f"unknown census method {method!r}; choose from {METHODS}")
    states = 1 << shape.coeff_bits
    if method == "blockwise":
        return _blockwise_census(shape)
    check_cap(f"census of {shape.label()}", states, state_cap)
    if method == "python":
        counts = [0] * (shape.k + 1)
        for x in range(states):
            counts[rank(build_matrix(shape, CoeffAssignment.from_index(shape, x)))] += 1
        return RankDistribution(shape, counts)

    s_arr = _shape_array(shape)
    k = shape.k
    log.info("census %s: %d states", shape.label(), states)

    def work(lo: int, hi: int) -> np.ndarray:
        part = np.zeros(k + 1, np.int64)
        _kernels.census_range(lo, hi, s_arr, k, part)
        return part

    counts = [0] * (k + 1)
    for part in map_chunks(work, states, thread_budget):
        for i, c in enumerate(part.tolist()):
            counts[i] += c
    return RankDistribution(shape, counts)


def _auto_method(shape: Shape, state_cap: int) -> str:
    """Exhaustive unless the family is past the cap or blocks are far smaller."""
    states = 1 << shape.coeff_bits
    per_block = sum(1 << sj for sj in set(shape.block_bits))
    if states > state_cap or states > 64 * per_block:
        return "blockwise"
    return "exhaustive"


def _canonical_span(words: Sequence[int], k: int) -> tuple[int, ...]:
    """Reduced row echelon basis of the span of ``words``; a canonical key."""
    pivots: dict[int, int] = {}
    for v in words:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    order = sorted(pivots, reverse=True)
    for i, p in enumerate(order):
        for q in order[:i]:
            if (pivots[q] >> p) & 1:
                pivots[q] ^= pivots[p]
    return tuple(pivots[p] for p in order)


@lru_cache(maxsize=None)
def _block_spans(sj: int, k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    keys = np.empty((1 << (sj + k - 1), k), np.int64)
    _kernels.block_span_keys(sj, k, keys)
    rows, counts = np.unique(keys, axis=0, return_counts=True)
    return tuple(
        (tuple(v for v in row if v), int(c)) for row, c in zip(rows.tolist(), counts.tolist())
    )


def _blockwise_census(shape: Shape) -> RankDistribution:
    k = shape.k
    state: Counter = Counter({(): 1})
    joins: dict = {}
    for sj in shape.s:
        nxt: Counter = Counter()
        for span_a, ca in state.items():
            for span_b, cb in _block_spans(sj, k):
                key = (span_a, span_b)
                joined = joins.get(key)
                if joined is None:
                    joined = joins[key] = _canonical_span(span_a + span_b, k)
                nxt[joined] += ca * cb
        state = nxt
    counts = [0] * (shape.k + 1)
    for span, c in state.items():
        counts[len(span)] += c
    return RankDistribution(shape, counts)


def ranks_by_index(shape: Shape, state_cap: int = 1 << 24) -> np.ndarray:
    """Rank of every family member, indexed by assignment index."""
    states = 1 << shape.coeff_bits
    check_cap(f"rank table of {shape.label()}", states, state_cap)
    out = np.empty(states, np.int8)
    _kernels.ranks_range(0, states, _shape_array(shape), shape.k, out)
    return out


def augment_row(dist: RankDistribution, k: int | None = None) -> RankDistribution:
    """Distribution after appending one unconstrained row of width k.

    A member of rank i keeps rank i for the 2**i new rows inside its row
    space and climbs from i-1 to i for the 2**k - 2**(i-1) rows outside.
    """
    k = dist.shape.k if k is None else k
    if k != dist.shape.k:
        raise ShapeError(f"row width {k} differs from the family width {dist.shape.k}")
    new_shape = dist.shape.with_free_row()
    out = []
    for i in range(k + 1):
        stay = (1 << i) * dist[i]
        climb = ((1 << k) - (1 << (i - 1))) * dist[i - 1] if i >= 1 else 0
        out.append(stay + climb)
    return RankDistribution(new_shape, out)


__all__ = [
    "DEFAULT_STATE_CAP",
    "RankDistribution",
    "augment_row",
    "rank_census",
    "ranks_by_index",
]
