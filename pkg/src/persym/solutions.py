"""Brute-force count of solutions of the bilinear systems

    Y_1 U_j^(1) + ... + Y_q U_j^(q) = 0,   j = 1..n,

with deg Y_i <= k-1 and deg U_j^(i) <= s_j - 1. Every tuple is enumerated;
no rank or character argument is used, which keeps this count independent
of the census and the coset integral.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .census import check_cap
from .gf2 import PolyGF2, poly_mul
from .model import Shape
from .parallel import map_chunks

log = logging.getLogger(__name__)

DEFAULT_TUPLE_CAP = 1 << 24


@dataclass(frozen=True)
class SolutionSystem:
    shape: Shape
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be >= 1")

    @property
    def tuple_bits(self) -> int:
        return self.q * (self.shape.k + self.shape.total_rows)

    @property
    def tuple_space(self) -> int:
        return 1 << self.tuple_bits

    def decode(self, x: int) -> tuple[list[PolyGF2], list[list[PolyGF2]]]:
        """Tuple index -> (Y_1..Y_q, U[i][j] = U_{j+1}^{(i+1)})."""
        k, s = self.shape.k, self.shape.s
        ys, us = [], []
        for _ in range(self.q):
            ys.append(PolyGF2(x & ((1 << k) - 1)))
            x >>= k
            row = []
            for sj in s:
                row.append(PolyGF2(x & ((1 << sj) - 1)))
                x >>= sj
            us.append(row)
        return ys, us

    def is_solution(self, x: int) -> bool:
        ys, us = self.decode(x)
        for j in range(self.shape.n):
            acc = PolyGF2(0)
            for i in range(self.q):
                acc = acc + poly_mul(ys[i], us[i][j])
            if not acc.is_zero():
                return False
        return True


def count_solutions(
    sys: SolutionSystem,
    state_cap: int = DEFAULT_TUPLE_CAP,
    threads: int | None = None,
    compiled: bool = True,
) -> int:
    """Exact R_q by enumeration. ``compiled=False`` runs the pure-Python loop."""
    space = sys.tuple_space
    check_cap(f"solution count for {sys.shape.label()} q={sys.q}", space, state_cap)
    log.info("brute force %s q=%d: %d tuples", sys.shape.label(), sys.q, space)
    if not compiled:
        return sum(1 for x in range(space) if sys.is_solution(x))
    s_arr = np.asarray(sys.shape.s, np.int64)
    parts = map_chunks(
        lambda lo, hi: _kernels.solutions_range(lo, hi, s_arr, sys.shape.k, sys.q),
        space,
        threads,
        min_chunk=1 << 16,
    )
    return sum(int(p) for p in parts)
