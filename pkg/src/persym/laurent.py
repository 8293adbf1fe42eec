"""Truncated Laurent tails over GF(2), the additive characters, and the
exponential sum f together with its integral over the unit interval.

Only tails alpha_1 T^-1 + ... + alpha_m T^-m are represented; such a tail
stands for its coset modulo P_m. Every integrand used here is constant on
cosets of prod_j P_{s_j+k-1}, so the Haar integral is an exact finite average.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .census import check_cap
from .errors import ShapeError
from .gf2 import PolyGF2, parity, poly_mul
from .model import Shape
from .parallel import map_chunks

log = logging.getLogger(__name__)

DEFAULT_COSET_CAP = 1 << 24
FACTORED_TABLE_CAP = 1 << 24


@dataclass(frozen=True)
class TruncatedLaurent:
    """Bit i-1 of ``bits`` is the coefficient of T^-i, for i = 1..depth."""

    depth: int
    bits: int = 0

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if not 0 <= self.bits < (1 << self.depth):
            raise ValueError(f"coefficients beyond depth {self.depth}")

    @classmethod
    def from_terms(cls, neg_powers: Sequence[int], depth: int) -> "TruncatedLaurent":
        """``from_terms([2, 4], 4)`` is T^-2 + T^-4."""
        bits = 0
        for p in neg_powers:
            if not 1 <= p <= depth:
                raise ValueError(f"T^-{p} is not retained at depth {depth}")
            bits ^= 1 << (p - 1)
        return cls(depth, bits)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "TruncatedLaurent":
        return cls(len(coeffs), sum(b << i for i, b in enumerate(coeffs)))

    def coeff(self, i: int) -> int:
        if not 1 <= i <= self.depth:
            raise IndexError(i)
        return (self.bits >> (i - 1)) & 1

    def in_ideal(self, j: int) -> bool:
        """Membership in P_j, i.e. alpha_1 .. alpha_j all vanish."""
        if j > self.depth:
            raise ValueError(f"P_{j} membership is undecided at depth {self.depth}")
        return self.bits & ((1 << j) - 1) == 0

    def deepen(self, depth: int, tail: int = 0) -> "TruncatedLaurent":
        """Another representative of a finer coset: keep the known
        coefficients and fill positions depth_old+1 .. depth from ``tail``."""
        if depth < self.depth:
            raise ValueError("cannot deepen to a smaller depth")
        extra = depth - self.depth
        return TruncatedLaurent(depth, self.bits | ((tail & ((1 << extra) - 1)) << self.depth))


def char_E(t: TruncatedLaurent) -> int:
    """+1 when the T^-1 coefficient vanishes, -1 otherwise."""
    if t.depth < 1:
        raise ShapeError("the character needs the T^-1 coefficient (depth >= 1)")
    return -1 if t.bits & 1 else 1


def char_E_poly_pair(t: TruncatedLaurent, y: PolyGF2, u: PolyGF2) -> int:
    """E(t * y * u): the T^-1 coefficient of t*y*u is sum_d c_d alpha_{d+1}."""
    yu = poly_mul(y, u)
    if yu.is_zero():
        return 1
    if yu.degree + 1 > t.depth:
        raise ShapeError(f"product degree {yu.degree} needs depth {yu.degree + 1}, have {t.depth}")
    return -1 if parity(yu.coeff_bits & t.bits) else 1


def char_psi(t: Sequence[TruncatedLaurent]) -> int:
    out = 1
    for tj in t:
        out *= char_E(tj)
    return out


def _check_depths(shape: Shape, t: Sequence[TruncatedLaurent]) -> None:
    if len(t) != shape.n:
        raise ShapeError(f"expected {shape.n} series, got {len(t)}")
    for j, (tj, width) in enumerate(zip(t, shape.block_bits)):
        if tj.depth < width:
            raise ShapeError(f"series {j} has depth {tj.depth}; needs {width}")


def exp_sum_f(shape: Shape, t: Sequence[TruncatedLaurent]) -> int:
    """f(t) = sum_{deg Y < k} prod_j sum_{deg U_j < s_j} E(t_j Y U_j), summed directly."""
    _check_depths(shape, t)
    total = 0
    for y in range(1 << shape.k):
        yp = PolyGF2(y)
        prod = 1
        for tj, sj in zip(t, shape.s):
            prod *= sum(char_E_poly_pair(tj, yp, PolyGF2(u)) for u in range(1 << sj))
            if prod == 0:
                break
        total += prod
    return total


def exp_sums_by_index(
    shape: Shape, state_cap: int = DEFAULT_COSET_CAP, full: bool = False
) -> np.ndarray:
    """f on every coset, indexed like assignments.

    The compiled sum runs over every Y; for each block the sum over U is
    taken as a product over the monomials T^e (the character is additive in
    U). ``full=True`` enumerates every U instead.
    """
    cosets = 1 << shape.coeff_bits
    check_cap(f"exponential sums of {shape.label()}", cosets, state_cap)
    out = np.empty(cosets, np.int64)
    kernel = _kernels.exp_sums_full_range if full else _kernels.exp_sums_range
    kernel(0, cosets, np.asarray(shape.s, np.int64), shape.k, out)
    return out


def f_value_counts(
    shape: Shape, state_cap: int = DEFAULT_COSET_CAP, threads: int | None = None
) -> dict[int, int]:
    """How many cosets take each value of f."""
    cosets = 1 << shape.coeff_bits
    check_cap(f"coset sum of {shape.label()}", cosets, state_cap)
    s_arr = np.asarray(shape.s, np.int64)
    log.info("coset sum %s: %d cosets", shape.label(), cosets)

    def work(lo: int, hi: int) -> Counter:
        buf = np.empty(hi - lo, np.int64)
        _kernels.exp_sums_range(lo, hi, s_arr, shape.k, buf)
        values, counts = np.unique(buf, return_counts=True)
        return Counter(dict(zip(values.tolist(), counts.tolist())))

    merged: Counter = Counter()
    for part in map_chunks(work, cosets, threads, min_chunk=1 << 14):
        merged.update(part)
    return dict(sorted(merged.items()))


def coset_integral(
    shape: Shape,
    q: int,
    state_cap: int = DEFAULT_COSET_CAP,
    threads: int | None = None,
    method: str = "direct",
) -> Fraction:
    """Integral of f**q over P^n.

    ``direct`` averages f**q over all 2**coeff_bits cosets (guarded by
    ``state_cap``). ``factored`` expands f**q over q-tuples of Y and
    integrates each block separately, the measure being a product over
    blocks; it needs only per-block tables and so reaches families with far
    too many cosets to list. ``auto`` takes whichever is estimated cheaper.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if method == "auto":
        method = "direct" if _direct_cost(shape) <= _factored_cost(shape, q) else "factored"
    if method == "direct":
        values = f_value_counts(shape, state_cap, threads)
        total = sum(count * value**q for value, count in values.items())
        return Fraction(total, 1 << shape.coeff_bits)
    if method == "factored":
        return _factored_integral(shape, q)
    raise ValueError(f"unknown integral method {method!r}")


def _direct_cost(shape: Shape) -> int:
    return (1 << (shape.coeff_bits + shape.k)) * max(shape.s)


def _factored_cost(shape: Shape, q: int) -> int:
    k = shape.k
    return sum(((1 << (k + sj + k - 1)) * sj) + (1 << (k * q + sj + k - 1)) * q for sj in set(shape.s))


def block_moments(sj: int, k: int, q: int, full: bool = False) -> np.ndarray:
    """moments[y_1, .., y_q] = sum over block words a of prod_i S(y_i, a).

    S is the inner character sum of one sj x k block. Dividing by
    2**(sj+k-1) gives that block's share of the integral of f**q.
    """
    table = _kernels.inner_sum_table(sj, k, full)
    width = sj + k - 1
    # |S| <= 2**sj, so int64 is exact while q*sj + width stays below 63 bits
    dtype = np.int64 if q * sj + width < 63 else object
    table = table.astype(dtype)
    acc = table
    for _ in range(q - 1):
        acc = acc[..., None, :] * table
    return acc.sum(axis=-1)


def _factored_integral(shape: Shape, q: int) -> Fraction:
    k = shape.k
    for sj in set(shape.s):
        check_cap(
            f"per-block character table ({sj}x{k}) with {q}-fold Y tuples",
            (1 << (k * q)) * (1 << (sj + k - 1)),
            FACTORED_TABLE_CAP,
        )
    moments = {sj: block_moments(sj, k, q).reshape(-1).tolist() for sj in set(shape.s)}
    total = 0
    for idx in range(1 << (k * q)):
        term = 1
        for sj in shape.s:
            term *= int(moments[sj][idx])
            if term == 0:
                break
        total += term
    return Fraction(total, 1 << shape.coeff_bits)
