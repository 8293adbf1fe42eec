"""Closed-form rank counts and solution counts, evaluated exactly.

Every expression is computed with :class:`fractions.Fraction`. Powers of two
with negative exponents show up in intermediate terms at small ranks and
cancel; counts are checked for integrality and sign before they are returned.
"""

from __future__ import annotations

from fractions import Fraction

from .census import RankDistribution
from .errors import FormulaError, ShapeError
from .model import Shape


def pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def as_count(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise FormulaError(f"{what} is not integral: {value}")
    if value < 0:
        raise FormulaError(f"{what} is negative: {value}")
    return int(value)


def _require_eligible(shape: Shape) -> None:
    if not shape.conjecture_eligible:
        raise ShapeError(
            f"{shape.label()} has a block with fewer than k-1 = {shape.k - 1} rows; "
            "the closed forms do not apply"
        )


def _low_rank_term(n: int, i: int) -> Fraction:
    # rank-i count for 1 <= i <= k-1; depends on n only
    return (
        ((1 << (i + 1)) - 1) * pow2(i * n)
        - 3 * ((1 << i) - 1) * pow2((i - 1) * n)
        + (pow2(i - 1) - 1) * pow2((i - 2) * n + 1)
    )


def gamma_conjectured(shape: Shape, i: int) -> int:
    """Conjectured number of rank-i members of an eligible family."""
    _require_eligible(shape)
    n, k = shape.n, shape.k
    if not 0 <= i <= k:
        raise ValueError(f"rank {i} outside 0..{k}")
    if i == 0:
        return 1
    if i < k:
        value = _low_rank_term(n, i)
    else:
        value = (
            pow2(shape.total_rows + (k - 1) * n)
            - ((1 << k) - 1) * pow2((k - 1) * n)
            + ((1 << (k - 1)) - 1) * pow2((k - 2) * n + 1)
        )
    return as_count(value, f"gamma_{i} of {shape.label()}")


def conjectured_distribution(shape: Shape) -> RankDistribution:
    return RankDistribution(shape, [gamma_conjectured(shape, i) for i in range(shape.k + 1)])


def gamma_conjectured_alt(shape: Shape | int, i: int) -> Fraction:
    """Factored form of the rank-i count, valid for 1 <= i <= k-1.

    Accepts a shape or the block count n directly (the value depends on n only).
    """
    if isinstance(shape, Shape):
        n = shape.n
        if not 1 <= i <= shape.k - 1:
            raise ValueError(f"rank {i} outside 1..{shape.k - 1}")
    else:
        n = shape
        if i < 1:
            raise ValueError("rank must be >= 1")
    a = (1 << n) - 1
    return a * ((1 << (n + 1)) - 1) * pow2(i * (n + 1) - 2 * n) - a * (pow2(n - 1) - 1) * pow2(
        i * n - 2 * n + 1
    )


def gamma_k_minus_1(shape: Shape) -> int:
    """Rank k-1 count obtained by eliminating the top rank from the two moment identities."""
    _require_eligible(shape)
    n, k = shape.n, shape.k
    value = (
        pow2((k - 1) * n) * ((1 << k) - 1)
        + 3 * pow2(n * k - 2 * n) * (1 - (1 << (k - 1)))
        + pow2(n * k - 3 * n + 1) * (pow2(k - 2) - 1)
    )
    return as_count(value, f"gamma_(k-1) of {shape.label()}")


def special_case_density(n: int, i: int) -> Fraction:
    """Simplified rank-i counts for one, two and three blocks."""
    if i < 1:
        raise ValueError("rank must be >= 1")
    if n == 1:
        return 3 * pow2(2 * i - 2)
    if n == 2:
        return 21 * pow2(3 * i - 4) - 3 * pow2(2 * i - 3)
    if n == 3:
        return 105 * pow2(4 * i - 6) - 21 * pow2(3 * i - 5)
    raise ValueError(f"no simplified form for n={n}; only n in (1, 2, 3)")


def rq_closed(dist: RankDistribution, q: int) -> int:
    """R_q from a complete rank distribution.

    R_q = 2**(q*(sum s + k) - coeff_bits) * sum_i Gamma_i * 2**(-i*q).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    shape = dist.shape
    weighted = sum((c * pow2(-i * q) for i, c in enumerate(dist.counts)), Fraction(0))
    value = pow2(q * (shape.total_rows + shape.k) - shape.coeff_bits) * weighted
    return as_count(value, f"R_{q} of {shape.label()}")


def rq_explicit_k2(n: int, q: int) -> int:
    """R_q for n single-row blocks of width 2, in closed form."""
    if q < 1 or n < 1:
        raise ValueError("n and q must be >= 1")
    bracket = (1 << (2 * q)) + (1 << (2 * n)) + 3 * ((1 << (n + q)) - (1 << q) - (1 << n)) + 2
    return as_count(pow2((q - 2) * n) * bracket, f"explicit R_{q} for n={n}")


def first_moment(dist: RankDistribution) -> tuple[Fraction, int]:
    """Both sides of 2**(k-(k-1)n) * sum Gamma_i 2**-i = 2**(sum s) + 2**k - 1."""
    shape = dist.shape
    lhs = pow2(shape.k - (shape.k - 1) * shape.n) * sum(
        (c * pow2(-i) for i, c in enumerate(dist.counts)), Fraction(0)
    )
    return lhs, (1 << shape.total_rows) + (1 << shape.k) - 1


def pow2_factor(value: int) -> tuple[int, int]:
    """Split a positive integer as 2**a * m with m odd."""
    if value <= 0:
        raise ValueError("pow2_factor needs a positive integer")
    a = (value & -value).bit_length() - 1
    return a, value >> a
