"""Bit-packed GF(2) matrices and polynomials.

Matrix rows and polynomial coefficients are stored as Python ints: bit ``c`` of
a row word is the entry in column ``c``; bit ``d`` of a polynomial word is the
coefficient of ``T**d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_COLS = 63
POLY_WINDOW = 63  # coefficients T^0 .. T^62

# Degree of the zero polynomial. Compares below every integer, so predicates
# like ``deg <= bound`` need no special case.
NEG_INF = float("-inf")


@dataclass(frozen=True)
class BitMatrix:
    rows: int
    cols: int
    row_words: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0:
            raise ValueError("rows must be non-negative")
        if not 0 < self.cols <= MAX_COLS:
            raise ValueError(f"cols must lie in 1..{MAX_COLS}, got {self.cols}")
        if len(self.row_words) != self.rows:
            raise ValueError(f"expected {self.rows} row words, got {len(self.row_words)}")
        limit = 1 << self.cols
        for w in self.row_words:
            if not 0 <= w < limit:
                raise ValueError(f"row word {w:#x} has bits beyond column {self.cols - 1}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        """Build from nested 0/1 lists; ``rows[r][c]`` is entry (r, c)."""
        if not rows:
            raise ValueError("from_rows needs at least one row to infer the width")
        cols = len(rows[0])
        words = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            w = 0
            for c, bit in enumerate(row):
                if bit not in (0, 1):
                    raise ValueError(f"entry {bit!r} is not a GF(2) element")
                w |= bit << c
            words.append(w)
        return cls(len(rows), cols, tuple(words))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    def entry(self, r: int, c: int) -> int:
        return (self.row_words[r] >> c) & 1

    def to_rows(self) -> list[list[int]]:
        return [[(w >> c) & 1 for c in range(self.cols)] for w in self.row_words]

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if other.cols != self.cols:
            raise ValueError("column counts differ")
        return BitMatrix(self.rows + other.rows, self.cols, self.row_words + other.row_words)


def rank_of_words(words: Iterable[int], cols: int) -> int:
    """GF(2) rank of row words of width ``cols``.

    Forward elimination keyed by pivot column: ``pivots[c]`` holds the row
    whose highest set bit is ``c``.
    """
    pivots = [0] * cols
    rank = 0
    for v in words:
        while v:
            top = v.bit_length() - 1
            p = pivots[top]
            if not p:
                pivots[top] = v
                rank += 1
                break
            v ^= p
        if rank == cols:
            break
    return rank


def rank(m: BitMatrix) -> int:
    """Row rank of ``m`` over GF(2). The matrix is not modified."""
    return rank_of_words(m.row_words, m.cols)


@dataclass(frozen=True)
class PolyGF2:
    coeff_bits: int = 0

    def __post_init__(self):
        if self.coeff_bits < 0:
            raise ValueError("coefficient word must be non-negative")

    @classmethod
    def from_exponents(cls, *exponents: int) -> "PolyGF2":
        """``from_exponents(2, 0)`` is T^2 + 1. Repeated exponents cancel."""
        bits = 0
        for e in exponents:
            bits ^= 1 << e
        return cls(bits)

    @property
    def degree(self) -> int | float:
        return self.coeff_bits.bit_length() - 1 if self.coeff_bits else NEG_INF

    def is_zero(self) -> bool:
        return self.coeff_bits == 0

    def __add__(self, other: "PolyGF2") -> "PolyGF2":
        return PolyGF2(self.coeff_bits ^ other.coeff_bits)

    def __mul__(self, other: "PolyGF2") -> "PolyGF2":
        return poly_mul(self, other)

    def __str__(self) -> str:
        if not self.coeff_bits:
            return "0"
        terms = []
        for d in range(self.coeff_bits.bit_length() - 1, -1, -1):
            if (self.coeff_bits >> d) & 1:
                terms.append("1" if d == 0 else "T" if d == 1 else f"T^{d}")
        return " + ".join(terms)


def clmul(a: int, b: int) -> int:
    """Carry-less product of two coefficient words."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mul(a: PolyGF2, b: PolyGF2) -> PolyGF2:
    if a.is_zero() or b.is_zero():
        return PolyGF2(0)
    if a.degree + b.degree >= POLY_WINDOW:
        raise OverflowError(
            f"product degree {a.degree + b.degree} leaves the {POLY_WINDOW}-coefficient window"
        )
    return PolyGF2(clmul(a.coeff_bits, b.coeff_bits))


def parity(word: int) -> int:
    return word.bit_count() & 1
