"""Shapes, coefficient assignments and the stacked Hankel matrix D.

Bit layout of an assignment index (fixed, so that shards are reproducible):
blocks are laid out block-major, and inside block ``j`` the coefficient
alpha_i (1-indexed) sits at bit ``offset_j + i - 1``. The integer
``x in [0, 2**coeff_bits)`` therefore enumerates every assignment once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .errors import ShapeError
from .gf2 import MAX_COLS, BitMatrix

if TYPE_CHECKING:
    from .laurent import TruncatedLaurent


@dataclass(frozen=True)
class Shape:
    """An n-times persymmetric family: block row counts ``s`` and width ``k``."""

    s: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        if not self.s:
            raise ShapeError("a shape needs at least one block")
        if any(v < 1 for v in self.s):
            raise ShapeError(f"block row counts must be >= 1, got {self.s}")
        if not 2 <= self.k <= MAX_COLS:
            raise ShapeError(f"k must lie in 2..{MAX_COLS}, got {self.k}")

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def total_rows(self) -> int:
        return sum(self.s)

    @property
    def block_bits(self) -> tuple[int, ...]:
        return tuple(sj + self.k - 1 for sj in self.s)

    @property
    def coeff_bits(self) -> int:
        return sum(self.block_bits)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for b in self.block_bits:
            out.append(acc)
            acc += b
        return tuple(out)

    @property
    def rank_cap(self) -> int:
        return min(self.total_rows, self.k)

    @property
    def conjecture_eligible(self) -> bool:
        return all(sj >= self.k - 1 for sj in self.s)

    def with_free_row(self, count: int = 1) -> "Shape":
        """Shape of the family with ``count`` unconstrained rows appended.

        A single free row of width k is exactly a Hankel block with one row.
        """
        return Shape(self.s + (1,) * count, self.k)

    def label(self) -> str:
        return f"[{','.join(map(str, self.s))}]x{self.k}"

    def to_json(self) -> dict:
        return {"n": self.n, "s": list(self.s), "k": self.k}


_REPEAT = re.compile(r"^(\d+)x(\d+)$")


def parse_block_list(text: str) -> tuple[int, ...]:
    """Parse ``"2,2,2,2"``; ``"4x3"`` is sugar for four blocks of 3.

    Items may be mixed: ``"2x3,4"`` gives (3, 3, 4).
    """
    out: list[int] = []
    for item in text.replace(" ", "").split(","):
        if not item:
            raise ShapeError(f"empty item in block list {text!r}")
        m = _REPEAT.match(item)
        if m:
            count, value = int(m.group(1)), int(m.group(2))
            if count < 1:
                raise ShapeError(f"repeat count must be >= 1 in {item!r}")
            out.extend([value] * count)
        elif item.isdigit():
            out.append(int(item))
        else:
            raise ShapeError(f"cannot parse block size {item!r}")
    return tuple(out)


def parse_shape(s_text: str, k: int) -> Shape:
    return Shape(parse_block_list(s_text), k)


@dataclass(frozen=True)
class CoeffAssignment:
    """Coefficient bits per block; ``blocks[j]`` bit ``i-1`` is alpha_i of block j."""

    shape: Shape
    blocks: tuple[int, ...]

    def __post_init__(self):
        if len(self.blocks) != self.shape.n:
            raise ShapeError(f"expected {self.shape.n} blocks, got {len(self.blocks)}")
        for j, (word, width) in enumerate(zip(self.blocks, self.shape.block_bits)):
            if not 0 <= word < (1 << width):
                raise ShapeError(f"block {j} word {word:#x} exceeds {width} coefficient bits")

    @classmethod
    def from_bits(cls, shape: Shape, blocks: Sequence[Sequence[int]]) -> "CoeffAssignment":
        """``blocks[j]`` lists alpha_1 .. alpha_{s_j+k-1} of block j as 0/1."""
        words = []
        for j, bits in enumerate(blocks):
            if j < shape.n and len(bits) != shape.block_bits[j]:
                raise ShapeError(
                    f"block {j} has {len(bits)} coefficients, expected {shape.block_bits[j]}"
                )
            words.append(_pack(bits))
        return cls(shape, tuple(words))

    @classmethod
    def from_index(cls, shape: Shape, x: int) -> "CoeffAssignment":
        if not 0 <= x < (1 << shape.coeff_bits):
            raise ShapeError(f"index {x} outside [0, 2**{shape.coeff_bits})")
        return cls(
            shape,
            tuple((x >> off) & ((1 << w) - 1) for off, w in zip(shape.offsets, shape.block_bits)),
        )

    def to_index(self) -> int:
        return sum(word << off for word, off in zip(self.blocks, self.shape.offsets))

    def alpha(self, j: int, i: int) -> int:
        """alpha_i of block j, with 1-indexed ``i`` and 0-indexed ``j``."""
        if not 1 <= i <= self.shape.block_bits[j]:
            raise IndexError(i)
        return (self.blocks[j] >> (i - 1)) & 1

    def block_bits_list(self, j: int) -> list[int]:
        return [(self.blocks[j] >> b) & 1 for b in range(self.shape.block_bits[j])]


def _pack(bits: Sequence[int]) -> int:
    word = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ShapeError(f"coefficient {b!r} is not a GF(2) element")
        word |= b << i
    return word


def _hankel_words(word: int, s: int, k: int) -> tuple[int, ...]:
    # row r (0-indexed) = (alpha_{r+1}, ..., alpha_{r+k}) = bits r .. r+k-1
    mask = (1 << k) - 1
    return tuple((word >> r) & mask for r in range(s))


def build_block(coeffs: Sequence[int], s: int, k: int) -> BitMatrix:
    """The s x k Hankel block whose entry (r, c) is alpha_{r+c-1} (1-indexed)."""
    if len(coeffs) != s + k - 1:
        raise ShapeError(f"a {s}x{k} block needs {s + k - 1} coefficients, got {len(coeffs)}")
    return BitMatrix(s, k, _hankel_words(_pack(coeffs), s, k))


def build_matrix(shape: Shape, a: CoeffAssignment) -> BitMatrix:
    """Vertical stack of the n Hankel blocks of ``a``."""
    if a.shape != shape:
        raise ShapeError(f"assignment belongs to {a.shape.label()}, not {shape.label()}")
    words: tuple[int, ...] = ()
    for word, sj in zip(a.blocks, shape.s):
        words += _hankel_words(word, sj, shape.k)
    return BitMatrix(shape.total_rows, shape.k, words)


def assignment_from_laurent(shape: Shape, t: Sequence["TruncatedLaurent"]) -> CoeffAssignment:
    """Read alpha_i^{(j)} off as the coefficient of T^{-i} in ``t[j]``.

    Only the first s_j + k - 1 coefficients are kept, so every tuple in one
    coset of prod_j P_{s_j+k-1} maps to the same assignment.
    """
    if len(t) != shape.n:
        raise ShapeError(f"expected {shape.n} series, got {len(t)}")
    blocks = []
    for j, (tj, width) in enumerate(zip(t, shape.block_bits)):
        if tj.depth < width:
            raise ShapeError(
                f"series {j} is truncated at depth {tj.depth}; block needs {width} coefficients"
            )
        blocks.append(tj.bits & ((1 << width) - 1))
    return CoeffAssignment(shape, tuple(blocks))
