"""Exception types shared across the package."""

from __future__ import annotations


class ShapeError(ValueError):
    """A shape, assignment or series is inconsistent with what an operation needs."""


class CapacityError(RuntimeError):
    """An enumeration would exceed its state cap.

    ``required`` is the smallest cap that would let the operation run.
    """

    def __init__(self, what: str, required: int, cap: int):
        self.what = what
        self.required = required
        self.cap = cap
        super().__init__(
            f"{what}: {required} states exceed the cap of {cap} "
            f"(rerun with --cap {required} or larger)"
        )


class FormulaError(ArithmeticError):
    """A closed form produced a non-integral or negative count."""
