"""
Floating-point sums without accumulated rounding.

ExactSum keeps Shewchuk's list of non-overlapping partials, so the running
total is held exactly and `value` is its correctly rounded float. Merging
two sums adds partials exactly, which makes merge associative and
commutative bit for bit.
"""

import math
from typing import Iterable


def _grow(partials: list[float], x: float) -> None:
    i = 0
    for y in partials:
        if abs(x) < abs(y):
            x, y = y, x
        hi = x + y
        lo = y - (hi - x)
        if lo:
            partials[i] = lo
            i += 1
        x = hi
    partials[i:] = [x]


class ExactSum:
    __slots__ = ("_partials",)

    def __init__(self, partials: Iterable[float] = ()):
        self._partials: list[float] = []
        for x in partials:
            _grow(self._partials, float(x))

    def add(self, x: float) -> None:
        _grow(self._partials, float(x))

    def add_chunk(self, values: Iterable[float]) -> None:
        """Add a whole chunk; the chunk total is rounded once before joining."""
        _grow(self._partials, math.fsum(values))

    def merged(self, other: "ExactSum") -> "ExactSum":
        result = self.copy()
        for x in other._partials:
            _grow(result._partials, x)
        return result

    def copy(self) -> "ExactSum":
        clone = ExactSum()
        clone._partials = list(self._partials)
        return clone

    @property
    def value(self) -> float:
        return math.fsum(self._partials)

    def __float__(self) -> float:
        return self.value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactSum):
            return NotImplemented
        return self.value == other.value

    __hash__ = None

    def __repr__(self) -> str:
        return f"ExactSum({self.value!r})"
