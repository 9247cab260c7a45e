"""Closed intervals with outward-rounded float endpoints."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Enclosure", "round_down", "round_up", "PI"]

_INF = math.inf


def round_down(x: float) -> float:
    return math.nextafter(x, -_INF)


def round_up(x: float) -> float:
    return math.nextafter(x, _INF)


def fraction_floor(q: Fraction) -> float:
    """Largest float <= q."""
    f = float(q)
    if Fraction(f) > q:
        f = round_down(f)
    return f


def fraction_ceil(q: Fraction) -> float:
    """Smallest float >= q."""
    f = float(q)
    if Fraction(f) < q:
        f = round_up(f)
    return f


@dataclass(frozen=True)
class Enclosure:
    """An interval ``[lo, hi]`` certified to contain some real quantity.

    Arithmetic between enclosures rounds every endpoint outward by one ulp,
    which is enough to keep the result rigorous under round-to-nearest.
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"empty enclosure [{self.lo!r}, {self.hi!r}]")

    @classmethod
    def point(cls, x: float) -> "Enclosure":
        return cls(x, x)

    @classmethod
    def from_fractions(cls, lo: Fraction, hi: Fraction | None = None) -> "Enclosure":
        if hi is None:
            hi = lo
        return cls(fraction_floor(Fraction(lo)), fraction_ceil(Fraction(hi)))

    @classmethod
    def around(cls, x: float, radius: float) -> "Enclosure":
        return cls(round_down(x - radius), round_up(x + radius))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def is_subset(self, other: "Enclosure") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __add__(self, other: "Enclosure | float") -> "Enclosure":
        if not isinstance(other, Enclosure):
            other = Enclosure.point(float(other))
        return Enclosure(round_down(self.lo + other.lo), round_up(self.hi + other.hi))

    __radd__ = __add__

    def __mul__(self, other: "Enclosure | float") -> "Enclosure":
        if not isinstance(other, Enclosure):
            other = Enclosure.point(float(other))
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        # a product with a zero factor is exact; any other product (including
        # one that underflows to zero) is rounded outward
        lo = min(a * b if a == 0 or b == 0 else round_down(a * b) for a, b in pairs)
        hi = max(a * b if a == 0 or b == 0 else round_up(a * b) for a, b in pairs)
        return Enclosure(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other: "Enclosure | float") -> "Enclosure":
        if not isinstance(other, Enclosure):
            other = Enclosure.point(float(other))
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("divisor enclosure contains zero")
        return self * Enclosure(round_down(1.0 / other.hi), round_up(1.0 / other.lo))

    def as_dict(self) -> dict[str, float]:
        return {"lo": self.lo, "hi": self.hi}


# math.pi is the double just below pi
PI = Enclosure(math.pi, round_up(math.pi))
