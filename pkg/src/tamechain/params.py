"""Exact parameter values: non-negative rationals plus infinity.

Grid points and interval endpoints are compared exactly, so discretising
sequences never suffer float-equality artifacts.  ``INFINITY`` is a single
shared value greater than every rational.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering


class ParamError(ValueError):
    """Raised for negative or malformed parameter values."""


@total_ordering
class Param:
    """A point of [0, oo]: an exact non-negative rational or infinity."""

    __slots__ = ("value",)

    def __init__(self, value):
        if value is None:
            self.value = None
            return
        if isinstance(value, Param):
            self.value = value.value
            return
        if isinstance(value, float):
            raise ParamError("parameters must be exact rationals, not floats")
        v = Fraction(value)
        if v < 0:
            raise ParamError(f"parameters must be non-negative, got {v}")
        self.value = v

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __eq__(self, other):
        if not isinstance(other, Param):
            return NotImplemented
        return self.value == other.value

    def __lt__(self, other):
        if not isinstance(other, Param):
            return NotImplemented
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        if self.value is None:
            return "inf"
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return f"{self.value.numerator}/{self.value.denominator}"

    def __repr__(self):
        return f"Param({self})"

    @classmethod
    def parse(cls, text: str) -> "Param":
        text = text.strip()
        if text == "inf":
            return INFINITY
        try:
            return cls(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParamError(f"cannot parse parameter {text!r}") from exc


INFINITY = Param(None)
ZERO = Param(0)


def param(value) -> Param:
    """Coerce ints, Fractions, strings and Params to a Param."""
    if isinstance(value, Param):
        return value
    if isinstance(value, str):
        return Param.parse(value)
    return Param(value)


def merge_grids(*grids) -> tuple:
    """Sorted union of finite grids, always containing 0."""
    pts = {ZERO}
    for g in grids:
        for t in g:
            t = param(t)
            if t.is_infinite:
                raise ParamError("grids contain finite values only")
            pts.add(t)
    return tuple(sorted(pts))
