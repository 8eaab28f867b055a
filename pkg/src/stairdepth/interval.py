"""
Defines a closed interval type (`Interval`) with optionally infinite endpoints,
and an axis-parallel box type (`AxisBox`) built from one interval per axis.

These are the shapes the stair-convexity machinery is made of: every component
``C_i(a)``, every clipped stair-halfspace and every piece of a stair-flat is a
finite union of `AxisBox` objects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .util import Point, ScalarLike, as_scalar, lazygen, midpoint


class InvalidIntervalError(ValueError):
    """
    Exception raised when an interval is mal-formed (e.g. the high point is less than the low point).

    Derived from `ValueError`.
    """


class Interval:
    """
    A closed interval ``[lo, hi]`` of exact scalars. Either endpoint may be
    `None`, meaning the interval is unbounded on that side.

    This class is immutable, hashable, and equality-comparable.

    :param lo: The lower endpoint, or `None` for ``-inf``.
    :param hi: The upper endpoint, or `None` for ``+inf``.
    """

    __slots__ = ("__lo", "__hi")

    def __init__(self, lo: ScalarLike | None = None, hi: ScalarLike | None = None) -> None:
        self.__lo = None if lo is None else as_scalar(lo)
        self.__hi = None if hi is None else as_scalar(hi)
        if self.__lo is not None and self.__hi is not None and self.__hi < self.__lo:
            raise InvalidIntervalError(f"Interval is not valid (low={lo!r}, high={hi!r})")

    @staticmethod
    def point(p: ScalarLike) -> Interval:
        """The degenerate interval ``[p, p]``"""
        return Interval(p, p)

    @property
    def lo(self) -> Fraction | None:
        """The lower endpoint, `None` if unbounded below"""
        return self.__lo

    @property
    def hi(self) -> Fraction | None:
        """The upper endpoint, `None` if unbounded above"""
        return self.__hi

    @property
    def is_bounded(self) -> bool:
        return self.__lo is not None and self.__hi is not None

    @property
    def is_degenerate(self) -> bool:
        """`True` if the interval is a single point"""
        return self.__lo is not None and self.__lo == self.__hi

    @property
    def length(self) -> Fraction | None:
        """The length of the interval, or `None` if it is unbounded"""
        if self.__lo is None or self.__hi is None:
            return None
        return self.__hi - self.__lo

    def contains(self, p: Fraction) -> bool:
        """Returns `True` if the closed interval contains ``p``"""
        if self.__lo is not None and p < self.__lo:
            return False
        if self.__hi is not None and self.__hi < p:
            return False
        return True

    def contains_strictly(self, p: Fraction) -> bool:
        """Returns `True` if ``p`` lies in the interior of the interval"""
        if self.__lo is not None and p <= self.__lo:
            return False
        if self.__hi is not None and self.__hi <= p:
            return False
        return True

    def covers(self, other: Interval) -> bool:
        """Returns `True` if ``other`` is a subset of this interval"""
        if self.__lo is not None and (other.lo is None or other.lo < self.__lo):
            return False
        if self.__hi is not None and (other.hi is None or self.__hi < other.hi):
            return False
        return True

    def __and__(self, other: Interval) -> Interval | None:
        """Form the intersection of two intervals. This is an alias of `.intersection`"""
        return self.intersection(other)

    def intersection(self, other: Interval) -> Interval | None:
        """
        Form the intersection of two intervals. Returns `None` if the intervals
        are disjoint. Touching intervals intersect in a degenerate interval.
        """
        lo = _max_low(self.__lo, other.lo)
        hi = _min_high(self.__hi, other.hi)
        if lo is not None and hi is not None and hi < lo:
            return None
        return Interval(lo, hi)

    def representative(self) -> Fraction:
        """
        Return a point strictly inside the interval (or the point itself for a
        degenerate interval). Bounded intervals yield their midpoint; an
        unbounded side is handled by stepping one unit past the finite endpoint.
        """
        if self.__lo is None and self.__hi is None:
            return Fraction(0)
        if self.__lo is None:
            assert self.__hi is not None
            return self.__hi - 1
        if self.__hi is None:
            return self.__lo + 1
        return midpoint(self.__lo, self.__hi)

    def sample_points(self) -> Sequence[Fraction]:
        """The finite endpoints and an interior representative, in increasing order"""
        pts = {self.representative()}
        for end in (self.__lo, self.__hi):
            if end is not None:
                pts.add(end)
        return sorted(pts)

    def __repr__(self) -> str:
        return f"<Interval {self}>"

    def __str__(self) -> str:
        lo = "(-∞" if self.__lo is None else f"[{self.__lo}"
        hi = "∞)" if self.__hi is None else f"{self.__hi}]"
        return f"{lo}, {hi}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return self.__lo == other.lo and self.__hi == other.hi

    def __hash__(self) -> int:
        return hash((self.__lo, self.__hi))


def _max_low(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min_high(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class AxisBox:
    """
    A closed axis-parallel box: the product of one `Interval` per axis. Sides may
    be unbounded or degenerate.
    """

    sides: tuple[Interval, ...]

    @staticmethod
    def full(d: int) -> AxisBox:
        """The whole of ``R^d``"""
        return AxisBox(tuple(Interval() for _ in range(d)))

    @staticmethod
    def unit(d: int) -> AxisBox:
        """The unit cube ``[0, 1]^d``"""
        return AxisBox(tuple(Interval(0, 1) for _ in range(d)))

    @staticmethod
    def from_bounds(lows: Iterable[ScalarLike | None], highs: Iterable[ScalarLike | None]) -> AxisBox:
        return AxisBox(tuple(Interval(lo, hi) for lo, hi in zip(lows, highs)))

    @staticmethod
    def at_point(p: Point) -> AxisBox:
        return AxisBox(tuple(Interval.point(c) for c in p))

    @property
    def dimension(self) -> int:
        return len(self.sides)

    @property
    def is_bounded(self) -> bool:
        return all(s.is_bounded for s in self.sides)

    @property
    def rank(self) -> int:
        """The number of non-degenerate sides (the dimension of the box as a set)"""
        return sum(1 for s in self.sides if not s.is_degenerate)

    def contains(self, x: Point) -> bool:
        assert len(x) == len(self.sides), f"Point and box dimensions differ [{x=}, {self=}]"
        return all(s.contains(c) for s, c in zip(self.sides, x))

    def covers(self, other: AxisBox) -> bool:
        """`True` if ``other`` is a subset of this box"""
        return all(mine.covers(theirs) for mine, theirs in zip(self.sides, other.sides))

    def intersection(self, other: AxisBox) -> AxisBox | None:
        sides: list[Interval] = []
        for mine, theirs in zip(self.sides, other.sides):
            isect = mine & theirs
            if isect is None:
                return None
            sides.append(isect)
        return AxisBox(tuple(sides))

    def volume(self) -> Fraction | None:
        """The exact volume of the box, or `None` if it is unbounded"""
        vol = Fraction(1)
        for s in self.sides:
            length = s.length
            if length is None:
                return None
            vol *= length
        return vol

    def extend(self, side: Interval) -> AxisBox:
        """Return the box with one more axis appended"""
        return AxisBox(self.sides + (side,))

    def representative(self) -> Point:
        """A point in the relative interior of the box"""
        return tuple(s.representative() for s in self.sides)

    @lazygen
    def corners(self) -> Iterator[Point]:
        """Yield the vertices of a bounded box"""
        ends: list[tuple[Fraction, ...]] = []
        for s in self.sides:
            if s.lo is None or s.hi is None:
                raise ValueError(f"An unbounded box has no corners: {self}")
            ends.append((s.lo,) if s.is_degenerate else (s.lo, s.hi))
        yield from itertools.product(*ends)

    @lazygen
    def sample_points(self) -> Iterator[Point]:
        """
        Yield a finite sample of the box: the product of every side's endpoints and
        interior representative. Unbounded sides contribute a point one unit past
        their finite endpoint.
        """
        yield from itertools.product(*(s.sample_points() for s in self.sides))

    def __str__(self) -> str:
        return " × ".join(map(str, self.sides))
