"""
The stretched grid: ``m^d`` points with coordinates ``K_i^(a_i)`` where the
constants ``K_1 = 2d`` and ``K_i = K_(i-1)^m`` grow so quickly that every axis
dominates all of the axes before it.

The logarithmic map ``pi`` sends the grid onto the uniform grid in ``[0, 1]^d``.
It is only ever evaluated exactly: on grid-aligned coordinates by exponent
recovery, and on arbitrary points through exact power comparisons.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .interval import AxisBox, Interval
from .util import Point, ScalarLike, as_scalar, lazygen


class GridIndexError(ValueError):
    """
    Exception raised for invalid grid parameters or out-of-range grid indices.
    """


class NotGridAlignedError(ValueError):
    """
    Exception raised when a coordinate is expected to be an exact grid value (a
    power of ``K_i``, or a multiple of ``1/(m-1)`` in the unit cube) but is not.
    """


@dataclass(frozen=True)
class GridParams:
    """
    Parameters of the stretched grid in ``R^d`` with side ``m``.
    """

    d: int
    m: int
    K: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.d < 1:
            raise GridIndexError(f"Grid dimension must be at least 1 (got {self.d})")
        if self.m < 2:
            raise GridIndexError(f"Grid side length must be at least 2 (got {self.m})")
        ks = [2 * self.d]
        for _ in range(1, self.d):
            ks.append(ks[-1] ** self.m)
        object.__setattr__(self, "K", tuple(ks))

    @property
    def n(self) -> int:
        """The number of grid points"""
        return self.m**self.d

    @property
    def step(self) -> Fraction:
        """The spacing ``1/(m-1)`` of the uniform unit grid"""
        return Fraction(1, self.m - 1)

    @property
    def box(self) -> AxisBox:
        """The bounding box ``[1, K_1^(m-1)] x ... x [1, K_d^(m-1)]``"""
        return AxisBox(tuple(Interval(1, k ** (self.m - 1)) for k in self.K))


def check_index(params: GridParams, idx: Sequence[int]) -> None:
    if len(idx) != params.d:
        raise GridIndexError(f"Grid index {tuple(idx)} has {len(idx)} coordinates, expected {params.d}")
    for a in idx:
        if not 0 <= a < params.m:
            raise GridIndexError(f"Grid index {tuple(idx)} is out of range 0..{params.m - 1}")


def grid_point(params: GridParams, idx: Sequence[int]) -> Point:
    """Return the grid point ``(K_1^(a_1), ..., K_d^(a_d))``"""
    check_index(params, idx)
    return tuple(Fraction(k**a) for k, a in zip(params.K, idx))


@lazygen
def indices(params: GridParams) -> Iterator[tuple[int, ...]]:
    """Yield every grid index in lexicographic order"""
    yield from itertools.product(range(params.m), repeat=params.d)


@lazygen
def points(params: GridParams) -> Iterator[Point]:
    """Yield every grid point, in the order of `indices`"""
    for idx in indices(params):
        yield grid_point(params, idx)


def exact_exponent(base: int, x: Fraction) -> int | None:
    """
    Return ``j >= 0`` with ``base^j == x`` exactly, or `None` if there is none.
    """
    if x.denominator != 1 or x < 1:
        return None
    value = x.numerator
    j = 0
    while value % base == 0:
        value //= base
        j += 1
    return j if value == 1 else None


def bracket_exponent(base: int, x: Fraction) -> tuple[int, bool]:
    """
    For ``x >= 1``, return ``(j, exact)`` where ``base^j <= x < base^(j+1)`` and
    ``exact`` says whether ``x == base^j``.
    """
    if x < 1:
        raise ValueError(f"Cannot bracket {x} below 1")
    j = 0
    power = 1
    while power * base <= x:
        power *= base
        j += 1
    return j, power == x


def pi_grid(params: GridParams, x: Point) -> Point:
    """
    Map a grid-aligned point of the stretched grid to the uniform unit grid.

    :raises NotGridAlignedError: If some coordinate is not ``K_i^a`` with
        ``0 <= a <= m - 1``.
    """
    if len(x) != params.d:
        raise GridIndexError(f"Point has {len(x)} coordinates, expected {params.d}")
    out: list[Fraction] = []
    for axis, (k, c) in enumerate(zip(params.K, x)):
        a = exact_exponent(k, c)
        if a is None or a >= params.m:
            raise NotGridAlignedError(f"Coordinate {c} on axis {axis + 1} is not a grid power of {k}")
        out.append(Fraction(a, params.m - 1))
    return tuple(out)


def unit_exponent(params: GridParams, u: ScalarLike) -> int:
    """
    Return the integer ``j`` with ``u == j/(m-1)``.

    :raises NotGridAlignedError: If ``u`` is not a multiple of ``1/(m-1)``.
    """
    scaled = as_scalar(u) * (params.m - 1)
    if scaled.denominator != 1:
        raise NotGridAlignedError(f"Unit coordinate {u} is not a multiple of 1/{params.m - 1}")
    return scaled.numerator


def pi_inv(params: GridParams, u: Point) -> Point:
    """
    Map grid-aligned unit coordinates ``j_i/(m-1)`` back to ``K_i^(j_i)``. Exponents
    outside ``0..m-1`` are allowed; negative ones give proper fractions.
    """
    if len(u) != params.d:
        raise GridIndexError(f"Point has {len(u)} coordinates, expected {params.d}")
    return tuple(Fraction(k) ** unit_exponent(params, c) for k, c in zip(params.K, u))


def close_axes(params: GridParams, x: Point, y: Point, c: ScalarLike) -> tuple[bool, ...]:
    """
    For each axis, decide whether ``|pi(x)_i - pi(y)_i| <= c/(m-1)``. With
    ``c = p/q`` this is ``(max/min)^q <= K_i^p``, so the test is exact for any
    positive rational coordinates.
    """
    cc = as_scalar(c)
    if cc < 0:
        raise ValueError(f"Closeness parameter must be non-negative (got {cc})")
    if len(x) != params.d or len(y) != params.d:
        raise GridIndexError("Points must have one coordinate per grid axis")
    result: list[bool] = []
    for k, xi, yi in zip(params.K, x, y):
        if xi <= 0 or yi <= 0:
            raise ValueError(f"Closeness is only defined for positive coordinates ({xi}, {yi})")
        ratio = max(xi, yi) / min(xi, yi)
        result.append(ratio**cc.denominator <= Fraction(k) ** cc.numerator)
    return tuple(result)


def c_close(params: GridParams, x: Point, y: Point, c: ScalarLike) -> bool:
    """``x`` and ``y`` are c-close if they are c-close in every coordinate"""
    return all(close_axes(params, x, y, c))


def c_far(params: GridParams, x: Point, y: Point, c: ScalarLike) -> bool:
    """``x`` and ``y`` are c-far if they are c-far in every coordinate"""
    return not any(close_axes(params, x, y, c))


def layer_crossing(params: GridParams, a: Sequence[int], b: Sequence[int]) -> Point:
    """
    Intersect the segment between the grid points of ``a`` (on layer 0) and ``b``
    (on layer ``i >= 1``) with the horizontal hyperplane through layer ``i - 1``.
    """
    check_index(params, a)
    check_index(params, b)
    if a[-1] != 0 or b[-1] < 1:
        raise GridIndexError(f"Expected a on layer 0 and b above it [{tuple(a)=}, {tuple(b)=}]")
    pa = grid_point(params, a)
    pb = grid_point(params, b)
    height = Fraction(params.K[-1] ** (b[-1] - 1))
    t = (height - pa[-1]) / (pb[-1] - pa[-1])
    return tuple(s + t * (e - s) for s, e in zip(pa, pb))


def crossing_stays_close(params: GridParams, a: Sequence[int], b: Sequence[int]) -> bool:
    """
    Check that the segment from a layer-0 grid point to a grid point on layer
    ``i`` crosses layer ``i - 1`` within unit distance of the lower endpoint in
    every horizontal coordinate.
    """
    crossing = layer_crossing(params, a, b)
    start = grid_point(params, a)
    return all(abs(c - s) <= 1 for c, s in zip(crossing[:-1], start[:-1]))


@lazygen
def layer_pairs(params: GridParams) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Yield every (layer 0, higher layer) pair of grid indices"""
    for a in indices(params):
        if a[-1] != 0:
            continue
        for b in indices(params):
            if b[-1] >= 1:
                yield a, b
