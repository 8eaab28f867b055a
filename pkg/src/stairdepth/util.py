"""
Small helpers shared by the rest of the package: lazy generators, ordering
helpers and the exact scalar/point conversions every module relies on.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Callable, Generic, Iterable, Iterator, Sequence, TypeVar

from typing_extensions import ParamSpec, TypeAlias

T = TypeVar("T")
"""Generic invariant unbounded type parameter"""
Ps = ParamSpec("Ps")
"""Generic parameter spec type parameter"""

Point: TypeAlias = "tuple[Fraction, ...]"
"""A point of ``R^d`` as a tuple of exact scalars."""

ScalarLike: TypeAlias = "Fraction | int | str"
"""Values accepted wherever an exact scalar is expected"""


def lazygen(fn: Callable[Ps, Iterator[T]]) -> Callable[Ps, Iterable[T]]:
    """
    Annotate a function that returns an iterator to become a function that returns
    an iterable. The underlying function is only called when the ``__iter__`` is
    called on the returned iterable.

    This allows functions returning iterators (such as generators) to be iterated
    repeatedly, and they always "start from the beginning" when iterated.
    """

    @functools.wraps(fn)
    def _wrapped(*args: Ps.args, **kwargs: Ps.kwargs) -> Iterable[T]:
        return _LazyGen(fn, *args, **kwargs)

    return _wrapped


class _LazyGen(Generic[T, Ps]):
    def __init__(self, __fn: Callable[Ps, Iterator[T]], /, *args: Ps.args, **kwargs: Ps.kwargs):
        self._fn = __fn
        self._args = args
        self._kwargs = kwargs

    def __iter__(self) -> Iterator[T]:
        return self._fn(*self._args, **self._kwargs)


def minmax(left: T, right: T, /, *, key: Callable[[T], Fraction]) -> tuple[T, T]:
    """
    Return ``left`` and ``right`` ordered by ``key``, lesser first. Ties keep the
    given order.
    """
    if key(right) < key(left):
        return right, left
    return left, right


def as_scalar(value: ScalarLike) -> Fraction:
    """
    Convert an exact scalar-like value into a `Fraction`. Accepts fractions,
    integers, and strings such as ``"3/4"`` or ``"-2"``. Floats and booleans
    are rejected: nothing in this package is allowed to be inexact.
    """
    if isinstance(value, bool):
        raise ValueError("bool is not a numeric scalar")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"unsupported scalar type: {type(value)}")


def as_point(values: Iterable[ScalarLike]) -> Point:
    """Convert an iterable of scalar-like values into a `Point`"""
    return tuple(as_scalar(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    """Exact inner product of two equal-length vectors"""
    assert len(u) == len(v), f"Inner product of vectors of different lengths [{u=}, {v=}]"
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Point:
    """Component-wise difference ``u - v``"""
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Point:
    """Component-wise sum ``u + v``"""
    return tuple(a + b for a, b in zip(u, v))


def scale(c: Fraction, v: Sequence[Fraction]) -> Point:
    return tuple(c * a for a in v)


def midpoint(a: Fraction, b: Fraction) -> Fraction:
    return (a + b) / 2
