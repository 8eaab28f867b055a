from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Protocol, Sequence

from .util import Point


class IRegion(Protocol):
    """
    Abstract interface for closed regions of ``R^d`` that the exact cell machinery
    can reason about.

    A region is described by a finite set of breakpoints per axis. Membership must
    be constant on every open cell of the grid spanned by those breakpoints, which
    is what makes a finite set of cell representatives an exact certificate.

    .. seealso:: :class:`stairdepth.stair.StairHalfspace`, :class:`stairdepth.flats.Cylinder`
    """

    @property
    def dimension(self) -> int:
        """The ambient dimension ``d`` of the region"""
        ...

    def contains(self, x: Point, /) -> bool:
        """
        Return `True` iff the closed region contains the point ``x``.
        """
        ...

    def breakpoints(self, axis: int, /) -> Iterable[Fraction]:
        """
        Return the coordinates along ``axis`` (zero-based) at which membership may
        change.
        """
        ...


def common_dimension(regions: Sequence[IRegion], default: int | None = None) -> int:
    """
    Return the dimension shared by all of the given regions. If there are no
    regions, ``default`` is returned (and must be given).
    """
    dims = {r.dimension for r in regions}
    if not dims:
        if default is None:
            raise ValueError("Cannot infer a dimension from an empty set of regions")
        return default
    if len(dims) != 1 or (default is not None and default not in dims):
        raise ValueError(f"Regions have inconsistent dimensions: {sorted(dims)}")
    return dims.pop()


def joint_breakpoints(regions: Iterable[IRegion], dimension: int) -> list[set[Fraction]]:
    """
    Collect the breakpoints of every region, one set per axis.
    """
    axes: list[set[Fraction]] = [set() for _ in range(dimension)]
    for r in regions:
        for ax in range(dimension):
            axes[ax].update(r.breakpoints(ax))
    return axes
