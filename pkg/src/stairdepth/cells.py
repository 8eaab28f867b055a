"""
Exact cell decompositions of ``R^d`` (or of a clip box) induced by per-axis
breakpoints.

Every region in this package is a finite union of closed axis boxes whose sides
end at breakpoints. Membership is therefore constant on each open cell, and a
single representative per cell decides it exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .interfaces import IRegion, joint_breakpoints
from .interval import AxisBox, Interval
from .util import Point, lazygen


@dataclass(frozen=True)
class Cell:
    """
    A cell (or lower-dimensional face) of a decomposition. ``box`` is its closure;
    the relatively open cell is the product of the open sides and the degenerate
    sides.
    """

    box: AxisBox

    @property
    def representative(self) -> Point:
        """A point in the relative interior of the cell"""
        return self.box.representative()

    @property
    def rank(self) -> int:
        return self.box.rank

    def volume(self) -> Fraction | None:
        return self.box.volume()


class CellDecomposition:
    """
    The arrangement of axis-orthogonal hyperplanes through the given breakpoints,
    optionally restricted to a clip box.

    :param breakpoints: One iterable of coordinates per axis.
    :param clip: If given, only the part of space inside this box is decomposed.
        Breakpoints outside the clip box are ignored, and the clip box's own
        endpoints become breakpoints.
    """

    def __init__(self, breakpoints: Sequence[Iterable[Fraction]], clip: AxisBox | None = None) -> None:
        if clip is not None and clip.dimension != len(breakpoints):
            raise ValueError(f"Clip box has dimension {clip.dimension}, expected {len(breakpoints)}")
        sides = clip.sides if clip is not None else tuple(Interval() for _ in breakpoints)
        self.__axes = tuple(_axis_breakpoints(bps, side) for bps, side in zip(breakpoints, sides))
        self.__sides = sides

    @staticmethod
    def of_regions(
        regions: Iterable[IRegion],
        dimension: int,
        clip: AxisBox | None = None,
        *,
        extra_points: Iterable[Point] = (),
    ) -> CellDecomposition:
        """
        Build the joint decomposition of several regions, optionally adding the
        coordinates of some extra points as breakpoints.
        """
        axes = joint_breakpoints(regions, dimension)
        for p in extra_points:
            for ax, c in enumerate(p):
                axes[ax].add(c)
        return CellDecomposition(axes, clip)

    @property
    def dimension(self) -> int:
        return len(self.__axes)

    @property
    def axes(self) -> tuple[tuple[Fraction, ...], ...]:
        """The sorted distinct breakpoints used on each axis"""
        return self.__axes

    def axis_pieces(self, axis: int, *, faces: bool = False) -> Sequence[Interval]:
        """
        Return the closures of the open one-dimensional cells along ``axis``. With
        ``faces=True`` the breakpoints themselves are interleaved as degenerate
        intervals.
        """
        bps = self.__axes[axis]
        side = self.__sides[axis]
        if side.is_degenerate:
            return [side]
        ends: list[Fraction | None] = [side.lo, *bps, side.hi] if bps else [side.lo, side.hi]
        # The clip endpoints are already present as breakpoints when finite
        if bps and side.lo is not None:
            ends.pop(0)
        if bps and side.hi is not None:
            ends.pop()
        pieces: list[Interval] = []
        for lo, hi in zip(ends, ends[1:]):
            if faces and lo is not None and (not pieces or pieces[-1].hi != lo):
                pieces.append(Interval.point(lo))
            pieces.append(Interval(lo, hi))
            if faces and hi is not None:
                pieces.append(Interval.point(hi))
        return pieces

    @lazygen
    def cells(self) -> Iterator[Cell]:
        """Yield every full-dimensional open cell (as its closure)"""
        per_axis = [self.axis_pieces(ax) for ax in range(self.dimension)]
        for sides in itertools.product(*per_axis):
            yield Cell(AxisBox(tuple(sides)))

    @lazygen
    def faces(self) -> Iterator[Cell]:
        """Yield every relatively open face of every dimension"""
        per_axis = [self.axis_pieces(ax, faces=True) for ax in range(self.dimension)]
        for sides in itertools.product(*per_axis):
            yield Cell(AxisBox(tuple(sides)))

    def cell_count(self) -> int:
        count = 1
        for ax in range(self.dimension):
            count *= len(self.axis_pieces(ax))
        return count


def _axis_breakpoints(bps: Iterable[Fraction], side: Interval) -> tuple[Fraction, ...]:
    kept = {b for b in bps if side.contains(b)}
    for end in (side.lo, side.hi):
        if end is not None:
            kept.add(end)
    return tuple(sorted(kept))
