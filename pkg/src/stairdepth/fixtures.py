"""
Hand-built stair-flats with known coverings, shared by the tests and the
command-line tool.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .flats import Diagonal, FullSpace, HalfStairFlat, Horizontal, PointFlat, StairFlat, Vertical, complete_flat
from .stair import StairHalfspace

F = Fraction
Q1 = F(1, 4)
HALF = F(1, 2)
Q3 = F(3, 4)


def planar_corner() -> Diagonal:
    """
    The stair-line ``{x = 3/4, y <= 3/4} ∪ {x <= 3/4, y = 3/4}`` in the plane: a
    vertical ray rising to the corner ``(3/4, 3/4)`` and a horizontal ray leaving
    it to the left.
    """
    cut = PointFlat((Q3,))
    ray = HalfStairFlat(FullSpace(1), cut, ((F(0),),))
    return Diagonal(cut, ray, Q3)


def worked_line() -> Diagonal:
    """
    A stair-line in ``R^3``: the vertical ray below ``(1/4, 3/4, 1/2)`` joined to
    the half of `planar_corner` that runs right from ``(1/4, 3/4)`` and then down,
    lifted to height ``1/2``.
    """
    corner = planar_corner()
    start = PointFlat((Q1, Q3))
    half = HalfStairFlat(corner, start, ((Q3, Q1),))
    return Diagonal(start, half, HALF)


def worked_line_family() -> tuple[StairHalfspace, ...]:
    """The covering family of `worked_line`, member by member"""
    a = (Q1, Q3, HALF)
    b = (Q3, Q3, HALF)
    return (
        StairHalfspace(a, frozenset({0, 3})),
        StairHalfspace(a, frozenset({1})),
        StairHalfspace(a, frozenset({2, 3})),
        StairHalfspace(b, frozenset({0})),
        StairHalfspace(b, frozenset({1, 2})),
    )


def plane_in_r4() -> Diagonal:
    """
    A stair-plane in ``R^4`` with `worked_line` as its boundary: the upper half
    of the vertical completion of the line, lifted to height ``1/2``.
    """
    line = worked_line()
    carrier = complete_flat(line)
    half = HalfStairFlat(carrier, line, ((Q3, Q3, F(3, 2)),))
    return Diagonal(line, half, HALF)


def spatial_plane() -> Diagonal:
    """
    A stair-plane in ``R^3`` whose boundary is `planar_corner` with its corner at
    ``(1/2, 1/2)`` and whose half is the closed lower-left quadrant.
    """
    cut = PointFlat((HALF,))
    corner = Diagonal(cut, HalfStairFlat(FullSpace(1), cut, ((F(0),),)), HALF)
    quadrant = HalfStairFlat(FullSpace(2), corner, ((F(0), F(0)),))
    return Diagonal(corner, quadrant, Q1)


def corner_cylinder() -> Vertical:
    """The stair-plane in ``R^3`` swept by `planar_corner` along the last axis"""
    return Vertical(planar_corner())


def lifted_corner() -> Horizontal:
    return Horizontal(planar_corner(), Q1)


def planar_lines() -> list[StairFlat]:
    """One stair-line of each form in the plane"""
    return [
        Vertical(PointFlat((HALF,))),
        Horizontal(FullSpace(1), HALF),
        planar_corner(),
    ]


def spatial_flats() -> list[StairFlat]:
    """Stair-lines and stair-planes of each form in ``R^3``"""
    return [
        worked_line(),
        corner_cylinder(),
        lifted_corner(),
        Horizontal(FullSpace(2), HALF),
        Vertical(Vertical(PointFlat((HALF,)))),
        spatial_plane(),
    ]


FIXTURES: dict[str, Callable[[], StairFlat]] = {
    "fig6": planar_corner,
    "fig7": spatial_plane,
    "fig7-horizontal": lifted_corner,
    "fig7-vertical": corner_cylinder,
    "fig8": plane_in_r4,
    "fig9": worked_line,
    "planar-corner": planar_corner,
    "plane-r4": plane_in_r4,
    "spatial-plane": spatial_plane,
    "worked-line": worked_line,
}
