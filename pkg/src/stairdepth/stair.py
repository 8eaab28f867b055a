"""
Stair-convexity primitives: point types with respect to a vertex, the components
``C_i(a)``, stair-halfspaces, stair-paths, outward translation, and the exact
cover/volume checks built on cell decompositions.

Axes are zero-based in code. The component index ``i`` of ``C_i(a)`` keeps its
mathematical meaning: ``C_i`` for ``i >= 1`` is bounded below on axis ``i - 1``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .cells import CellDecomposition
from .interfaces import IRegion, common_dimension
from .interval import AxisBox, Interval
from .report import Logger
from .util import Point, ScalarLike, as_point, as_scalar, lazygen, minmax


class DimensionMismatchError(ValueError):
    """
    Exception raised when points or regions of different dimensions are combined.
    """


class InvalidIndexSetError(ValueError):
    """
    Exception raised when a stair-halfspace index set is empty, is all of
    ``{0, ..., d}``, or names an index out of range.
    """


class OutwardTranslationError(ValueError):
    """
    Exception raised when a requested outward translation moves the vertex the
    wrong way along some axis.
    """


class GapTooLargeError(ValueError):
    """
    Exception raised when a boundary-test gap is not strictly smaller than every
    nonzero coordinate distance to a breakpoint.
    """


def _check_dims(a: Sequence[object], b: Sequence[object]) -> int:
    if len(a) != len(b):
        raise DimensionMismatchError(f"Dimension mismatch: {len(a)} and {len(b)}")
    if not a:
        raise DimensionMismatchError("Points must have at least one coordinate")
    return len(a)


def type_set(a: Point, b: Point) -> frozenset[int]:
    """
    Return the set of types ``j`` such that ``b`` lies in ``C_j(a)``. The result is
    never empty; it has more than one element only when ``b`` shares some
    coordinate with ``a``.
    """
    d = _check_dims(a, b)
    types: set[int] = set()
    if all(b[i] <= a[i] for i in range(d)):
        types.add(0)
    for j in range(1, d + 1):
        if b[j - 1] >= a[j - 1] and all(b[i] <= a[i] for i in range(j, d)):
            types.add(j)
    assert types, f"Point has no type. This is a BUG. [{a=}, {b=}]"
    return frozenset(types)


def component_box(a: Point, i: int) -> AxisBox:
    """
    Return the component ``C_i(a)`` as an axis box.

    :param a: The vertex.
    :param i: The component index, ``0 <= i <= d``.
    """
    d = len(a)
    if not 0 <= i <= d:
        raise InvalidIndexSetError(f"Component index {i} is out of range for d={d}")
    if i == 0:
        return AxisBox(tuple(Interval(None, c) for c in a))
    sides = [Interval() for _ in range(i - 1)]
    sides.append(Interval(a[i - 1], None))
    sides.extend(Interval(None, c) for c in a[i:])
    return AxisBox(tuple(sides))


@dataclass(frozen=True)
class StairHalfspace:
    """
    The union of the components ``C_i(vertex)`` for ``i`` in ``index_set``.

    Use `StairHalfspace.of` to build one from loosely typed values.
    """

    vertex: Point
    index_set: frozenset[int]

    def __post_init__(self) -> None:
        d = len(self.vertex)
        if d < 1:
            raise DimensionMismatchError("A stair-halfspace needs a vertex with at least one coordinate")
        if not self.index_set:
            raise InvalidIndexSetError("Index set must not be empty")
        if not self.index_set.issubset(range(d + 1)):
            raise InvalidIndexSetError(f"Index set {sorted(self.index_set)} is not a subset of 0..{d}")
        if len(self.index_set) == d + 1:
            raise InvalidIndexSetError(f"Index set must be a proper subset of 0..{d}")

    @staticmethod
    def of(vertex: Iterable[ScalarLike], index_set: Iterable[int]) -> StairHalfspace:
        return StairHalfspace(as_point(vertex), frozenset(index_set))

    @property
    def dimension(self) -> int:
        return len(self.vertex)

    def contains(self, x: Point) -> bool:
        """`True` iff some type of ``x`` with respect to the vertex is in the index set"""
        return not self.index_set.isdisjoint(type_set(self.vertex, x))

    def breakpoints(self, axis: int) -> Iterable[Fraction]:
        return (self.vertex[axis],)

    def components(self) -> Sequence[AxisBox]:
        """The component boxes making up this stair-halfspace, in index order"""
        return [component_box(self.vertex, i) for i in sorted(self.index_set)]

    def boxes(self) -> Sequence[AxisBox]:
        return self.components()

    def complement(self) -> StairHalfspace:
        """
        The closure of the complement: the stair-halfspace with the same vertex and
        the complementary index set.
        """
        rest = frozenset(range(self.dimension + 1)) - self.index_set
        return StairHalfspace(self.vertex, rest)

    def with_vertex(self, vertex: Point) -> StairHalfspace:
        """Return the combinatorially equivalent stair-halfspace with the given vertex"""
        _check_dims(self.vertex, vertex)
        return StairHalfspace(vertex, self.index_set)

    def __str__(self) -> str:
        comps = "∪".join(f"C{i}" for i in sorted(self.index_set))
        return f"{comps}({', '.join(map(str, self.vertex))})"


def equivalent(a: StairHalfspace, b: StairHalfspace) -> bool:
    """Two stair-halfspaces are combinatorially equivalent if they share an index set"""
    return a.dimension == b.dimension and a.index_set == b.index_set


def multiplicity_at(family: Iterable[IRegion], x: Point) -> int:
    """Count the members of ``family`` that contain ``x``"""
    return sum(1 for member in family if member.contains(x))


def boundary_contains(region: IRegion, x: Point, gap: ScalarLike | None = None) -> bool:
    """
    Decide whether ``x`` lies on the boundary of a closed region: ``x`` is in the
    region and some perturbation of ``x`` by ``-gap``, ``0`` or ``+gap`` per axis
    leaves it.

    :param gap: The perturbation size. Must be strictly smaller than every nonzero
        distance between a coordinate of ``x`` and a breakpoint on the same axis.
        If omitted, half of the smallest such distance is used.
    :raises GapTooLargeError: If ``gap`` is not small enough.
    """
    if len(x) != region.dimension:
        raise DimensionMismatchError(f"Point has dimension {len(x)}, region has {region.dimension}")
    if not region.contains(x):
        return False
    dists = [abs(c - b) for ax, c in enumerate(x) for b in region.breakpoints(ax) if b != c]
    limit = min(dists, default=None)
    if gap is None:
        step = Fraction(1) if limit is None else limit / 2
    else:
        step = as_scalar(gap)
        if step <= 0 or (limit is not None and step >= limit):
            raise GapTooLargeError(f"Gap {step} must be positive and below {limit}")
    for offsets in itertools.product((-step, Fraction(0), step), repeat=len(x)):
        if not region.contains(tuple(c + o for c, o in zip(x, offsets))):
            return True
    return False


def contains_region(outer: IRegion, inner: IRegion) -> bool:
    """
    Exact subset test ``inner ⊆ outer`` for closed regions, by checking every open
    cell of their joint decomposition.
    """
    d = common_dimension([outer, inner])
    decomp = CellDecomposition.of_regions([outer, inner], d)
    return all(outer.contains(c.representative) for c in decomp.cells() if inner.contains(c.representative))


def translate_outwards(h: StairHalfspace, b: Point) -> StairHalfspace:
    """
    Move the vertex of ``h`` to ``b``, keeping the index set. ``b`` must lie below
    the vertex on every axis whose component is in the index set, and above it on
    every other axis. The result contains ``h``.

    :raises OutwardTranslationError: If ``b`` violates that condition on any axis.
    """
    _check_dims(h.vertex, b)
    for ax, (old, new) in enumerate(zip(h.vertex, b)):
        inward = (ax + 1) in h.index_set
        if inward and not new < old:
            raise OutwardTranslationError(f"Axis {ax + 1}: new vertex coordinate {new} must be below {old}")
        if not inward and not new > old:
            raise OutwardTranslationError(f"Axis {ax + 1}: new vertex coordinate {new} must be above {old}")
    moved = h.with_vertex(b)
    assert contains_region(moved, h), f"Outward translation lost containment. This is a BUG. [{h=}, {b=}]"
    return moved


def expand_outwards(h: StairHalfspace, delta: ScalarLike) -> StairHalfspace:
    """
    Move the vertex of ``h`` outwards by ``delta`` on every axis. The result
    contains every point within sup-distance less than ``delta`` of ``h``.
    """
    step = as_scalar(delta)
    if step <= 0:
        raise OutwardTranslationError(f"Expansion step must be positive (got {step})")
    vertex = tuple(c - step if (ax + 1) in h.index_set else c + step for ax, c in enumerate(h.vertex))
    return translate_outwards(h, vertex)


@dataclass(frozen=True)
class CoverCertificate:
    """
    The outcome of an exact multiplicity check over the open cells of a
    decomposition.
    """

    ok: bool
    delta: int
    cells_checked: int
    violation: Point | None = None
    """A representative of the first cell whose multiplicity differs from ``delta``"""
    observed: int | None = None
    """The multiplicity found at ``violation``"""


def verify_cover(
    family: Sequence[IRegion],
    delta: int,
    clip: AxisBox | None = None,
    *,
    dimension: int | None = None,
    log: Logger = Logger(),
) -> CoverCertificate:
    """
    Check that every open cell of the joint decomposition of ``family`` (restricted
    to ``clip``, if given) is covered exactly ``delta`` times. Boundary points are
    never tested.

    :param dimension: Required when ``family`` is empty and no clip box is given.
    """
    d = common_dimension(family, clip.dimension if clip is not None else dimension)
    decomp = CellDecomposition.of_regions(family, d, clip)
    checked = 0
    for cell in decomp.cells():
        if cell.rank != d:
            continue
        checked += 1
        rep = cell.representative
        mult = multiplicity_at(family, rep)
        if mult != delta:
            log.on_violation(rep, mult, delta)
            return CoverCertificate(False, delta, checked, rep, mult)
    log.on_cover(len(family), delta, checked)
    return CoverCertificate(True, delta, checked)


def volume_in_box(region: IRegion, box: AxisBox) -> Fraction:
    """The exact volume of ``region ∩ box``. The box must be bounded."""
    if not box.is_bounded:
        raise ValueError(f"Cannot measure a region inside an unbounded box {box}")
    decomp = CellDecomposition.of_regions([region], box.dimension, box)
    total = Fraction(0)
    for cell in decomp.cells():
        vol = cell.volume()
        assert vol is not None, cell
        if vol and region.contains(cell.representative):
            total += vol
    return total


def volume_in_unit_cube(region: IRegion) -> Fraction:
    """The exact volume of ``region ∩ [0, 1]^d``"""
    return volume_in_box(region, AxisBox.unit(region.dimension))


class SliceKind(enum.Enum):
    EMPTY = "empty"
    FULL = "full"


Slice = Union[StairHalfspace, SliceKind]
"""A horizontal slice: empty, all of ``R^(d-1)``, or a stair-halfspace"""


def horizontal_slice(h: StairHalfspace, height: Fraction) -> Slice:
    """
    Return the slice ``{x' : (x', height) ∈ h}`` of ``h``, projected to ``R^(d-1)``.
    """
    d = h.dimension
    top = h.vertex[-1]
    if d == 1:
        return SliceKind.FULL if h.contains((height,)) else SliceKind.EMPTY
    if d in h.index_set and height >= top:
        return SliceKind.FULL
    if height > top:
        return SliceKind.EMPTY
    lower = h.index_set - {d}
    if not lower:
        return SliceKind.EMPTY
    if len(lower) == d:
        return SliceKind.FULL
    return StairHalfspace(h.vertex[:-1], lower)


def _slice_subset(inner: Slice, outer: Slice) -> bool:
    if inner is SliceKind.EMPTY or outer is SliceKind.FULL:
        return True
    if inner is SliceKind.FULL or outer is SliceKind.EMPTY:
        return False
    assert isinstance(inner, StairHalfspace) and isinstance(outer, StairHalfspace)
    return contains_region(outer, inner)


def slices_monotone(h: StairHalfspace, heights: Iterable[Fraction]) -> bool:
    """
    Check the monotonicity-of-slices criterion on a finite set of heights: for
    every ``h1 <= h2 <= h3`` whose top slice is nonempty, the slice at ``h1`` is a
    subset of the slice at ``h2``.
    """
    slices = [horizontal_slice(h, z) for z in sorted(set(heights))]
    alive = [i for i, s in enumerate(slices) if s is not SliceKind.EMPTY]
    if not alive:
        return True
    last = alive[-1]
    return all(_slice_subset(slices[i], slices[j]) for i in range(last + 1) for j in range(i, last + 1))


@dataclass(frozen=True)
class StairPath:
    """
    An axis-parallel polyline from ``start`` to ``end`` made of at most ``d``
    closed segments. A path between equal points is a single degenerate segment.
    """

    segments: tuple[tuple[Point, Point], ...]

    @property
    def start(self) -> Point:
        return self.segments[0][0]

    @property
    def end(self) -> Point:
        return self.segments[-1][1]

    def polyline(self) -> tuple[Point, ...]:
        """
        The corner points of the path, from start to end, with collinear corners
        merged.
        """
        pts: list[Point] = [self.start]
        for _, b in self.segments:
            if b == pts[-1]:
                continue
            if len(pts) >= 2 and _changed_axis(pts[-2], pts[-1]) == _changed_axis(pts[-1], b):
                pts[-1] = b
            else:
                pts.append(b)
        return tuple(pts)

    @lazygen
    def samples(self, per_segment: int = 4) -> Iterator[Point]:
        """Yield evenly spaced points along every segment, corners included"""
        for a, b in self.segments:
            for j in range(per_segment + 1):
                t = Fraction(j, per_segment)
                yield tuple(x + t * (y - x) for x, y in zip(a, b))

    def locate(self, c: Point) -> tuple[int, Fraction] | None:
        """
        Find ``c`` on the path. Returns the index of the first segment containing it
        and the position along that segment, or `None`.
        """
        for idx, (a, b) in enumerate(self.segments):
            t = _segment_param(a, b, c)
            if t is not None:
                return idx, t
        return None

    def between(self, c: Point, e: Point) -> StairPath:
        """
        Return the portion of this path that runs from ``c`` to ``e``. Both points
        must lie on the path.
        """
        pc = self.locate(c)
        pe = self.locate(e)
        if pc is None or pe is None:
            raise ValueError(f"Point is not on the path [{c=}, {e=}]")
        if pe < pc:
            rev = self.between(e, c)
            return StairPath(tuple((b, a) for a, b in reversed(rev.segments)))
        (ic, _), (ie, _) = pc, pe
        if ic == ie:
            return StairPath(((c, e),))
        segs = [(c, self.segments[ic][1])]
        segs.extend(self.segments[ic + 1 : ie])
        segs.append((self.segments[ie][0], e))
        return StairPath(_drop_degenerate(segs, c))


def _changed_axis(a: Point, b: Point) -> int | None:
    diff = [i for i, (x, y) in enumerate(zip(a, b)) if x != y]
    return diff[0] if len(diff) == 1 else None


def _segment_param(a: Point, b: Point, c: Point) -> Fraction | None:
    if a == b:
        return Fraction(0) if c == a else None
    ax = _changed_axis(a, b)
    assert ax is not None, f"Stair-path segment is not axis-parallel. This is a BUG. [{a=}, {b=}]"
    if any(c[i] != a[i] for i in range(len(a)) if i != ax):
        return None
    t = (c[ax] - a[ax]) / (b[ax] - a[ax])
    return t if 0 <= t <= 1 else None


def _drop_degenerate(segs: Iterable[tuple[Point, Point]], at: Point) -> tuple[tuple[Point, Point], ...]:
    kept = tuple(s for s in segs if s[0] != s[1])
    return kept or ((at, at),)


def _path_segments(a: Point, b: Point) -> list[tuple[Point, Point]]:
    if len(a) == 1:
        return [(a, b)]
    low, high = minmax(a, b, key=lambda p: p[-1])
    pivot = low[:-1] + (high[-1],)
    segs: list[tuple[Point, Point]] = [(low, pivot)]
    segs.extend((x + (high[-1],), y + (high[-1],)) for x, y in _path_segments(pivot[:-1], high[:-1]))
    if low is not a:
        segs = [(y, x) for x, y in reversed(segs)]
    return segs


def stair_path(a: Point, b: Point) -> StairPath:
    """
    Build the stair-path from ``a`` to ``b``: rise vertically from the lower of the
    two points to the height of the higher one, then follow the stair-path of the
    projections at that height. Zero-length segments are dropped.
    """
    _check_dims(a, b)
    return StairPath(_drop_degenerate(_path_segments(a, b), a))
