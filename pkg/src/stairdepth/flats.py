"""
Stair-flats: the axis-parallel analogues of affine ``k``-flats, their halves, and
the generalized covering construction that covers space ``C(d-1, k)`` times with
stair-halfspaces containing a given stair-flat in their boundaries.

A stair-``k``-flat in ``R^d`` is a point (``k = 0``), all of space (``k = d``),
or one of three recursive forms built from flats in ``R^(d-1)``:

- `Horizontal`: ``f' x {z}``
- `Vertical`: ``f' x R``
- `Diagonal`: ``(f' x (-inf, z]) ∪ (h x {z})`` where ``h`` is a half of a
  stair-``k``-flat in ``R^(d-1)`` whose relative boundary is ``f'``

Every flat and half-flat is a finite union of closed axis boxes, so all of the
exact cell machinery applies to them.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .cells import Cell, CellDecomposition
from .covering import CoveringFamily
from .interfaces import IRegion
from .interval import AxisBox, Interval
from .report import Logger
from .stair import DimensionMismatchError, StairHalfspace, boundary_contains
from .util import Point, lazygen


class InvalidFlatError(ValueError):
    """
    Exception raised when the parts of a stair-flat or half-stair-flat do not fit
    together (wrong dimensions or orders, a boundary that does not split its
    carrier, a witness on the boundary, ...).
    """


class NotOnCarrierError(ValueError):
    """
    Exception raised when a point is expected to lie on a stair-flat but does not.
    """


class HalfClassificationError(RuntimeError):
    """
    Exception raised when a half-stair-flat meets both the interior and the
    complement of a stair-halfspace whose boundary contains the half's relative
    boundary.
    """


class PartitionInfeasibleError(RuntimeError):
    """
    Exception raised when the members covering a flat's boundary cannot be split
    into an upper part of size ``delta`` containing every member that misses the
    half-flat, and a lower part of size ``delta'`` containing every member whose
    interior meets it.
    """

    def __init__(self, counts: dict[str, int], delta: int, delta_lower: int) -> None:
        super().__init__(
            f"Cannot partition the family: a/b/c counts are {counts}, need |c| <= {delta} and |a| <= {delta_lower}"
        )
        self.counts = counts
        self.delta = delta
        self.delta_lower = delta_lower


class _BoxUnion:
    """Shared behavior of everything that is described by `boxes()`"""

    def boxes(self) -> Sequence[AxisBox]:
        raise NotImplementedError

    def breakpoints(self, axis: int) -> Iterable[Fraction]:
        ends: set[Fraction] = set()
        for box in self.boxes():
            side = box.sides[axis]
            ends.update(e for e in (side.lo, side.hi) if e is not None)
        return sorted(ends)

    @lazygen
    def samples(self) -> Iterator[Point]:
        """Yield a finite sample of points: the sample grid of every box"""
        seen: set[Point] = set()
        for box in self.boxes():
            for p in box.sample_points():
                if p not in seen:
                    seen.add(p)
                    yield p

    def anchor_points(self) -> tuple[Point, ...]:
        """One relative-interior point per box"""
        return tuple(box.representative() for box in self.boxes())


@dataclass(frozen=True)
class PointFlat(_BoxUnion):
    """A stair-0-flat: a single point"""

    point: Point

    @property
    def dimension(self) -> int:
        return len(self.point)

    @property
    def order(self) -> int:
        return 0

    def contains(self, x: Point) -> bool:
        _check_point(self, x)
        return tuple(x) == self.point

    def boxes(self) -> Sequence[AxisBox]:
        return [AxisBox.at_point(self.point)]


@dataclass(frozen=True)
class FullSpace(_BoxUnion):
    """A stair-d-flat: all of ``R^d``"""

    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise InvalidFlatError(f"FullSpace needs d >= 1 (got {self.d})")

    @property
    def dimension(self) -> int:
        return self.d

    @property
    def order(self) -> int:
        return self.d

    def contains(self, x: Point) -> bool:
        _check_point(self, x)
        return True

    def boxes(self) -> Sequence[AxisBox]:
        return [AxisBox.full(self.d)]


@dataclass(frozen=True)
class Horizontal(_BoxUnion):
    """``base x {z}``"""

    base: StairFlat
    z: Fraction

    def __post_init__(self) -> None:
        if self.base.order < 1:
            raise InvalidFlatError("A horizontal stair-flat needs a base of order at least 1")

    @property
    def dimension(self) -> int:
        return self.base.dimension + 1

    @property
    def order(self) -> int:
        return self.base.order

    def contains(self, x: Point) -> bool:
        _check_point(self, x)
        return x[-1] == self.z and self.base.contains(x[:-1])

    def boxes(self) -> Sequence[AxisBox]:
        return [b.extend(Interval.point(self.z)) for b in self.base.boxes()]


@dataclass(frozen=True)
class Vertical(_BoxUnion):
    """``base x R``"""

    base: StairFlat

    def __post_init__(self) -> None:
        if self.base.order >= self.base.dimension:
            raise InvalidFlatError("A vertical stair-flat over all of space is all of space; use FullSpace")

    @property
    def dimension(self) -> int:
        return self.base.dimension + 1

    @property
    def order(self) -> int:
        return self.base.order + 1

    def contains(self, x: Point) -> bool:
        _check_point(self, x)
        return self.base.contains(x[:-1])

    def boxes(self) -> Sequence[AxisBox]:
        return [b.extend(Interval()) for b in self.base.boxes()]


@dataclass(frozen=True)
class Diagonal(_BoxUnion):
    """
    ``(boundary x (-inf, z]) ∪ (half x {z})``. The first part is the vertical part
    of the flat and the second is its horizontal part.
    """

    boundary: StairFlat
    half: HalfStairFlat
    z: Fraction

    def __post_init__(self) -> None:
        if self.half.boundary != self.boundary:
            raise InvalidFlatError("The boundary of a diagonal stair-flat must be the relative boundary of its half")

    @property
    def dimension(self) -> int:
        return self.boundary.dimension + 1

    @property
    def order(self) -> int:
        return self.half.order

    def contains(self, x: Point) -> bool:
        _check_point(self, x)
        head, t = x[:-1], x[-1]
        if t <= self.z and self.boundary.contains(head):
            return True
        return t == self.z and self.half.contains(head)

    def boxes(self) -> Sequence[AxisBox]:
        lower = [b.extend(Interval(None, self.z)) for b in self.boundary.boxes()]
        return lower + [b.extend(Interval.point(self.z)) for b in self.half.boxes()]


StairFlat = Union[PointFlat, FullSpace, Horizontal, Vertical, Diagonal]


def _check_point(flat: IRegion, x: Point) -> None:
    if len(x) != flat.dimension:
        raise DimensionMismatchError(f"Point has dimension {len(x)}, flat has {flat.dimension}")


def _in_relative_interior(box: AxisBox, x: Point) -> bool:
    return all(s.lo == c if s.is_degenerate else s.contains_strictly(c) for s, c in zip(box.sides, x))


def _split_components(carrier: StairFlat, boundary: StairFlat) -> list[list[Cell]]:
    """
    Group the relatively open faces of ``carrier ∖ boundary`` into connected
    components. Two faces touch when one lies in the closure of the other.
    """
    decomp = CellDecomposition.of_regions([carrier, boundary], carrier.dimension)
    kept = [
        face
        for face in decomp.faces()
        if carrier.contains(face.representative) and not boundary.contains(face.representative)
    ]
    parent = list(range(len(kept)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(kept)), 2):
        if kept[i].box.covers(kept[j].box) or kept[j].box.covers(kept[i].box):
            parent[find(i)] = find(j)
    groups: dict[int, list[Cell]] = {}
    for i, face in enumerate(kept):
        groups.setdefault(find(i), []).append(face)
    return list(groups.values())


@dataclass(frozen=True)
class HalfStairFlat(_BoxUnion):
    """
    One of the two relatively closed halves into which a stair-``(k-1)``-flat
    (``boundary``) splits a stair-``k``-flat (``carrier``). The half is selected by
    witness points lying in it but not on the boundary.
    """

    carrier: StairFlat
    boundary: StairFlat
    witnesses: tuple[Point, ...]
    _boxes: tuple[AxisBox, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.carrier.dimension != self.boundary.dimension:
            raise InvalidFlatError("Carrier and boundary of a half-flat live in different dimensions")
        if self.boundary.order != self.carrier.order - 1:
            raise InvalidFlatError(
                f"Boundary of order {self.boundary.order} cannot split a carrier of order {self.carrier.order}"
            )
        outside = next((x for x in self.boundary.samples() if not self.carrier.contains(x)), None)
        if outside is not None:
            raise InvalidFlatError(f"Boundary point {outside} is not on the carrier")
        if not self.witnesses:
            raise InvalidFlatError("A half-flat needs at least one witness")
        comps = _split_components(self.carrier, self.boundary)
        if len(comps) != 2:
            raise InvalidFlatError(f"Boundary splits the carrier into {len(comps)} pieces, expected 2")
        chosen: set[int] = set()
        for w in self.witnesses:
            if not self.carrier.contains(w):
                raise NotOnCarrierError(f"Witness {w} is not on the carrier")
            if self.boundary.contains(w):
                raise InvalidFlatError(f"Witness {w} lies on the boundary")
            chosen.update(i for i, comp in enumerate(comps) if any(_in_relative_interior(f.box, w) for f in comp))
        if len(chosen) != 1:
            raise InvalidFlatError("Witnesses disagree about the chosen half")
        comp = comps[chosen.pop()]
        k = self.carrier.order
        object.__setattr__(self, "_boxes", tuple(f.box for f in comp if f.rank == k))

    @staticmethod
    def sides(carrier: StairFlat, boundary: StairFlat) -> tuple[HalfStairFlat, HalfStairFlat]:
        """Return both halves of ``carrier`` cut along ``boundary``"""
        comps = _split_components(carrier, boundary)
        if len(comps) != 2:
            raise InvalidFlatError(f"Boundary splits the carrier into {len(comps)} pieces, expected 2")
        k = carrier.order
        first, second = (next(f.representative for f in comp if f.rank == k) for comp in comps)
        return HalfStairFlat(carrier, boundary, (first,)), HalfStairFlat(carrier, boundary, (second,))

    @property
    def dimension(self) -> int:
        return self.carrier.dimension

    @property
    def order(self) -> int:
        return self.carrier.order

    def contains(self, x: Point) -> bool:
        _check_point(self, x)
        return any(b.contains(x) for b in self._boxes)

    def boxes(self) -> Sequence[AxisBox]:
        return self._boxes


def flat_contains(f: StairFlat, x: Point) -> bool:
    return f.contains(x)


def half_contains(h: HalfStairFlat, x: Point) -> bool:
    """
    Decide whether a point of the carrier lies on the chosen half.

    :raises NotOnCarrierError: If ``x`` is not on the carrier.
    """
    if not h.carrier.contains(x):
        raise NotOnCarrierError(f"{x} is not on the carrier of the half-flat")
    return h.contains(x)


def _vertical(base: StairFlat) -> StairFlat:
    if isinstance(base, FullSpace):
        return FullSpace(base.d + 1)
    return Vertical(base)


def complete_flat(f: StairFlat) -> StairFlat:
    """
    Return a stair-flat of one higher order that contains ``f``, obtained by
    sweeping (part of) ``f`` vertically.
    """
    if isinstance(f, FullSpace):
        raise InvalidFlatError("All of space cannot be completed further")
    if isinstance(f, PointFlat):
        if f.dimension == 1:
            return FullSpace(1)
        return Vertical(PointFlat(f.point[:-1]))
    if isinstance(f, Vertical):
        return _vertical(complete_flat(f.base))
    if isinstance(f, Horizontal):
        return _vertical(f.base)
    return _vertical(f.half.carrier)


@dataclass(frozen=True)
class Cylinder:
    """``base x R`` for a region ``base`` of one lower dimension"""

    base: IRegion

    @property
    def dimension(self) -> int:
        return self.base.dimension + 1

    def contains(self, x: Point) -> bool:
        return self.base.contains(x[:-1])

    def breakpoints(self, axis: int) -> Iterable[Fraction]:
        return () if axis == self.base.dimension else self.base.breakpoints(axis)

    def __str__(self) -> str:
        return f"({self.base}) x R"


@dataclass(frozen=True)
class Extrusion:
    """
    ``base x (-inf, z]``, united with the upper slab ``x_d >= z`` when ``upper``
    is set.
    """

    base: IRegion
    z: Fraction
    upper: bool = False

    @property
    def dimension(self) -> int:
        return self.base.dimension + 1

    def contains(self, x: Point) -> bool:
        t = x[-1]
        if self.upper and t >= self.z:
            return True
        return t <= self.z and self.base.contains(x[:-1])

    def breakpoints(self, axis: int) -> Iterable[Fraction]:
        return (self.z,) if axis == self.base.dimension else self.base.breakpoints(axis)

    def __str__(self) -> str:
        slab = " ∪ upper slab" if self.upper else ""
        return f"({self.base}) x (-∞, {self.z}]{slab}"


def extrude(region: IRegion, z: Fraction, *, upper: bool = False) -> IRegion:
    """
    Extrude ``region`` down from height ``z``, optionally adding the upper slab.
    A stair-halfspace stays a stair-halfspace: extrusion keeps its index set and
    the slab adds index ``d``.
    """
    if isinstance(region, StairHalfspace):
        d = region.dimension + 1
        indices = region.index_set | {d} if upper else region.index_set
        return StairHalfspace(region.vertex + (z,), frozenset(indices))
    return Extrusion(region, z, upper)


@dataclass(frozen=True)
class GammaDelta:
    """
    The size ``gamma`` of the covering family of a stair-``k``-flat in ``R^d`` and
    the multiplicity ``delta`` with which it covers space.
    """

    k: int
    d: int
    gamma: int
    delta: int


def gamma_delta(k: int, d: int) -> GammaDelta:
    if d < 1 or not 0 <= k <= d:
        raise ValueError(f"Need 0 <= k <= d and d >= 1 (got k={k}, d={d})")
    delta = math.comb(d - 1, k)
    numer = delta * (d + k + 1)
    assert numer % (k + 1) == 0, f"Family size is not an integer. This is a BUG. [{k=}, {d=}]"
    return GammaDelta(k, d, numer // (k + 1), delta)


def gamma_delta_identities_hold(k: int, d: int) -> bool:
    """
    Check the recursion identities ``Γ = Γ' + Γ''``, ``Δ = Δ' + Δ''`` and
    ``Γ' = Δ + Δ'`` for ``1 <= k < d``.
    """
    full = gamma_delta(k, d)
    lower = gamma_delta(k - 1, d - 1)
    side = gamma_delta(k, d - 1)
    return (
        full.gamma == lower.gamma + side.gamma
        and full.delta == lower.delta + side.delta
        and lower.gamma == full.delta + lower.delta
    )


HALF_INTERIOR = "a"
HALF_BOUNDARY = "b"
HALF_OUTSIDE = "c"


def classify_half(h: HalfStairFlat, member: IRegion, *, log: Logger = Logger()) -> str:
    """
    Classify a half-stair-flat against a region whose boundary contains the
    half's relative boundary: ``"a"`` if the half meets the interior, ``"c"`` if
    it leaves the region, ``"b"`` if it lies in the boundary.

    :raises HalfClassificationError: If the half meets both the interior and the
        complement.
    """
    if member.dimension != h.dimension:
        raise DimensionMismatchError(f"Region has dimension {member.dimension}, half-flat has {h.dimension}")
    decomp = CellDecomposition.of_regions([member, h], h.dimension)
    interior = outside = False
    for face in decomp.faces():
        if face.rank != h.order:
            continue
        rep = face.representative
        if not h.contains(rep):
            continue
        if not member.contains(rep):
            outside = True
        elif not boundary_contains(member, rep):
            interior = True
    if interior and outside:
        raise HalfClassificationError(f"Half-flat meets both the interior and the complement of {member}")
    label = HALF_INTERIOR if interior else HALF_OUTSIDE if outside else HALF_BOUNDARY
    log.on_classify(member, label)
    return label


def cover_flat(f: StairFlat, *, log: Logger = Logger()) -> CoveringFamily:
    """
    Build a family of ``Γ(k, d)`` regions, each containing ``f`` in its boundary,
    that covers ``R^d`` exactly ``Δ(k, d)`` times off the members' boundaries.

    Points and diagonal flats yield plain stair-halfspaces. Horizontal and
    vertical flats reduce to covers in one lower dimension; vertical ones yield
    cylinders.
    """
    gd = gamma_delta(f.order, f.dimension)
    members = _cover_members(f, log)
    assert len(members) == gd.gamma, f"Wrong family size {len(members)} (expected {gd.gamma}). This is a BUG. {f=}"
    return CoveringFamily(tuple(members), gd.delta, f.anchor_points())


def _cover_members(f: StairFlat, log: Logger) -> list[IRegion]:
    d = f.dimension
    if isinstance(f, PointFlat):
        return [StairHalfspace(f.point, frozenset({i})) for i in range(d + 1)]
    if isinstance(f, FullSpace):
        return []
    if isinstance(f, Vertical):
        lower = _cover_members(f.base, log)
        side = _cover_members(complete_flat(f.base), log)
        return [Cylinder(m) for m in lower + side]
    if isinstance(f, Horizontal):
        k = f.order
        below = [extrude(m, f.z) for m in _cover_members(f.base, log)]
        vertex = tuple(Fraction(0) for _ in range(d - 1)) + (f.z,)
        down = StairHalfspace(vertex, frozenset(range(d)))
        up = StairHalfspace(vertex, frozenset({d}))
        return below + [down] * gamma_delta(k - 1, d - 1).delta + [up] * gamma_delta(k, d).delta
    return _cover_diagonal(f, log)


def _cover_diagonal(f: Diagonal, log: Logger) -> list[IRegion]:
    d = f.dimension
    k = f.order
    full = gamma_delta(k, d)
    lower = gamma_delta(k - 1, d - 1)
    inner = _cover_members(f.boundary, log)
    outer = _cover_members(f.half.carrier, log)
    labels = [classify_half(f.half, m, log=log) for m in inner]
    counts = {lbl: labels.count(lbl) for lbl in (HALF_INTERIOR, HALF_BOUNDARY, HALF_OUTSIDE)}
    if counts[HALF_OUTSIDE] > full.delta or counts[HALF_INTERIOR] > lower.delta:
        raise PartitionInfeasibleError(counts, full.delta, lower.delta)
    up = {i for i, lbl in enumerate(labels) if lbl == HALF_OUTSIDE}
    spare = [i for i, lbl in enumerate(labels) if lbl == HALF_BOUNDARY]
    up.update(spare[: full.delta - len(up)])
    log.on_partition(len(up), len(inner) - len(up), counts)
    assert len(up) == full.delta, f"Partition came out uneven. This is a BUG. [{counts=}]"
    first = [extrude(m, f.z, upper=i in up) for i, m in enumerate(inner)]
    second = [extrude(m, f.z) for m in outer]
    return first + second


def layer_parts(f: Diagonal, fam: CoveringFamily) -> tuple[Sequence[IRegion], Sequence[IRegion]]:
    """
    Split a diagonal flat's covering into the members built from the boundary's
    covering and the members extruded from the carrier's covering.
    """
    n_first = gamma_delta(f.order - 1, f.dimension - 1).gamma
    return fam.members[:n_first], fam.members[n_first:]


def _grid_value(rng: random.Random, denom: int) -> Fraction:
    return Fraction(rng.randint(0, denom), denom)


def random_flat(d: int, k: int, rng: random.Random, *, denom: int = 8) -> StairFlat:
    """
    Build a random stair-``k``-flat in ``R^d`` with coordinates on the grid
    ``{0, 1/denom, ..., 1}``. Flats with ``0 < k < d`` are diagonal: the boundary is
    a random lower flat, the carrier is its vertical completion, and a random half
    and height are picked.
    """
    if d < 1 or not 0 <= k <= d:
        raise ValueError(f"Need 0 <= k <= d and d >= 1 (got k={k}, d={d})")
    if k == 0:
        return PointFlat(tuple(_grid_value(rng, denom) for _ in range(d)))
    if k == d:
        return FullSpace(d)
    boundary = random_flat(d - 1, k - 1, rng, denom=denom)
    carrier = complete_flat(boundary)
    half = rng.choice(HalfStairFlat.sides(carrier, boundary))
    return Diagonal(boundary, half, _grid_value(rng, denom))
