"""
Two-point coverings: for points ``p`` and ``q`` in ``R^d`` build ``(d-1)(d+2)/2``
stair-halfspaces, each containing both points on its boundary, that together
cover every point of space off their boundaries exactly ``d - 1`` times.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .interfaces import IRegion
from .interval import AxisBox, Interval
from .report import Logger
from .stair import CoverCertificate, StairHalfspace, boundary_contains, verify_cover, volume_in_unit_cube
from .util import Point, minmax


class CoveringDimensionError(ValueError):
    """
    Exception raised when a two-point covering is requested in dimension below 2,
    or for points of different dimensions.
    """


@dataclass(frozen=True)
class CoveringFamily:
    """
    A family of regions together with the multiplicity ``delta`` with which it is
    claimed to cover space, and the anchors every member is claimed to contain.
    """

    members: tuple[IRegion, ...]
    delta: int
    anchors: tuple[Point, ...] = ()

    @property
    def dimension(self) -> int:
        return self.members[0].dimension if self.members else len(self.anchors[0])

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[IRegion]:
        return iter(self.members)

    def stair_halfspaces(self) -> Sequence[StairHalfspace]:
        """Return the members, which must all be plain stair-halfspaces"""
        out: list[StairHalfspace] = []
        for m in self.members:
            assert isinstance(m, StairHalfspace), f"Family member {m!r} is not a stair-halfspace"
            out.append(m)
        return out


def pair_family_size(d: int) -> int:
    return (d - 1) * (d + 2) // 2


def _shs(vertex: Point, *indices: int) -> StairHalfspace:
    return StairHalfspace(vertex, frozenset(indices))


def _split(p: Point, q: Point) -> tuple[list[StairHalfspace], list[StairHalfspace], Fraction]:
    d = len(p)
    p, q = minmax(p, q, key=lambda x: x[-1])
    if d == 2:
        a = (p[0], q[1])
        upper = [_shs(a, 0, 2), _shs(a, 1)] if p[0] <= q[0] else [_shs(a, 0), _shs(a, 1, 2)]
        return [], upper, q[1]
    height = q[-1]
    lower = [StairHalfspace(h.vertex + (height,), h.index_set) for h in _pair_members(p[:-1], q[:-1])]
    m = max((i for i in range(1, d) if p[i - 1] <= q[i - 1]), default=0)
    a = p[:-1] + (height,)
    upper = [_shs(a, i, d) for i in range(d) if i != m]
    upper.append(_shs(a, m))
    return lower, upper, height


def _pair_members(p: Point, q: Point) -> list[StairHalfspace]:
    lower, upper, _ = _split(p, q)
    return lower + upper


def _check_pair(p: Point, q: Point) -> int:
    if len(p) != len(q):
        raise CoveringDimensionError(f"Anchors have different dimensions ({len(p)} and {len(q)})")
    if len(p) < 2:
        raise CoveringDimensionError(f"Two-point coverings need d >= 2 (got d={len(p)})")
    return len(p)


def cover_pair(p: Point, q: Point, *, log: Logger = Logger()) -> CoveringFamily:
    """
    Build the two-point covering family for ``p`` and ``q``.

    The points are ordered so that ``p_d <= q_d``. In the plane the family is two
    stair-halfplanes with vertex ``(p_1, q_2)``. In higher dimensions the family
    for the projections is extruded down from height ``q_d``, and ``d`` more
    members with vertex ``(p_1, ..., p_(d-1), q_d)`` are added.
    """
    d = _check_pair(p, q)
    members = _pair_members(p, q)
    assert len(members) == pair_family_size(d), f"Wrong family size. This is a BUG. [{p=}, {q=}]"
    log.message("Built a %d-member covering for %s and %s", len(members), p, q)
    return CoveringFamily(tuple(members), d - 1, (p, q))


def cover_pair_layers(p: Point, q: Point) -> tuple[list[StairHalfspace], list[StairHalfspace], Fraction]:
    """
    Return the two parts of the two-point covering separately: the members
    extruded from the lower-dimensional covering, the ``d`` members added at the
    top vertex, and the height ``q_d`` at which the two parts meet.
    """
    _check_pair(p, q)
    return _split(p, q)


def lower_part(d: int, height: Fraction) -> AxisBox:
    """The clip box ``{x : x_d <= height}``"""
    return AxisBox(tuple(Interval() for _ in range(d - 1)) + (Interval(None, height),))


def upper_part(d: int, height: Fraction) -> AxisBox:
    """The clip box ``{x : x_d >= height}``"""
    return AxisBox(tuple(Interval() for _ in range(d - 1)) + (Interval(height, None),))


@dataclass(frozen=True)
class FamilyCertificate:
    """
    The result of `check_family`. ``failure`` names the first property that did
    not hold, and ``member`` the index of the offending member, if any.
    """

    ok: bool
    cover: CoverCertificate
    failure: str | None = None
    member: int | None = None


def check_family(
    fam: CoveringFamily,
    p: Point,
    q: Point,
    *,
    check_boundary: bool = True,
    log: Logger = Logger(),
) -> FamilyCertificate:
    """
    Check a two-point covering: it covers space exactly ``d - 1`` times, every
    member contains both anchors, and (with ``check_boundary``) both anchors lie
    on the boundary of every member.
    """
    d = _check_pair(p, q)
    cover = verify_cover(fam.members, d - 1, dimension=d, log=log)
    if not cover.ok:
        return FamilyCertificate(False, cover, "multiplicity")
    if len(fam) != pair_family_size(d):
        return FamilyCertificate(False, cover, "size")
    for idx, member in enumerate(fam):
        for name, x in (("p", p), ("q", q)):
            if not member.contains(x):
                log.message("Member %d does not contain %s=%s", idx, name, x)
                return FamilyCertificate(False, cover, f"{name} not contained", idx)
            if check_boundary and not boundary_contains(member, x):
                log.message("Anchor %s=%s is interior to member %d", name, x, idx)
                return FamilyCertificate(False, cover, f"{name} not on boundary", idx)
    return FamilyCertificate(True, cover)


def member_volumes(fam: CoveringFamily) -> list[Fraction]:
    """The exact volume of each member inside the unit cube"""
    return [volume_in_unit_cube(m) for m in fam]


def smallest_member(fam: CoveringFamily, *, log: Logger = Logger()) -> tuple[int, Fraction]:
    """
    Return the index and unit-cube volume of the member with the least volume.
    Ties resolve to the earliest member.
    """
    if not fam.members:
        raise ValueError("An empty family has no smallest member")
    vols = member_volumes(fam)
    best = min(range(len(vols)), key=lambda i: (vols[i], i))
    log.on_member_chosen(fam.members[best], vols[best])
    return best, vols[best]
