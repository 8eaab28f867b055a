"""
Shallow halfspaces for lines: given a line through the bounding box of the
stretched grid, build a Euclidean halfspace containing the line that holds few
grid points, and a certificate recording every intermediate object.

The line is clipped to the box and the unit-cube images of its endpoints are
rounded to the grid, both down and up. Each rounding gives a two-point covering,
and every member whose volume is within the pigeonhole bound is moved outwards
by a grid step. The moved member's vertex is mapped back to the stretched grid,
where a Euclidean halfspace with small integer coefficients agrees with it on
every grid point far from the vertex. The halfspace holding the fewest grid
points is kept and rotated about the line so it contains all of it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import linalg
from .covering import CoveringFamily, cover_pair, member_volumes, smallest_member
from .depth import AffineFlat, EuclideanHalfspace, flat_depth, halfspace_count
from .grid import GridParams, bracket_exponent, indices, pi_inv, points
from .interval import AxisBox
from .report import Logger
from .stair import InvalidIndexSetError, StairHalfspace, translate_outwards, volume_in_unit_cube
from .util import Point, dot, scale, sub


class SeparationError(RuntimeError):
    """
    Exception raised when no hyperplane parallel to a line separates it from the
    part of the box outside a halfspace. This means the halfspace did not contain
    the clipped line.
    """


class AnchorMembershipError(RuntimeError):
    """
    Exception raised when, for every anchor rounding and covering member, the
    halfspace built from the moved member still misses an endpoint of the
    clipped line after every retry.
    """


def signed_coefficients(d: int, index_set: Iterable[int]) -> tuple[int, ...]:
    """
    Return ``(s_0, ..., s_d)`` with ``s_i = d + 1 - |I|`` for ``i`` in ``I`` and
    ``s_i = -|I|`` otherwise. They sum to zero, are positive exactly on ``I``, and
    have magnitudes between 1 and ``d``.
    """
    chosen = frozenset(index_set)
    if not chosen or len(chosen) > d or not chosen.issubset(range(d + 1)):
        raise InvalidIndexSetError(f"Index set {sorted(chosen)} is not a proper nonempty subset of 0..{d}")
    size = len(chosen)
    return tuple(d + 1 - size if i in chosen else -size for i in range(d + 1))


def agreeing_halfspace(a: Point, index_set: Iterable[int]) -> EuclideanHalfspace:
    """
    Return ``{x : s_0 + sum(s_i * x_i / a_i) >= 0}``. Its boundary passes through
    ``a``, and on stretched-grid points that are 1-far from ``a`` it contains
    exactly the points of the stair-halfspace ``(a, index_set)``.

    :raises ValueError: If some coordinate of ``a`` is zero.
    """
    if any(c == 0 for c in a):
        raise ValueError(f"Vertex {a} has a zero coordinate")
    s = signed_coefficients(len(a), index_set)
    normal = tuple(Fraction(si) / c for si, c in zip(s[1:], a))
    return EuclideanHalfspace(normal, Fraction(-s[0]))


def snap_vertex_outward(u: Point, index_set: Iterable[int], m: int, *, extra_steps: int = 0) -> Point:
    """
    Move a unit-cube vertex outwards onto the grid ``j/(m-1)``: round each
    coordinate to the grid in the outward direction (down on axes whose
    component is in the index set, up on the others), then take ``1 +
    extra_steps`` further steps. Results are clamped to exponents ``-1..m``.
    """
    if m < 2:
        raise ValueError(f"Grid side length must be at least 2 (got {m})")
    chosen = frozenset(index_set)
    out: list[Fraction] = []
    for axis, c in enumerate(u):
        scaled = c * (m - 1)
        if (axis + 1) in chosen:
            j = math.floor(scaled) - 1 - extra_steps
        else:
            j = math.ceil(scaled) + 1 + extra_steps
        out.append(Fraction(max(-1, min(m, j)), m - 1))
    return tuple(out)


def clip_line(line: AffineFlat, box: AxisBox) -> tuple[Point, Point] | None:
    """
    Intersect a line with a bounded box. Returns the endpoints of the clipped
    segment (possibly equal), or `None` if the line misses the box.
    """
    if line.order != 1:
        raise ValueError("Only lines can be clipped")
    t_lo: Fraction | None = None
    t_hi: Fraction | None = None
    for v, b, side in zip(line.direction, line.base, box.sides):
        if side.lo is None or side.hi is None:
            raise ValueError(f"Cannot clip against an unbounded box {box}")
        if v == 0:
            if not side.contains(b):
                return None
            continue
        t1, t2 = sorted(((side.lo - b) / v, (side.hi - b) / v))
        t_lo = t1 if t_lo is None else max(t_lo, t1)
        t_hi = t2 if t_hi is None else min(t_hi, t2)
    assert t_lo is not None and t_hi is not None, "A line direction cannot be zero. This is a BUG."
    if t_lo > t_hi:
        return None
    return line.point_at(t_lo), line.point_at(t_hi)


def meets_interior(segment: tuple[Point, Point], box: AxisBox) -> bool:
    """A clipped segment enters the open box iff its midpoint lies inside it"""
    mid = tuple((a + b) / 2 for a, b in zip(*segment))
    return all(side.contains_strictly(c) for side, c in zip(box.sides, mid))


def unit_floor(params: GridParams, x: Point) -> Point:
    """
    Round the unit-cube image of a point of the bounding box down to the grid:
    coordinate ``i`` becomes ``j/(m-1)`` where ``K_i^j <= x_i < K_i^(j+1)``.
    """
    return tuple(Fraction(bracket_exponent(k, c)[0], params.m - 1) for k, c in zip(params.K, x))


def unit_ceil(params: GridParams, x: Point) -> Point:
    """Like `unit_floor`, but rounds up. Grid-aligned coordinates are kept."""
    out: list[Fraction] = []
    for k, c in zip(params.K, x):
        j, exact = bracket_exponent(k, c)
        out.append(Fraction(j if exact else j + 1, params.m - 1))
    return tuple(out)


def anchor_roundings(params: GridParams, segment: tuple[Point, Point]) -> list[tuple[Point, Point]]:
    """
    Every pair of grid-aligned unit-cube anchors obtained by rounding each
    endpoint's image down or up. Each true image is less than one grid step away
    from its anchor. Rounding both down comes first.
    """
    p, q = segment
    ps = dict.fromkeys((unit_floor(params, p), unit_ceil(params, p)))
    qs = dict.fromkeys((unit_floor(params, q), unit_ceil(params, q)))
    return list(itertools.product(ps, qs))


def _box_cut_vertices(box: AxisBox, gamma: EuclideanHalfspace) -> list[Point]:
    """The vertices of the polytope ``box ∩ {x : gamma.value(x) <= 0}``"""
    corners = list(box.corners())
    verts = [c for c in corners if gamma.value(c) <= 0]
    for c in corners:
        for axis, side in enumerate(box.sides):
            if side.is_degenerate or c[axis] != side.lo:
                continue
            other = c[:axis] + (side.hi,) + c[axis + 1 :]
            va, vb = gamma.value(c), gamma.value(other)
            if (va < 0 < vb) or (vb < 0 < va):
                t = va / (va - vb)
                verts.append(tuple(x + t * (y - x) for x, y in zip(c, other)))
    return verts


def _primitive(u: Point) -> Point:
    lead = next(abs(c) for c in u if c != 0)
    return tuple(c / lead for c in u)


def _affine_normals(pts: Sequence[Point], dim: int) -> Iterator[Point]:
    """Normals of hyperplanes through ``dim`` of the given points"""
    seen: set[Point] = set()
    unique = list(dict.fromkeys(pts))
    for subset in itertools.combinations(unique, min(dim, len(unique))):
        diffs = [sub(p, subset[0]) for p in subset[1:]]
        for vec in linalg.nullspace(diffs, dim):
            u = _primitive(vec)
            for cand in (u, scale(Fraction(-1), u)):
                if cand not in seen:
                    seen.add(cand)
                    yield cand


def _find_separator(
    line: AffineFlat,
    strict: Sequence[Point],
    weak: Sequence[Point],
    hint: Point | None,
) -> tuple[str, Point]:
    """
    Find ``c`` orthogonal to the line with ``c.w < c.base`` for every ``w`` in
    ``strict`` and ``c.w <= c.base`` for every ``w`` in ``weak``.
    """
    d = line.dimension
    base = line.base
    v = line.direction

    def holds(c: Point, *, loose: bool = False) -> bool:
        cb = dot(c, base)
        if loose:
            return all(dot(c, w) <= cb for w in itertools.chain(strict, weak))
        return all(dot(c, w) < cb for w in strict) and all(dot(c, w) <= cb for w in weak)

    if hint is not None:
        c = sub(hint, scale(dot(hint, v) / dot(v, v), v))
        if any(c) and holds(c):
            return "projected", c
    rows = linalg.nullspace([v], d)
    projected = [linalg.apply(rows, p) for p in itertools.chain((base,), strict, weak)]
    cone: list[Point] = []
    for e in _affine_normals(projected, d - 1):
        c = linalg.transpose_apply(rows, e, d)
        if holds(c):
            return "support", c
        if holds(c, loose=True):
            cone.append(c)
    if cone:
        total = tuple(sum(col, Fraction(0)) for col in zip(*cone))
        if any(total) and holds(total):
            return "combined", total
    raise SeparationError(f"No hyperplane parallel to {line} separates it from {len(strict)} outside vertices")


def separate_line(
    line: AffineFlat,
    first: EuclideanHalfspace,
    box: AxisBox,
    *,
    log: Logger = Logger(),
) -> EuclideanHalfspace:
    """
    Return a halfspace bounded by a hyperplane parallel to ``line`` that contains
    the line and no point of ``box`` outside ``first``. The projection of
    ``first``'s normal orthogonal to the line is tried first; otherwise support
    hyperplanes of the projected outside polytope are searched.

    :raises SeparationError: If ``first`` does not contain the clipped line.
    """
    verts = _box_cut_vertices(box, first)
    strict = [w for w in verts if first.value(w) < 0]
    weak = [w for w in verts if first.value(w) == 0] if strict else []
    method, c = _find_separator(line, strict, weak, first.normal)
    result = EuclideanHalfspace.through(c, line.base)
    log.on_separation(method, result)
    return result


def supporting_halfspace(line: AffineFlat, box: AxisBox, *, log: Logger = Logger()) -> EuclideanHalfspace:
    """
    Return a halfspace containing a line that misses the open box, whose
    interior is disjoint from the box.
    """
    method, c = _find_separator(line, [], list(box.corners()), None)
    result = EuclideanHalfspace.through(c, line.base)
    log.on_separation(method, result)
    return result


def contains_line(h: EuclideanHalfspace, line: AffineFlat) -> bool:
    return all(dot(h.normal, v) == 0 for v in line.directions) and h.contains(line.base)


def slack_constant(d: int, retries: int = 2) -> int:
    """
    The constant ``C_d`` of the slack budget ``C_d/(m-1)`` on ``count/n``.

    Moving the vertex changes membership only for points with some coordinate
    between the old and new vertex coordinate. The vertex moves at most ``2 +
    retries`` grid steps per axis, so the moved member gains at most
    ``d * (2 + retries)/(m-1)`` volume. Counting grid points instead of volume
    over at most ``d + 1`` component boxes adds at most ``(d + 1) * d/m``.
    """
    return d * (2 + retries) + (d + 1) * d


def vertex_motion(member: StairHalfspace, moved: StairHalfspace) -> Fraction:
    """The total distance, summed over axes, the vertex travelled outwards"""
    return sum((abs(b - a) for a, b in zip(member.vertex, moved.vertex)), Fraction(0))


def slack_budget(params: GridParams, retries: int = 2) -> Fraction:
    return Fraction(2, params.d + 2) + Fraction(slack_constant(params.d, retries), params.m - 1)




@dataclass(frozen=True)
class PipelineSettings:
    """
    :param max_retries: Extra outward steps tried when an endpoint of the clipped
        line falls outside the agreeing halfspace.
    :param depth_limit: Largest grid size for which the exact line depth is
        attached to the certificate.
    :param widen: When no covering member survives its retries, shift the
        agreeing halfspace until it contains both endpoints instead of raising
        `AnchorMembershipError`. A widened certificate is never `ok`.
    """

    max_retries: int = 2
    depth_limit: int = 125
    widen: bool = False


@dataclass(frozen=True)
class LineCertificate:
    """
    Everything the pipeline built for one line. Fields describing the covering
    are `None` for trivial lines, which do not enter the open bounding box.
    """

    line: AffineFlat
    n: int
    trivial: bool
    first: EuclideanHalfspace
    final: EuclideanHalfspace
    count_first: int
    count_final: int
    budget: Fraction
    failures: tuple[str, ...]
    segment: tuple[Point, Point] | None = None
    anchors: tuple[Point, Point] | None = None
    family: CoveringFamily | None = None
    member_index: int | None = None
    member: StairHalfspace | None = None
    member_volume: Fraction | None = None
    moved: StairHalfspace | None = None
    moved_volume: Fraction | None = None
    moved_count: int | None = None
    vertex: Point | None = None
    retries: int = 0
    widened: bool = False
    depth: int | None = None
    candidates: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count_final, self.n)

    @property
    def within_budget(self) -> bool:
        return self.count_first <= self.budget * self.n


def _unit_count(params: GridParams, region: StairHalfspace) -> int:
    step = params.m - 1
    return sum(1 for idx in indices(params) if region.contains(tuple(Fraction(a, step) for a in idx)))


def _audit(cert: LineCertificate) -> tuple[str, ...]:
    failures: list[str] = []
    if cert.widened:
        failures.append("agreeing halfspace was widened")
    if cert.segment is not None and not all(cert.first.contains(x) for x in cert.segment):
        failures.append("endpoint outside first halfspace")
    if not contains_line(cert.final, cert.line):
        failures.append("line not contained in final halfspace")
    if cert.count_final > cert.count_first:
        failures.append("final count exceeds first count")
    if not cert.within_budget:
        failures.append("first count above slack budget")
    if cert.depth is not None and cert.depth > cert.count_final:
        failures.append("line depth exceeds final count")
    if cert.member_volume is not None and cert.member_volume > Fraction(2, cert.line.dimension + 2):
        failures.append("member volume above pigeonhole bound")
    if cert.member is not None and cert.moved is not None and cert.member_volume is not None:
        assert cert.moved_volume is not None
        if cert.moved_volume - cert.member_volume > vertex_motion(cert.member, cert.moved):
            failures.append("moved member gained more volume than its vertex travelled")
    return tuple(failures)


def lift_member(
    params: GridParams,
    member: StairHalfspace,
    segment: tuple[Point, Point],
    *,
    max_retries: int,
    log: Logger = Logger(),
) -> tuple[StairHalfspace, Point, EuclideanHalfspace, int] | None:
    """
    Move ``member`` outwards onto the grid, map its vertex back to the stretched
    grid and build the agreeing halfspace there. Each retry takes one more
    outward step.

    :return: ``(moved, vertex, halfspace, retries)``, or `None` if an endpoint of
        ``segment`` stays outside the halfspace after every retry.
    """
    p, q = segment
    for attempt in range(max_retries + 1):
        vertex_unit = snap_vertex_outward(member.vertex, member.index_set, params.m, extra_steps=attempt)
        vertex = pi_inv(params, vertex_unit)
        first = agreeing_halfspace(vertex, member.index_set)
        if first.contains(p) and first.contains(q):
            return translate_outwards(member, vertex_unit), vertex, first, attempt
        log.on_retry(attempt + 1, f"clipped endpoint outside {first}")
    return None


@dataclass(frozen=True)
class _Choice:
    anchors: tuple[Point, Point]
    family: CoveringFamily
    index: int
    member: StairHalfspace
    volume: Fraction
    moved: StairHalfspace
    vertex: Point
    first: EuclideanHalfspace
    retries: int
    count: int
    widened: bool = False

    @property
    def rank(self) -> tuple[int, Fraction, int]:
        return (self.count, self.volume, self.retries)


def _choose(
    params: GridParams,
    grid: Sequence[Point],
    segment: tuple[Point, Point],
    settings: PipelineSettings,
    log: Logger,
) -> tuple[_Choice | None, int]:
    """
    Lift every member within the pigeonhole bound, for every anchor rounding, and
    keep the agreeing halfspace holding the fewest grid points. Ties keep the
    earlier rounding and member.
    """
    bound = Fraction(2, params.d + 2)
    best: _Choice | None = None
    tried = 0
    for anchors in anchor_roundings(params, segment):
        family = cover_pair(*anchors, log=log)
        for idx, (member, volume) in enumerate(zip(family.stair_halfspaces(), member_volumes(family))):
            if volume > bound:
                continue
            tried += 1
            lifted = lift_member(params, member, segment, max_retries=settings.max_retries, log=log)
            if lifted is None:
                continue
            moved, vertex, first, retries = lifted
            count = halfspace_count(grid, first)
            choice = _Choice(anchors, family, idx, member, volume, moved, vertex, first, retries, count)
            if best is None or choice.rank < best.rank:
                best = choice
    return best, tried


def _widen(
    params: GridParams,
    grid: Sequence[Point],
    segment: tuple[Point, Point],
    settings: PipelineSettings,
) -> _Choice:
    p, q = segment
    anchors = anchor_roundings(params, segment)[0]
    family = cover_pair(*anchors)
    idx, volume = smallest_member(family)
    member = family.stair_halfspaces()[idx]
    vertex_unit = snap_vertex_outward(member.vertex, member.index_set, params.m, extra_steps=settings.max_retries)
    vertex = pi_inv(params, vertex_unit)
    normal = agreeing_halfspace(vertex, member.index_set).normal
    first = EuclideanHalfspace(normal, min(dot(normal, p), dot(normal, q)))
    moved = translate_outwards(member, vertex_unit)
    retries, count = settings.max_retries, halfspace_count(grid, first)
    return _Choice(anchors, family, idx, member, volume, moved, vertex, first, retries, count, widened=True)


def shallow_halfspace_for_line(
    params: GridParams,
    line: AffineFlat,
    *,
    settings: PipelineSettings = PipelineSettings(),
    log: Logger = Logger(),
) -> LineCertificate:
    """
    Run the whole pipeline for one line and return its certificate. The
    certificate is audited before it is returned: `LineCertificate.failures`
    lists every soundness property that did not hold, including the slack
    budget.

    :raises AnchorMembershipError: If, for every anchor rounding and covering
        member, an endpoint stays outside the agreeing halfspace after every
        retry and ``settings.widen`` is off.
    """
    d = params.d
    if d < 2:
        raise ValueError("Lines are only interesting in dimension 2 and up")
    if line.order != 1 or line.dimension != d:
        raise ValueError(f"Expected a line in R^{d}")
    grid = list(points(params))
    box = params.box
    budget = slack_budget(params, settings.max_retries)
    depth = flat_depth(grid, line) if params.n <= settings.depth_limit else None

    segment = clip_line(line, box)
    if segment is None or not meets_interior(segment, box):
        log.on_trivial_line(line)
        support = supporting_halfspace(line, box, log=log)
        count = halfspace_count(grid, support)
        cert = LineCertificate(line, params.n, True, support, support, count, count, budget, (), depth=depth)
        return _finish(cert, log)

    choice, tried = _choose(params, grid, segment, settings, log)
    if choice is None:
        p, q = segment
        if not settings.widen:
            raise AnchorMembershipError(f"Endpoints {p} and {q} stay outside every agreeing halfspace")
        choice = _widen(params, grid, segment, settings)
    log.on_member_chosen(choice.member, choice.volume)

    final = separate_line(line, choice.first, box, log=log)
    cert = LineCertificate(
        line,
        params.n,
        False,
        choice.first,
        final,
        choice.count,
        halfspace_count(grid, final),
        budget,
        (),
        segment=segment,
        anchors=choice.anchors,
        family=choice.family,
        member_index=choice.index,
        member=choice.member,
        member_volume=choice.volume,
        moved=choice.moved,
        moved_volume=volume_in_unit_cube(choice.moved),
        moved_count=_unit_count(params, choice.moved),
        vertex=choice.vertex,
        retries=choice.retries,
        widened=choice.widened,
        depth=depth,
        candidates=tried,
    )
    return _finish(cert, log)


def _finish(cert: LineCertificate, log: Logger) -> LineCertificate:
    failures = _audit(cert)
    done = replace(cert, failures=failures)
    log.on_certificate(done.ok, f"{done.count_final}/{done.n} points, failures={list(failures)}")
    return done
