"""
Exact brute-force depth: halfspace counts, Tukey depth of points, depth of
affine flats by projection, and the cloud construction showing that no point
can be deeper than ``n/(d+1)`` in general.

Tukey depth is the minimum of ``#{p : u.(p - x) >= 0}`` over nonzero ``u``. The
minimum is attained on an open cell of the central arrangement of the
hyperplanes ``u.(p - x) = 0``, and every such cell has a vertex in its closure.
Each vertex is refined by an infinitesimal rotation, which is the same problem
one dimension lower restricted to the points on the vertex's hyperplane.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import linalg
from .util import Point, ScalarLike, add, as_point, as_scalar, dot, scale, sub


class DegenerateFlatError(ValueError):
    """
    Exception raised when the directions of an affine flat are linearly
    dependent, or the flat is all of space.
    """


@dataclass(frozen=True)
class EuclideanHalfspace:
    """The closed halfspace ``{x : normal . x >= offset}``"""

    normal: Point
    offset: Fraction

    def __post_init__(self) -> None:
        if not any(self.normal):
            raise ValueError("A halfspace needs a nonzero normal")

    @staticmethod
    def through(normal: Point, point: Point) -> EuclideanHalfspace:
        """The halfspace with the given normal whose boundary passes through ``point``"""
        return EuclideanHalfspace(normal, dot(normal, point))

    @property
    def dimension(self) -> int:
        return len(self.normal)

    def value(self, x: Point) -> Fraction:
        return dot(self.normal, x) - self.offset

    def contains(self, x: Point) -> bool:
        return self.value(x) >= 0

    def on_boundary(self, x: Point) -> bool:
        return self.value(x) == 0

    def __str__(self) -> str:
        return f"{{x : ({', '.join(map(str, self.normal))}) . x >= {self.offset}}}"


@dataclass(frozen=True)
class AffineFlat:
    """
    ``base + span(directions)``. A line has exactly one direction; a point has
    none.
    """

    base: Point
    directions: tuple[Point, ...]

    def __post_init__(self) -> None:
        d = len(self.base)
        if d < 1:
            raise DegenerateFlatError("A flat needs a base point with at least one coordinate")
        for v in self.directions:
            if len(v) != d:
                raise DegenerateFlatError(f"Direction {v} does not have dimension {d}")
        if len(self.directions) >= d:
            raise DegenerateFlatError(f"A proper flat in R^{d} has at most {d - 1} directions")
        if linalg.rank(self.directions, d) != len(self.directions):
            raise DegenerateFlatError("Flat directions are linearly dependent")

    @staticmethod
    def of(base: Iterable[ScalarLike], directions: Iterable[Iterable[ScalarLike]] = ()) -> AffineFlat:
        return AffineFlat(as_point(base), tuple(as_point(v) for v in directions))

    @staticmethod
    def line(p: Point, q: Point) -> AffineFlat:
        """The line through two distinct points"""
        if p == q:
            raise DegenerateFlatError(f"A line needs two distinct points (got {p} twice)")
        return AffineFlat(p, (sub(q, p),))

    @property
    def dimension(self) -> int:
        return len(self.base)

    @property
    def order(self) -> int:
        return len(self.directions)

    @property
    def direction(self) -> Point:
        """The direction of a line"""
        assert self.order == 1, "Only lines have a single direction"
        return self.directions[0]

    def point_at(self, *params: ScalarLike) -> Point:
        if len(params) != self.order:
            raise ValueError(f"Expected {self.order} parameters, got {len(params)}")
        x = self.base
        for t, v in zip(params, self.directions):
            x = add(x, scale(as_scalar(t), v))
        return x

    def contains(self, x: Point) -> bool:
        return linalg.rank([*self.directions, sub(x, self.base)], self.dimension) == self.order

    def __str__(self) -> str:
        base = f"({', '.join(map(str, self.base))})"
        dirs = " + ".join(f"t{i}({', '.join(map(str, v))})" for i, v in enumerate(self.directions))
        return f"{base} + {dirs}" if dirs else base


@dataclass(frozen=True)
class DepthWitness:
    """A depth value together with a closed halfspace attaining it"""

    depth: int
    halfspace: EuclideanHalfspace


def _check_points(points: Sequence[Point], d: int) -> None:
    for p in points:
        if len(p) != d:
            raise ValueError(f"Point {p} does not have dimension {d}")


def halfspace_count(points: Sequence[Point], gamma: EuclideanHalfspace) -> int:
    """The number of points in the closed halfspace, with multiplicity"""
    _check_points(points, gamma.dimension)
    return sum(1 for p in points if gamma.contains(p))


def _unit(d: int, axis: int = 0) -> Point:
    return tuple(Fraction(int(i == axis)) for i in range(d))


def _normalized(u: Point) -> Point:
    lead = next(abs(c) for c in u if c != 0)
    return tuple(c / lead for c in u)


def _candidate_normals(vectors: Sequence[Point], dim: int) -> Iterator[Point]:
    seen: set[Point] = set()
    for subset in itertools.combinations(vectors, dim - 1):
        kernel = linalg.nullspace(subset, dim)
        if len(kernel) != 1:
            continue
        u = _normalized(kernel[0])
        for cand in (u, scale(Fraction(-1), u)):
            if cand not in seen:
                seen.add(cand)
                yield cand


def _generic_min(vectors: Sequence[Point], dim: int) -> tuple[int, Point]:
    """
    Minimize ``#{w : u.w > 0}`` over directions ``u`` avoiding every hyperplane
    ``u.w = 0``. Returns the minimum and such a direction. ``vectors`` must be
    nonzero.
    """
    if not vectors:
        return 0, _unit(dim)
    basis = linalg.row_space(vectors, dim)
    if len(basis) < dim:
        count, c = _generic_min([linalg.apply(basis, w) for w in vectors], len(basis))
        return count, linalg.transpose_apply(basis, c, dim)
    if dim == 1:
        pos = sum(1 for w in vectors if w[0] > 0)
        neg = len(vectors) - pos
        return (pos, (Fraction(1),)) if pos <= neg else (neg, (Fraction(-1),))
    best: tuple[int, Point] | None = None
    for u in _candidate_normals(vectors, dim):
        found = _refine(u, vectors, dim)
        if best is None or found[0] < best[0]:
            best = found
            if best[0] == 0:
                break
    assert best is not None, f"No candidate direction for a full-rank set. This is a BUG. [{dim=}]"
    return best


def _refine(u: Point, vectors: Sequence[Point], dim: int) -> tuple[int, Point]:
    pos = [w for w in vectors if dot(u, w) > 0]
    off = [w for w in vectors if dot(u, w) != 0]
    on = [w for w in vectors if dot(u, w) == 0]
    if not on:
        return len(pos), u
    rows = linalg.nullspace([u], dim)
    count, c = _generic_min([linalg.apply(rows, w) for w in on], dim - 1)
    turn = linalg.transpose_apply(rows, c, dim)
    ratios = [abs(dot(u, w)) / abs(dot(turn, w)) for w in off if dot(turn, w) != 0]
    eps = min(ratios) / 2 if ratios else Fraction(1)
    return len(pos) + count, add(u, scale(eps, turn))


def tukey_depth_witness(points: Sequence[Point], x: Point) -> DepthWitness:
    """
    Compute the Tukey depth of ``x`` in ``points`` exactly, together with a closed
    halfspace containing ``x`` that holds exactly that many points.
    """
    d = len(x)
    _check_points(points, d)
    vecs = [sub(p, x) for p in points]
    nonzero = [w for w in vecs if any(w)]
    count, u = _generic_min(nonzero, d)
    witness = DepthWitness(len(vecs) - len(nonzero) + count, EuclideanHalfspace.through(u, x))
    assert (
        halfspace_count(points, witness.halfspace) == witness.depth
    ), f"Depth witness does not attain the depth. This is a BUG. [{x=}]"
    return witness


def tukey_depth(points: Sequence[Point], x: Point) -> int:
    return tukey_depth_witness(points, x).depth


def projection_for(f: AffineFlat) -> list[Point]:
    """
    Rows of a linear map ``R^d -> R^(d-k)`` whose kernel is spanned by the
    directions of ``f``
    """
    return linalg.nullspace(f.directions, f.dimension)


def _check_projection(f: AffineFlat, rows: Sequence[Point]) -> None:
    d, k = f.dimension, f.order
    if len(rows) != d - k or any(len(r) != d for r in rows):
        raise ValueError(f"Projection for a {k}-flat in R^{d} needs {d - k} rows of length {d}")
    if any(dot(r, v) != 0 for r in rows for v in f.directions):
        raise ValueError("Projection does not vanish on the flat's directions")
    if linalg.rank(rows, d) != d - k:
        raise ValueError("Projection rows are linearly dependent")


def flat_depth_witness(
    points: Sequence[Point],
    f: AffineFlat,
    *,
    projection: Sequence[Point] | None = None,
) -> DepthWitness:
    """
    Compute the depth of an affine flat by projecting along it and taking the Tukey
    depth of the projected base point. Any exact projection with the right kernel
    gives the same value.

    :param projection: Rows of the projection map. A default is derived from the
        flat's directions.
    """
    _check_points(points, f.dimension)
    rows = list(projection) if projection is not None else projection_for(f)
    _check_projection(f, rows)
    images = [linalg.apply(rows, p) for p in points]
    inner = tukey_depth_witness(images, linalg.apply(rows, f.base))
    normal = linalg.transpose_apply(rows, inner.halfspace.normal, f.dimension)
    return DepthWitness(inner.depth, EuclideanHalfspace(normal, inner.halfspace.offset))


def flat_depth(points: Sequence[Point], f: AffineFlat, *, projection: Sequence[Point] | None = None) -> int:
    return flat_depth_witness(points, f, projection=projection).depth


def _cross(a: Point, b: Point) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _half_plane(v: Point) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_order(a: Point, b: Point) -> int:
    ha, hb = _half_plane(a), _half_plane(b)
    if ha != hb:
        return ha - hb
    c = _cross(a, b)
    return -1 if c > 0 else 1 if c < 0 else 0


def sweep_depth_2d(points: Sequence[Point], x: Point) -> int:
    """
    Planar Tukey depth by an angular sweep: sort the critical directions normal
    to each ``p - x``, and count the closed halfplane for one direction strictly
    inside every gap between consecutive critical directions.
    """
    if len(x) != 2:
        raise ValueError("The angular sweep only works in the plane")
    _check_points(points, 2)
    vecs = [sub(p, x) for p in points]
    crit: list[Point] = []
    for w in vecs:
        if any(w):
            n = (-w[1], w[0])
            crit.extend((n, scale(Fraction(-1), n)))
    if not crit:
        return len(points)
    crit.sort(key=functools.cmp_to_key(_angle_order))
    distinct = [v for i, v in enumerate(crit) if i == 0 or _angle_order(crit[i - 1], v) != 0]
    best = len(points)
    for a, b in zip(distinct, distinct[1:] + distinct[:1]):
        mid = add(a, b) if _cross(a, b) > 0 else (-a[1], a[0])
        best = min(best, sum(1 for w in vecs if dot(mid, w) >= 0))
    return best


def cloud_set(d: int, cloud_size: int, radius: ScalarLike) -> list[Point]:
    """
    Replace each vertex of the standard simplex (the origin and the unit vectors)
    by ``cloud_size`` points on a short segment pointing away from the simplex
    centroid. Clouds are listed one after another, each starting at its vertex.
    """
    r = as_scalar(radius)
    if d < 1 or cloud_size < 1:
        raise ValueError(f"Need d >= 1 and cloud_size >= 1 (got {d=}, {cloud_size=})")
    if r < 0:
        raise ValueError(f"Cloud radius must be non-negative (got {r})")
    anchors = [tuple(Fraction(0) for _ in range(d))] + [_unit(d, i) for i in range(d)]
    centroid = tuple(Fraction(1, d + 1) for _ in range(d))
    out: list[Point] = []
    for v in anchors:
        away = sub(v, centroid)
        out.extend(add(v, scale(r * Fraction(j, cloud_size), away)) for j in range(cloud_size))
    return out


def cloud_centroids(points: Sequence[Point], cloud_size: int) -> list[Point]:
    """The centroid of each consecutive cloud of `cloud_set` output"""
    out: list[Point] = []
    for start in range(0, len(points), cloud_size):
        cloud = points[start : start + cloud_size]
        total = cloud[0]
        for p in cloud[1:]:
            total = add(total, p)
        out.append(scale(Fraction(1, len(cloud)), total))
    return out
