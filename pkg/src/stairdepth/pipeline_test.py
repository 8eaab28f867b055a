import itertools
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from . import pipeline as mod
from .depth import AffineFlat, EuclideanHalfspace
from .grid import GridParams, c_far, grid_point, indices, points
from .interval import AxisBox
from .stair import InvalidIndexSetError, StairHalfspace
from .sweep import grid_pair_lines, random_lines
from .util import as_point, dot

F = Fraction


def P(*coords: object) -> tuple[Fraction, ...]:
    return as_point(coords)  # type: ignore


def proper_index_sets(d: int):
    for size in range(1, d + 1):
        for combo in itertools.combinations(range(d + 1), size):
            yield frozenset(combo)


def test_signed_coefficients():
    assert mod.signed_coefficients(2, {1}) == (-1, 2, -1)
    assert mod.signed_coefficients(2, {0, 2}) == (1, -2, 1)
    for d in range(1, 6):
        for chosen in proper_index_sets(d):
            s = mod.signed_coefficients(d, chosen)
            assert sum(s) == 0
            assert all((si > 0) == (i in chosen) for i, si in enumerate(s))
            assert all(1 <= abs(si) <= d for si in s)
    with pytest.raises(InvalidIndexSetError):
        mod.signed_coefficients(2, {0, 1, 2})
    with pytest.raises(InvalidIndexSetError):
        mod.signed_coefficients(2, set())


def test_agreeing_halfspace_boundary_through_vertex():
    a = P(4, 64)
    h = mod.agreeing_halfspace(a, {0, 2})
    assert h.on_boundary(a)
    with pytest.raises(ValueError):
        mod.agreeing_halfspace(P(0, 1), {1})


@pytest.mark.parametrize("d", [2, 3])
def test_agreement_on_far_points(d: int):
    params = GridParams(d, 4)
    grid = list(points(params))
    checked = 0
    for idx in indices(params):
        if min(idx) < 1:
            continue
        a = grid_point(params, idx)
        far = [x for x in grid if c_far(params, x, a, 1)]
        for chosen in proper_index_sets(d):
            stair = StairHalfspace(a, chosen)
            euclid = mod.agreeing_halfspace(a, chosen)
            for x in far:
                assert stair.contains(x) == euclid.contains(x), (a, sorted(chosen), x)
                checked += 1
    assert checked > 0


def test_snap_vertex_outward():
    u = P("1/3", "2/3")
    assert mod.snap_vertex_outward(u, {0, 2}, 4) == P("2/3", "1/3")
    assert mod.snap_vertex_outward(u, {0, 2}, 4, extra_steps=1) == P(1, 0)
    assert mod.snap_vertex_outward(P("1/2", "1/2"), {1}, 4) == P(0, 1)
    assert mod.snap_vertex_outward(P(0, 1), {1}, 3) == P("-1/2", "3/2")
    assert mod.snap_vertex_outward(P(0, 1), {1}, 3, extra_steps=4) == P("-1/2", "3/2")


def test_clip_line():
    box = AxisBox.unit(2)
    diagonal = AffineFlat.line(P(0, 0), P(1, 1))
    assert mod.clip_line(diagonal, box) == (P(0, 0), P(1, 1))
    shifted = AffineFlat.of([0, "1/2"], [[1, 0]])
    assert mod.clip_line(shifted, box) == (P(0, "1/2"), P(1, "1/2"))
    assert mod.clip_line(AffineFlat.of([0, 2], [[1, 0]]), box) is None
    assert mod.clip_line(AffineFlat.of([2, 0], [[1, 1]]), box) is None
    corner = mod.clip_line(AffineFlat.of([1, 0], [[1, 1]]), box)
    assert corner == (P(1, 0), P(1, 0))
    assert not mod.meets_interior(corner, box)
    assert mod.meets_interior((P(0, 0), P(1, 1)), box)
    with pytest.raises(ValueError):
        mod.clip_line(diagonal, AxisBox.full(2))


def test_unit_floor():
    params = GridParams(2, 3)
    assert mod.unit_floor(params, P(1, 1)) == P(0, 0)
    assert mod.unit_floor(params, P(5, 64)) == P("1/2", "1/2")
    assert mod.unit_floor(params, P(16, 4095)) == P(1, "1/2")


def test_unit_ceil():
    params = GridParams(2, 3)
    assert mod.unit_ceil(params, P(1, 1)) == P(0, 0)
    assert mod.unit_ceil(params, P(5, 64)) == P(1, "1/2")
    assert mod.unit_ceil(params, P(16, 4095)) == P(1, 1)


def test_anchor_roundings():
    params = GridParams(2, 3)
    assert mod.anchor_roundings(params, (P(1, 1), P(5, 64))) == [
        (P(0, 0), P("1/2", "1/2")),
        (P(0, 0), P(1, "1/2")),
    ]
    assert len(mod.anchor_roundings(params, (P(2, 2), P(5, 65)))) == 4


def test_slack_constant():
    assert mod.slack_constant(3) == 24
    assert mod.slack_constant(2, retries=0) == 10
    params = GridParams(3, 5)
    assert mod.slack_budget(params) == F(2, 5) + 6


def test_vertex_motion():
    h = StairHalfspace.of(["1/2", "1/2"], [0, 2])
    moved = StairHalfspace.of(["3/4", "1/4"], [0, 2])
    assert mod.vertex_motion(h, moved) == F(1, 2)
    assert mod.vertex_motion(h, h) == 0


def _outside_samples(box: AxisBox, gamma: EuclideanHalfspace) -> list[tuple[Fraction, ...]]:
    ticks = [[s.lo + (s.hi - s.lo) * F(j, 4) for j in range(5)] for s in box.sides]  # type: ignore
    return [x for x in itertools.product(*ticks) if not gamma.contains(x)]


def test_separate_line_projected_normal():
    box = AxisBox.unit(3)
    first = EuclideanHalfspace(P(1, 1, 0), F(1, 2))
    line = AffineFlat.of(["1/2", "1/2", 0], [[1, 0, 1]])
    final = mod.separate_line(line, first, box)
    assert mod.contains_line(final, line)
    assert not any(final.contains(x) for x in _outside_samples(box, first))


def test_separator_search_without_hint():
    box = AxisBox.unit(3)
    first = EuclideanHalfspace(P(1, 1, 0), F(1, 2))
    line = AffineFlat.of(["1/2", "1/2", 0], [[1, 0, 1]])
    verts = mod._box_cut_vertices(box, first)
    strict = [w for w in verts if first.value(w) < 0]
    weak = [w for w in verts if first.value(w) == 0]
    method, c = mod._find_separator(line, strict, weak, None)
    assert method in ("support", "combined")
    assert dot(c, line.direction) == 0
    final = EuclideanHalfspace.through(c, line.base)
    assert not any(final.contains(x) for x in _outside_samples(box, first))


def test_separate_line_rejects_uncontained_line():
    box = AxisBox.unit(2)
    first = EuclideanHalfspace(P(1, 0), F(1, 2))
    line = AffineFlat.of([0, 0], [[0, 1]])
    with pytest.raises(mod.SeparationError):
        mod.separate_line(line, first, box)


def test_trivial_line_outside_box():
    params = GridParams(2, 3)
    cert = mod.shallow_halfspace_for_line(params, AffineFlat.of([0, 0], [[0, 1]]))
    assert cert.trivial
    assert cert.ok
    assert cert.count_final == 0
    assert cert.depth == 0


def test_trivial_line_along_box_edge():
    params = GridParams(2, 3)
    cert = mod.shallow_halfspace_for_line(params, AffineFlat.of([1, 0], [[0, 1]]))
    assert cert.trivial
    assert cert.ok
    assert cert.count_final == params.m
    assert cert.family is None


def _worked_planar_line() -> tuple[GridParams, AffineFlat]:
    params = GridParams(2, 4)
    return params, AffineFlat.line(P(1, 1), grid_point(params, (3, 3)))


def test_worked_planar_line():
    params, line = _worked_planar_line()
    cert = mod.shallow_halfspace_for_line(params, line)
    assert not cert.trivial
    assert cert.ok, cert.failures
    assert cert.family is not None and len(cert.family) == 2
    assert cert.member_volume is not None and cert.member_volume <= F(1, 2)
    assert cert.moved is not None and cert.member is not None
    assert cert.moved.index_set == cert.member.index_set
    assert cert.depth is not None and cert.depth <= cert.count_final <= cert.count_first
    assert cert.within_budget
    assert cert.segment is not None
    assert cert.anchors in mod.anchor_roundings(params, cert.segment)
    assert cert.candidates >= 1
    assert not cert.widened


def test_audit_failures():
    params, line = _worked_planar_line()
    cert = mod.shallow_halfspace_for_line(params, line)
    assert mod._audit(cert) == ()
    assert "agreeing halfspace was widened" in mod._audit(replace(cert, widened=True))
    assert "first count above slack budget" in mod._audit(replace(cert, budget=F(0)))
    assert cert.member is not None and cert.moved is not None and cert.member_volume is not None
    grown = cert.member_volume + mod.vertex_motion(cert.member, cert.moved) + 1
    assert "moved member gained more volume than its vertex travelled" in mod._audit(replace(cert, moved_volume=grown))
    assert not replace(cert, failures=mod._audit(replace(cert, widened=True))).ok


def test_widening_is_off_by_default():
    assert not mod.PipelineSettings().widen


def test_widened_halfspace_holds_segment():
    params, line = _worked_planar_line()
    segment = mod.clip_line(line, params.box)
    assert segment is not None
    choice = mod._widen(params, list(points(params)), segment, mod.PipelineSettings(max_retries=0, widen=True))
    assert choice.widened
    assert choice.retries == 0
    assert all(choice.first.contains(x) for x in segment)
    assert any(choice.first.on_boundary(x) for x in segment)


def _check_certificate(params: GridParams, cert: mod.LineCertificate) -> None:
    assert cert.ok, (cert.line, cert.failures)
    assert mod.contains_line(cert.final, cert.line)
    assert cert.count_final <= cert.count_first
    if cert.depth is not None:
        assert cert.depth <= cert.count_final
    assert cert.within_budget
    assert not cert.widened
    if not cert.trivial:
        assert cert.segment is not None
        assert all(cert.first.contains(x) for x in cert.segment)
        assert cert.retries <= mod.PipelineSettings().max_retries
        assert cert.member_volume is not None and cert.member_volume <= F(2, params.d + 2)


@pytest.mark.parametrize("d,m", [(2, 3), (2, 4), (3, 3)])
def test_all_grid_pair_lines(d: int, m: int):
    params = GridParams(d, m)
    for line in grid_pair_lines(params):
        _check_certificate(params, mod.shallow_halfspace_for_line(params, line))


def test_random_spatial_lines_with_depth():
    params = GridParams(3, 4)
    for line in random_lines(params, 100, random.Random(11)):
        cert = mod.shallow_halfspace_for_line(params, line)
        assert cert.depth is not None
        _check_certificate(params, cert)


def test_max_ratio_does_not_grow_with_m():
    settings = mod.PipelineSettings(depth_limit=0)
    observed: list[Fraction] = []
    for m in (3, 4, 5):
        params = GridParams(3, m)
        lines = random_lines(params, 200, random.Random(0))
        if m == 3:
            lines += list(grid_pair_lines(params))
        certs = [mod.shallow_halfspace_for_line(params, line, settings=settings) for line in lines]
        for cert in certs:
            _check_certificate(params, cert)
        observed.append(max(cert.ratio for cert in certs))
    assert observed == sorted(observed, reverse=True), observed


def test_settings_depth_limit():
    params = GridParams(2, 3)
    line = AffineFlat.line(P(1, 1), P(16, 4096))
    cert = mod.shallow_halfspace_for_line(params, line, settings=mod.PipelineSettings(depth_limit=4))
    assert cert.depth is None
    assert cert.ok


def test_rejects_non_lines():
    params = GridParams(3, 3)
    with pytest.raises(ValueError):
        mod.shallow_halfspace_for_line(params, AffineFlat.of([1, 1, 1], [[1, 0, 0], [0, 1, 0]]))
    with pytest.raises(ValueError):
        mod.shallow_halfspace_for_line(params, AffineFlat.of([1, 1], [[1, 0]]))
