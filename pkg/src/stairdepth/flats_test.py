import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from . import fixtures
from . import flats as mod
from .covering import lower_part, upper_part
from .stair import StairHalfspace, boundary_contains, stair_path, verify_cover

F = Fraction
HALF = F(1, 2)


def check_flat_family(f: mod.StairFlat) -> None:
    fam = mod.cover_flat(f)
    gd = mod.gamma_delta(f.order, f.dimension)
    assert len(fam) == gd.gamma
    assert fam.delta == gd.delta
    assert verify_cover(fam.members, gd.delta, dimension=f.dimension).ok
    for member in fam:
        for x in f.samples():
            assert member.contains(x), (member, x)
            assert boundary_contains(member, x), (member, x)


@pytest.mark.parametrize(
    "k,d,gamma,delta",
    [(0, 1, 2, 1), (0, 3, 4, 1), (1, 2, 2, 1), (1, 3, 5, 2), (2, 3, 2, 1), (2, 4, 7, 3), (3, 3, 0, 0)],
)
def test_gamma_delta(k: int, d: int, gamma: int, delta: int):
    gd = mod.gamma_delta(k, d)
    assert (gd.gamma, gd.delta) == (gamma, delta)


def test_gamma_delta_identities():
    for d in range(2, 10):
        for k in range(1, d):
            assert mod.gamma_delta_identities_hold(k, d), (k, d)
    with pytest.raises(ValueError):
        mod.gamma_delta(3, 2)


def test_lines_match_pair_family_size():
    for d in range(2, 8):
        assert mod.gamma_delta(1, d).gamma == (d - 1) * (d + 2) // 2


def test_planar_corner_membership():
    corner = fixtures.planar_corner()
    assert corner.order == 1
    assert corner.contains((F(3, 4), F(-5)))
    assert corner.contains((F(-5), F(3, 4)))
    assert not corner.contains((F(1), F(3, 4)))
    assert not corner.contains((F(3, 4), F(1)))


def test_worked_line_membership():
    line = fixtures.worked_line()
    assert line.dimension == 3
    assert line.order == 1
    assert line.contains((F(1, 4), F(3, 4), F(-3)))
    assert line.contains((F(1, 2), F(3, 4), HALF))
    assert line.contains((F(3, 4), F(-3), HALF))
    assert not line.contains((F(0), F(3, 4), HALF))
    assert not line.contains((F(1, 4), F(3, 4), F(1)))


def test_worked_line_family():
    line = fixtures.worked_line()
    fam = mod.cover_flat(line)
    assert fam.members == fixtures.worked_line_family()
    assert fam.delta == 2
    check_flat_family(line)


def test_worked_line_labels():
    line = fixtures.worked_line()
    a = (F(1, 4), F(3, 4))
    labels = [mod.classify_half(line.half, StairHalfspace(a, frozenset({i}))) for i in range(3)]
    assert labels == [mod.HALF_OUTSIDE, mod.HALF_INTERIOR, mod.HALF_OUTSIDE]


def test_worked_line_layers():
    line = fixtures.worked_line()
    fam = mod.cover_flat(line)
    first, second = mod.layer_parts(line, fam)
    assert len(first) == 3
    assert len(second) == 2
    below, above = lower_part(3, HALF), upper_part(3, HALF)
    assert verify_cover(first, 1, below).ok
    assert verify_cover(first, 2, above).ok
    assert verify_cover(second, 1, below).ok
    assert verify_cover(second, 0, above).ok


def test_plane_in_r4():
    plane = fixtures.plane_in_r4()
    assert (plane.dimension, plane.order) == (4, 2)
    fam = mod.cover_flat(plane)
    assert len(fam) == 7
    assert fam.delta == 3
    check_flat_family(plane)


@pytest.mark.parametrize("f", fixtures.planar_lines() + fixtures.spatial_flats())
def test_fixture_families(f: mod.StairFlat):
    check_flat_family(f)


@pytest.mark.parametrize("name", sorted(fixtures.FIXTURES))
def test_registered_fixtures(name: str):
    check_flat_family(fixtures.FIXTURES[name]())


def test_registered_fixture_forms():
    assert fixtures.FIXTURES["fig9"] is fixtures.worked_line
    assert isinstance(fixtures.FIXTURES["fig7-vertical"](), mod.Vertical)
    assert isinstance(fixtures.FIXTURES["fig7-horizontal"](), mod.Horizontal)
    cylinder = mod.cover_flat(fixtures.FIXTURES["fig7-vertical"]())
    assert all(isinstance(m, mod.Cylinder) for m in cylinder)
    lifted = mod.cover_flat(fixtures.FIXTURES["fig7-horizontal"]())
    assert all(isinstance(m, StairHalfspace) for m in lifted)
    assert len(lifted) == mod.gamma_delta(1, 3).gamma


def test_degenerate_families():
    assert len(mod.cover_flat(mod.FullSpace(3))) == 0
    point = mod.cover_flat(mod.PointFlat((HALF, HALF)))
    assert len(point) == 3
    assert point.delta == 1


def test_vertical_family_is_cylinders():
    fam = mod.cover_flat(mod.Vertical(mod.PointFlat((HALF,))))
    assert all(isinstance(m, mod.Cylinder) for m in fam)
    assert fam.members[0].contains((F(0), F(100)))
    assert not fam.members[0].contains((F(1), F(0)))


def test_half_sides():
    cut = mod.PointFlat((HALF,))
    left, right = mod.HalfStairFlat.sides(mod.FullSpace(1), cut)
    assert left.contains((HALF,)) and right.contains((HALF,))
    assert left.contains((F(-3),)) != right.contains((F(-3),))
    assert left.contains((F(3),)) != right.contains((F(3),))


def test_half_contains_needs_carrier():
    line = fixtures.worked_line()
    assert mod.half_contains(line.half, (F(3, 4), F(0)))
    assert not mod.half_contains(line.half, (F(0), F(3, 4)))
    with pytest.raises(mod.NotOnCarrierError):
        mod.half_contains(line.half, (F(0), F(0)))


def test_invalid_halves():
    cut = mod.PointFlat((HALF,))
    with pytest.raises(mod.InvalidFlatError):
        mod.HalfStairFlat(mod.FullSpace(1), cut, ((HALF,),))
    with pytest.raises(mod.InvalidFlatError):
        mod.HalfStairFlat(mod.FullSpace(1), cut, ((F(0),), (F(1),)))
    with pytest.raises(mod.InvalidFlatError):
        mod.HalfStairFlat(mod.FullSpace(2), cut, (((F(0), F(0))),))
    with pytest.raises(mod.NotOnCarrierError):
        mod.HalfStairFlat(mod.Vertical(cut), mod.PointFlat((HALF, HALF)), ((F(0), F(0)),))


def test_half_boundary_must_lie_on_carrier():
    carrier = mod.Vertical(mod.PointFlat((HALF,)))
    with pytest.raises(mod.InvalidFlatError, match="not on the carrier"):
        mod.HalfStairFlat(carrier, mod.PointFlat((F(1, 4), F(0))), ((HALF, F(-1)),))
    cylinder = mod.Vertical(fixtures.planar_corner())
    with pytest.raises(mod.InvalidFlatError, match="not on the carrier"):
        mod.HalfStairFlat(cylinder, mod.Vertical(mod.PointFlat((F(0), F(0)))), ((F(3, 4), F(0), F(0)),))


def test_invalid_flats():
    cut = mod.PointFlat((HALF,))
    ray = mod.HalfStairFlat(mod.FullSpace(1), cut, ((F(0),),))
    with pytest.raises(mod.InvalidFlatError):
        mod.Diagonal(mod.PointFlat((F(1, 4),)), ray, HALF)
    with pytest.raises(mod.InvalidFlatError):
        mod.Horizontal(cut, HALF)
    with pytest.raises(mod.InvalidFlatError):
        mod.Vertical(mod.FullSpace(2))
    with pytest.raises(mod.InvalidFlatError):
        mod.FullSpace(0)


def test_complete_flat():
    assert mod.complete_flat(mod.PointFlat((HALF,))) == mod.FullSpace(1)
    assert mod.complete_flat(mod.Horizontal(mod.FullSpace(1), HALF)) == mod.FullSpace(2)
    with pytest.raises(mod.InvalidFlatError):
        mod.complete_flat(mod.FullSpace(2))
    for f in fixtures.planar_lines() + fixtures.spatial_flats():
        if f.order == f.dimension - 1:
            continue
        g = mod.complete_flat(f)
        assert g.order == f.order + 1
        assert all(g.contains(x) for x in f.samples())


def test_classification_conflict():
    cut = mod.PointFlat((F(3, 4),))
    ray = mod.HalfStairFlat(mod.FullSpace(1), cut, ((F(0),),))
    with pytest.raises(mod.HalfClassificationError):
        mod.classify_half(ray, StairHalfspace((F(0),), frozenset({0})))


@pytest.mark.parametrize("name", ["fig6", "fig7", "fig9"])
def test_flats_and_halves_are_stair_convex(name: str):
    f = fixtures.FIXTURES[name]()
    assert isinstance(f, mod.Diagonal)
    for region in (f, f.half):
        pts = list(region.samples())
        for x in pts:
            for y in pts:
                assert all(region.contains(p) for p in stair_path(x, y).samples()), (x, y)


flat_shapes = st.integers(2, 4).flatmap(lambda d: st.tuples(st.just(d), st.integers(1, d - 1)))


@given(flat_shapes, st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_random_flat_families(shape: tuple[int, int], seed: int):
    d, k = shape
    f = mod.random_flat(d, k, random.Random(seed))
    assert (f.dimension, f.order) == (d, k)
    check_flat_family(f)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_random_flats_are_stair_convex(seed: int):
    f = mod.random_flat(3, 1, random.Random(seed))
    pts = list(f.samples())
    for x in pts:
        for y in pts:
            assert all(f.contains(p) for p in stair_path(x, y).samples())
