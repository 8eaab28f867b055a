from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from . import covering as mod
from .stair import StairHalfspace, verify_cover
from .util import as_point

F = Fraction

unit = st.fractions(min_value=0, max_value=1, max_denominator=12)


def pairs(d: int) -> st.SearchStrategy[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
    return st.tuples(st.tuples(*(unit for _ in range(d))), st.tuples(*(unit for _ in range(d))))


def test_planar_example():
    p = as_point(["3/10", "2/10"])
    q = as_point(["7/10", "8/10"])
    fam = mod.cover_pair(p, q)
    a = as_point(["3/10", "8/10"])
    assert fam.members == (StairHalfspace(a, frozenset({0, 2})), StairHalfspace(a, frozenset({1})))
    assert fam.delta == 1
    assert mod.check_family(fam, p, q).ok


def test_planar_example_other_orientation():
    p = as_point(["7/10", "2/10"])
    q = as_point(["3/10", "8/10"])
    fam = mod.cover_pair(q, p)
    a = as_point(["7/10", "8/10"])
    assert fam.members == (StairHalfspace(a, frozenset({0})), StairHalfspace(a, frozenset({1, 2})))


@pytest.mark.parametrize("d,size", [(2, 2), (3, 5), (4, 9), (5, 14)])
def test_sizes(d: int, size: int):
    p = tuple(F(i + 1, 2 * d + 3) for i in range(d))
    q = tuple(F(2 * d + 2 - i, 2 * d + 3) for i in range(d))
    fam = mod.cover_pair(p, q)
    assert len(fam) == size == mod.pair_family_size(d)
    assert fam.delta == d - 1
    assert verify_cover(fam.members, d - 1).ok


def test_dimension_errors():
    with pytest.raises(mod.CoveringDimensionError):
        mod.cover_pair(as_point([1]), as_point([2]))
    with pytest.raises(mod.CoveringDimensionError):
        mod.cover_pair(as_point([1, 2]), as_point([2, 3, 4]))


def test_missing_member_is_an_undercover():
    p = as_point(["1/5", "3/5", "2/5"])
    q = as_point(["4/5", "1/5", "3/5"])
    fam = mod.cover_pair(p, q)
    broken = mod.CoveringFamily(fam.members[1:], fam.delta, fam.anchors)
    cert = mod.check_family(broken, p, q)
    assert not cert.ok
    assert cert.failure == "multiplicity"
    assert cert.cover.observed == fam.delta - 1


def test_member_missing_an_anchor():
    p = as_point(["1/5", "3/5"])
    q = as_point(["4/5", "1/5"])
    fam = mod.cover_pair(p, q)
    far = mod.cover_pair(as_point([5, 5]), as_point([6, 7]))
    cert = mod.check_family(far, p, q)
    assert not cert.ok
    assert cert.failure in ("p not contained", "q not contained")
    assert mod.check_family(fam, p, q).ok


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@given(data=st.data())
@settings(max_examples=100, deadline=None)
def test_random_pairs(d: int, data: st.DataObject):
    p, q = data.draw(pairs(d))
    fam = mod.cover_pair(p, q)
    cert = mod.check_family(fam, p, q)
    assert cert.ok, cert


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@given(data=st.data())
@settings(max_examples=100, deadline=None)
def test_volumes_sum_to_multiplicity(d: int, data: st.DataObject):
    p, q = data.draw(pairs(d))
    fam = mod.cover_pair(p, q)
    vols = mod.member_volumes(fam)
    assert sum(vols) == d - 1
    _, smallest = mod.smallest_member(fam)
    assert smallest <= F(2, d + 2)
    assert smallest == min(vols)


@given(st.integers(3, 5).flatmap(pairs))
@settings(max_examples=40, deadline=None)
def test_layer_split(pair):
    p, q = pair
    d = len(p)
    lower, upper, height = mod.cover_pair_layers(p, q)
    assert height == max(p[-1], q[-1])
    assert len(upper) == d
    below = mod.lower_part(d, height)
    above = mod.upper_part(d, height)
    assert verify_cover(lower, d - 2, below).ok
    assert verify_cover(lower, 0, above).ok
    assert verify_cover(upper, 1, below).ok
    assert verify_cover(upper, d - 1, above).ok


def test_smallest_member_empty():
    with pytest.raises(ValueError):
        mod.smallest_member(mod.CoveringFamily((), 0, (as_point([0, 0]),)))
