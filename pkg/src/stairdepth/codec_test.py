import io
import json
from fractions import Fraction

import pytest

from . import codec as mod
from .covering import cover_pair
from .depth import AffineFlat, EuclideanHalfspace
from .fixtures import FIXTURES, worked_line
from .flats import Cylinder, Extrusion, cover_flat
from .stair import StairHalfspace
from .util import as_point

F = Fraction


def test_scalars():
    assert mod.encode_scalar(F(3, 4)) == "3/4"
    assert mod.encode_scalar(F(-6, 3)) == "-2"
    assert mod.encode_scalar(4096) == "4096"
    assert mod.decode_scalar("3/4") == F(3, 4)
    assert mod.decode_scalar(7) == 7
    for bad in ("x", "1/0", 0.5):
        with pytest.raises(mod.DecodeError):
            mod.decode_scalar(bad)  # type: ignore


def test_points():
    assert mod.encode_point(as_point(["1/3", 2])) == ["1/3", "2"]
    assert mod.decode_point(["1/3", "2"]) == (F(1, 3), F(2))
    assert mod.decode_point("1/3, 2/3") == (F(1, 3), F(2, 3))
    with pytest.raises(mod.DecodeError):
        mod.decode_point(3)


def test_stair_halfspace_layout():
    h = StairHalfspace(as_point(["3/10", "8/10"]), frozenset({2, 0}))
    assert mod.encode_region(h) == {"kind": "stair", "vertex": ["3/10", "4/5"], "index_set": [0, 2]}
    assert mod.decode_region({"vertex": ["3/10", "4/5"], "index_set": [2, 0]}) == h


def test_generalized_regions():
    base = StairHalfspace(as_point(["1/2", "1/2"]), frozenset({1}))
    for region in (Cylinder(base), Extrusion(base, F(1, 4)), Extrusion(Cylinder(base), F(1, 3), upper=True)):
        assert mod.decode_region(mod.encode_region(region)) == region
    with pytest.raises(mod.DecodeError):
        mod.decode_region({"kind": "blob"})


def test_flats():
    for make in FIXTURES.values():
        flat = make()
        assert mod.decode_flat(json.loads(mod.dumps(mod.encode_flat(flat)))) == flat
    assert mod.encode_flat(worked_line())["kind"] == "diagonal"
    with pytest.raises(mod.DecodeError):
        mod.decode_flat({"kind": "half"})


def test_families():
    fam = cover_pair(as_point(["3/10", "2/10"]), as_point(["7/10", "8/10"]))
    enc = mod.encode_family(fam)
    assert enc["delta"] == 1
    assert len(enc["members"]) == 2
    assert mod.decode_family(enc) == fam
    flat_fam = cover_flat(worked_line())
    assert mod.decode_family(json.loads(mod.dumps(mod.encode_family(flat_fam)))) == flat_fam


def test_halfspaces_and_lines():
    h = EuclideanHalfspace(as_point(["1/4", -2]), F(-1))
    assert mod.encode_halfspace(h) == {"normal": ["1/4", "-2"], "offset": "-1"}
    assert mod.decode_halfspace(mod.encode_halfspace(h)) == h
    line = AffineFlat.of([1, 1], [[3, "1/2"]])
    assert mod.decode_line(mod.encode_line(line)) == line


def test_dumps_is_sorted():
    assert mod.dumps({"b": 1, "a": {"d": 2, "c": 3}}) == '{"a": {"c": 3, "d": 2}, "b": 1}'
    out = io.StringIO()
    mod.write_jsonl([{"x": 1}, {"y": 2}], out)
    assert out.getvalue() == '{"x": 1}\n{"y": 2}\n'


def test_csv():
    assert mod.flatten({"a": {"b": 1}, "c": [1, 2], "d": None}) == {"a.b": 1, "c": "[1,2]", "d": None}
    out = io.StringIO()
    mod.write_csv([{"a": 1, "n": {"x": "1/2"}}, {"a": 2, "z": True}], out)
    assert out.getvalue().splitlines() == ["a,n.x,z", "1,1/2,", "2,,True"]
