from fractions import Fraction

from . import cells as mod
from .interval import AxisBox
from .stair import StairHalfspace

F = Fraction


def test_unbounded_axis():
    decomp = mod.CellDecomposition([[F(0), F(1)]])
    pieces = decomp.axis_pieces(0)
    assert [(p.lo, p.hi) for p in pieces] == [(None, 0), (0, 1), (1, None)]
    assert [c.representative for c in decomp.cells()] == [(F(-1),), (F(1, 2),), (F(2),)]


def test_clip_drops_outside_breakpoints():
    decomp = mod.CellDecomposition([[F(-5), F(1, 2), F(7)]], AxisBox.unit(1))
    assert decomp.axes == ((F(0), F(1, 2), F(1)),)
    assert decomp.cell_count() == 2
    assert sum(c.volume() or 0 for c in decomp.cells()) == 1


def test_faces():
    decomp = mod.CellDecomposition([[F(0)], [F(0)]])
    faces = list(decomp.faces())
    # three pieces per axis: below, at, and above the breakpoint
    assert len(faces) == 9
    assert sorted(f.rank for f in faces) == [0, 1, 1, 1, 1, 2, 2, 2, 2]


def test_degenerate_clip():
    clip = AxisBox.from_bounds([0, 2], [1, 2])
    decomp = mod.CellDecomposition([[F(1, 2)], [F(5)]], clip)
    assert decomp.cell_count() == 2
    assert all(c.representative[1] == 2 for c in decomp.cells())


def test_of_regions():
    h = StairHalfspace.of([1, 2], [0])
    decomp = mod.CellDecomposition.of_regions([h], 2, extra_points=[(F(3), F(4))])
    assert decomp.axes == ((F(1), F(3)), (F(2), F(4)))
    assert decomp.cell_count() == 9


def test_representatives_are_interior():
    decomp = mod.CellDecomposition([[F(0), F(1, 3), F(1)], [F(1, 2)]], AxisBox.unit(2))
    for cell in decomp.cells():
        rep = cell.representative
        assert all(side.contains_strictly(c) for side, c in zip(cell.box.sides, rep))
