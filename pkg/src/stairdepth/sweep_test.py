import random
from fractions import Fraction

import pytest

from . import sweep as mod
from .grid import GridParams
from .pipeline import PipelineSettings

F = Fraction


def test_thread_count(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv(mod.THREADS_ENV, raising=False)
    assert mod.thread_count() == 1
    monkeypatch.setenv(mod.THREADS_ENV, "3")
    assert mod.thread_count() == 3
    for bad in ("0", "-2", "many"):
        monkeypatch.setenv(mod.THREADS_ENV, bad)
        with pytest.raises(ValueError):
            mod.thread_count()


def test_line_generators():
    params = GridParams(2, 3)
    assert len(list(mod.grid_pair_lines(params))) == 36
    assert len(list(mod.axis_lines(params))) == 6
    rng = random.Random(1)
    lines = mod.random_lines(params, 5, rng)
    assert len(lines) == 5
    assert all(params.box.contains(line.base) for line in lines)


def test_empty_sweep():
    report = mod.line_depth_sweep(GridParams(2, 3), [])
    assert report.rows == ()
    assert report.max_depth is None
    assert report.ok


def test_planar_pairs_reach_half_depth():
    params = GridParams(2, 3)
    report = mod.line_depth_sweep(params, mod.grid_pair_lines(params))
    assert [r.index for r in report.rows] == list(range(36))
    assert report.ok
    assert report.max_depth is not None
    assert report.max_depth >= -(-params.n // 2)
    assert report.max_depth_ratio == F(report.max_depth, params.n)


def test_spatial_axis_lines():
    params = GridParams(3, 3)
    report = mod.line_depth_sweep(params, mod.axis_lines(params))
    assert len(report.rows) == 27
    assert report.ok
    assert all(r.depth is not None and r.depth <= r.certificate.count_final for r in report.rows)


def test_pool_matches_sequential():
    params = GridParams(2, 3)
    lines = mod.random_lines(params, 6, random.Random(5))
    settings = PipelineSettings(depth_limit=9)
    one = mod.line_depth_sweep(params, lines, settings=settings, threads=1)
    two = mod.line_depth_sweep(params, lines, settings=settings, threads=2)
    assert [(r.index, r.depth, r.certificate.count_final) for r in one.rows] == [
        (r.index, r.depth, r.certificate.count_final) for r in two.rows
    ]
