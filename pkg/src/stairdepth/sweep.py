"""
Experiment sweeps: run the shallow-halfspace pipeline over many lines and collect
the exact line depths and certificate counts in a report ordered by line index.
"""

from __future__ import annotations

import itertools
import multiprocessing
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .depth import AffineFlat, DegenerateFlatError
from .grid import GridParams, grid_point, indices, points
from .pipeline import LineCertificate, PipelineSettings, shallow_halfspace_for_line
from .report import Logger
from .util import lazygen

THREADS_ENV = "STAIRDEPTH_THREADS"


def thread_count() -> int:
    """
    The worker cap from ``STAIRDEPTH_THREADS``, 1 when unset.

    :raises ValueError: If the variable is set to anything but a positive integer.
    """
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer (got {raw!r})") from None
    if count < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer (got {count})")
    return count


@lazygen
def grid_pair_lines(params: GridParams) -> Iterator[AffineFlat]:
    """Every line through two distinct grid points"""
    for p, q in itertools.combinations(list(points(params)), 2):
        yield AffineFlat.line(p, q)


@lazygen
def axis_lines(params: GridParams) -> Iterator[AffineFlat]:
    """Every axis-parallel line through a grid point"""
    for idx in indices(params):
        for axis in range(params.d):
            if idx[axis] != 0:
                continue
            direction = tuple(Fraction(int(i == axis)) for i in range(params.d))
            yield AffineFlat(grid_point(params, idx), (direction,))


def random_lines(params: GridParams, count: int, rng: random.Random) -> list[AffineFlat]:
    """
    Lines through two random integer points of the bounding box. Each coordinate
    is drawn from a random exponent band ``[K_i^j, K_i^(j+1)]`` so that the
    points spread over the grid's scales.
    """
    top = params.m - 1

    def draw() -> tuple[Fraction, ...]:
        coords: list[Fraction] = []
        for k in params.K:
            j = rng.randrange(top)
            coords.append(Fraction(rng.randint(k**j, k ** (j + 1))))
        return tuple(coords)

    lines: list[AffineFlat] = []
    while len(lines) < count:
        try:
            lines.append(AffineFlat.line(draw(), draw()))
        except DegenerateFlatError:
            continue
    return lines


@dataclass(frozen=True)
class SweepRow:
    index: int
    certificate: LineCertificate

    @property
    def depth(self) -> int | None:
        return self.certificate.depth


@dataclass(frozen=True)
class SweepReport:
    params: GridParams
    rows: tuple[SweepRow, ...]

    @property
    def max_depth(self) -> int | None:
        depths = [r.depth for r in self.rows if r.depth is not None]
        return max(depths, default=None)

    @property
    def max_depth_ratio(self) -> Fraction | None:
        top = self.max_depth
        return None if top is None else Fraction(top, self.params.n)

    @property
    def max_count(self) -> int | None:
        return max((r.certificate.count_final for r in self.rows), default=None)

    @property
    def ok(self) -> bool:
        return all(r.certificate.ok for r in self.rows)

    @property
    def failed(self) -> Sequence[SweepRow]:
        return [r for r in self.rows if not r.certificate.ok]


def _run_one(job: tuple[GridParams, int, AffineFlat, PipelineSettings]) -> SweepRow:
    params, index, line, settings = job
    return SweepRow(index, shallow_halfspace_for_line(params, line, settings=settings))


def line_depth_sweep(
    params: GridParams,
    lines: Iterable[AffineFlat],
    *,
    settings: PipelineSettings = PipelineSettings(),
    threads: int | None = None,
    log: Logger = Logger(),
) -> SweepReport:
    """
    Run the pipeline on every line. With more than one worker the lines are
    spread over a process pool; rows are always ordered by line index.

    :param threads: Worker cap. Defaults to `thread_count`.
    """
    jobs = [(params, i, line, settings) for i, line in enumerate(lines)]
    workers = min(threads if threads is not None else thread_count(), max(len(jobs), 1))
    if workers > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            rows = pool.map(_run_one, jobs)
    else:
        rows = [_run_one(job) for job in jobs]
    rows.sort(key=lambda r: r.index)
    for row in rows:
        cert = row.certificate
        log.on_certificate(cert.ok, f"line {row.index}: depth {cert.depth}, count {cert.count_final}/{cert.n}")
    report = SweepReport(params, tuple(rows))
    log.message("Sweep: %d lines, max depth %s of %d points", len(rows), report.max_depth, params.n)
    return report
