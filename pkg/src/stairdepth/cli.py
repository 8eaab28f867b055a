"""
Command-line entry point. Every subcommand writes JSON lines (or CSV with
``--csv``) to standard output and diagnostics to standard error, and exits
non-zero when any check it ran failed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence, TextIO

from . import codec
from .covering import check_family, cover_pair, member_volumes, smallest_member
from .depth import AffineFlat, flat_depth_witness, halfspace_count, sweep_depth_2d, tukey_depth, tukey_depth_witness
from .fixtures import FIXTURES
from .flats import cover_flat, gamma_delta, random_flat
from .grid import GridParams, c_far, crossing_stays_close, grid_point, indices, layer_pairs, pi_grid
from .pipeline import PipelineSettings, agreeing_halfspace, signed_coefficients
from .report import Logger, StreamLogger
from .stair import StairHalfspace, verify_cover
from .sweep import axis_lines, grid_pair_lines, line_depth_sweep, random_lines

Record = dict[str, Any]


def _emit(records: Sequence[Record], args: argparse.Namespace, out: TextIO) -> None:
    if getattr(args, "csv", False):
        codec.write_csv(records, out)
    else:
        codec.write_jsonl(records, out)


def _logger(args: argparse.Namespace) -> Logger:
    return StreamLogger(sys.stderr) if args.verbose else Logger()


def _cmd_grid(args: argparse.Namespace, out: TextIO) -> int:
    params = GridParams(args.d, args.m)
    records: list[Record] = []
    if args.emit == "json":
        records.append({"d": params.d, "m": params.m, "n": params.n, "K": [str(k) for k in params.K]})
    for idx in indices(params):
        pt = grid_point(params, idx)
        unit = codec.encode_point(pi_grid(params, pt))
        records.append({"index": list(idx), "point": codec.encode_point(pt), "unit": unit})
    if args.emit == "csv":
        codec.write_csv(records, out)
    else:
        codec.write_jsonl(records, out)
    return 0


def _cmd_cover(args: argparse.Namespace, out: TextIO) -> int:
    log = _logger(args)
    p, q = codec.decode_point(args.p), codec.decode_point(args.q)
    if args.d is not None and args.d != len(p):
        raise ValueError(f"--d {args.d} does not match the anchors' dimension {len(p)}")
    fam = cover_pair(p, q, log=log)
    idx, vol = smallest_member(fam, log=log)
    record: Record = {
        "family": codec.encode_family(fam),
        "volumes": codec.encode_point(member_volumes(fam)),
        "smallest": idx,
        "smallest_volume": codec.encode_scalar(vol),
    }
    ok = True
    if args.verify:
        cert = check_family(fam, p, q, log=log)
        record["certificate"] = codec.encode_family_certificate(cert)
        ok = cert.ok
    _emit([record], args, out)
    return 0 if ok else 1


def _cmd_coverflat(args: argparse.Namespace, out: TextIO) -> int:
    log = _logger(args)
    if args.fixture is not None:
        flat = FIXTURES[args.fixture]()
    else:
        if args.d is None or args.k is None:
            raise ValueError("--random needs --d and --k")
        flat = random_flat(args.d, args.k, random.Random(args.seed))
    fam = cover_flat(flat, log=log)
    counts = gamma_delta(flat.order, flat.dimension)
    record: Record = {
        "flat": codec.encode_flat(flat),
        "family": codec.encode_family(fam),
        "gamma": counts.gamma,
        "delta": counts.delta,
    }
    ok = True
    if args.verify:
        cert = verify_cover(fam.members, fam.delta, dimension=flat.dimension, log=log)
        record["certificate"] = codec.encode_cover_certificate(cert)
        ok = cert.ok
    _emit([record], args, out)
    return 0 if ok else 1


def _load_points(path: Path) -> list[tuple[Fraction, ...]]:
    data = json.loads(path.read_text())
    if isinstance(data, dict):
        data = data["points"]
    return [codec.decode_point(p) for p in data]


def _cmd_depth(args: argparse.Namespace, out: TextIO) -> int:
    pts = _load_points(Path(args.set))
    if args.kind == "point":
        query = codec.decode_point(args.query)
        witness = tukey_depth_witness(pts, query)
        record: Record = {"query": codec.encode_point(query)}
    else:
        flat = AffineFlat(codec.decode_point(args.base), tuple(codec.decode_point(v) for v in args.direction))
        witness = flat_depth_witness(pts, flat)
        record = {"flat": codec.encode_line(flat)}
    record.update(codec.encode_depth_witness(witness))
    record["count"] = halfspace_count(pts, witness.halfspace)
    _emit([record], args, out)
    return 0


def _lines_for(args: argparse.Namespace, params: GridParams) -> Iterable[AffineFlat]:
    if args.lines == "pairs":
        lines: Iterable[AffineFlat] = grid_pair_lines(params)
        return itertools.islice(lines, args.count) if args.count is not None else lines
    if args.lines == "axis":
        return axis_lines(params)
    return random_lines(params, args.count if args.count is not None else 100, random.Random(args.seed))


def _cmd_shallow(args: argparse.Namespace, out: TextIO) -> int:
    params = GridParams(args.d, args.m)
    settings = PipelineSettings(max_retries=args.retries, depth_limit=args.depth_limit)
    lines = _lines_for(args, params)
    report = line_depth_sweep(params, lines, settings=settings, threads=args.threads, log=_logger(args))
    records: list[Record] = [{"index": r.index, **codec.encode_line_certificate(r.certificate)} for r in report.rows]
    ratio = report.max_depth_ratio
    if not args.csv:
        records.append(
            {
                "summary": True,
                "d": params.d,
                "m": params.m,
                "n": params.n,
                "lines": len(report.rows),
                "max_depth": report.max_depth,
                "max_depth_ratio": None if ratio is None else codec.encode_scalar(ratio),
                "max_count": report.max_count,
                "failed": [r.index for r in report.failed],
                "ok": report.ok,
            }
        )
    _emit(records, args, out)
    return 0 if report.ok else 1


def _suite_cover(rng: random.Random, log: Logger) -> Record:
    checked = 0
    failures: list[str] = []
    for d in range(2, 6):
        for _ in range(100):
            p, q = (tuple(Fraction(rng.randint(0, 12), 12) for _ in range(d)) for _ in range(2))
            fam = cover_pair(p, q, log=log)
            cert = check_family(fam, p, q, log=log)
            vols = member_volumes(fam)
            checked += 1
            if not cert.ok:
                failures.append(f"d={d} {p} {q}: {cert.failure}")
            elif sum(vols) != d - 1 or min(vols) > Fraction(2, d + 2):
                failures.append(f"d={d} {p} {q}: volumes {vols}")
    return {"checked": checked, "failures": failures}


def _suite_agreement(rng: random.Random, log: Logger) -> Record:
    checked = 0
    failures: list[str] = []
    for d in (2, 3):
        params = GridParams(d, 4)
        grid = [grid_point(params, idx) for idx in indices(params)]
        subsets = [frozenset(c) for size in range(1, d + 1) for c in itertools.combinations(range(d + 1), size)]
        for idx in indices(params):
            if min(idx) < 1:
                continue
            a = grid_point(params, idx)
            far = [x for x in grid if c_far(params, x, a, 1)]
            for chosen in subsets:
                s = signed_coefficients(d, chosen)
                if sum(s) != 0 or not all(1 <= abs(si) <= d for si in s):
                    failures.append(f"coefficients {s} for {sorted(chosen)}")
                stair = StairHalfspace(a, chosen)
                euclid = agreeing_halfspace(a, chosen)
                for x in far:
                    checked += 1
                    if stair.contains(x) != euclid.contains(x):
                        failures.append(f"d={d} a={idx} I={sorted(chosen)} x={x}")
    log.message("Agreement: %d far grid points checked", checked)
    return {"checked": checked, "failures": failures[:20]}


def _suite_crossing(rng: random.Random, log: Logger) -> Record:
    checked = 0
    failures: list[str] = []
    for d, m in ((2, 3), (2, 4), (3, 3), (3, 4)):
        params = GridParams(d, m)
        for a, b in layer_pairs(params):
            checked += 1
            if not crossing_stays_close(params, a, b):
                failures.append(f"d={d} m={m} {a} {b}")
    return {"checked": checked, "failures": failures[:20]}


def _suite_depth(rng: random.Random, log: Logger) -> Record:
    checked = 0
    failures: list[str] = []
    for _ in range(500):
        pts = [(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))) for _ in range(rng.randint(1, 30))]
        x = (Fraction(rng.randint(-6, 6), 2), Fraction(rng.randint(-6, 6), 2))
        checked += 1
        if tukey_depth(pts, x) != sweep_depth_2d(pts, x):
            failures.append(f"{pts} {x}")
    return {"checked": checked, "failures": failures}


def _suite_flats(rng: random.Random, log: Logger) -> Record:
    checked = 0
    failures: list[str] = []
    flats = [make() for make in dict.fromkeys(FIXTURES.values())]
    flats += [random_flat(d, k, rng) for d in range(2, 5) for k in range(1, d) for _ in range(3)]
    for flat in flats:
        fam = cover_flat(flat, log=log)
        cert = verify_cover(fam.members, fam.delta, dimension=flat.dimension, log=log)
        checked += 1
        if not cert.ok or len(fam) != gamma_delta(flat.order, flat.dimension).gamma:
            failures.append(str(codec.encode_flat(flat)))
    return {"checked": checked, "failures": failures}


SUITES: dict[str, Callable[[random.Random, Logger], Record]] = {
    "cover": _suite_cover,
    "agreement": _suite_agreement,
    "crossing": _suite_crossing,
    "depth": _suite_depth,
    "flats": _suite_flats,
}

SUITE_ALIASES = {"lemma1": "crossing", "lemma4": "agreement"}


def _cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    log = _logger(args)
    names = list(SUITES) if args.suite == "all" else [SUITE_ALIASES.get(args.suite, args.suite)]
    records: list[Record] = []
    for name in names:
        result = SUITES[name](random.Random(args.seed), log)
        records.append({"suite": name, "ok": not result["failures"], **result})
    _emit(records, args, out)
    return 0 if all(r["ok"] for r in records) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stairdepth", description="Stair-convexity and shallow halfspaces for lines")
    parser.add_argument("-v", "--verbose", action="store_true", help="Write progress messages to standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    grid = sub.add_parser("grid", help="List the points of the stretched grid")
    grid.add_argument("--d", type=int, required=True)
    grid.add_argument("--m", type=int, required=True)
    grid.add_argument("--emit", choices=("json", "csv"), default="json")
    grid.set_defaults(run=_cmd_grid)

    cover = sub.add_parser("cover", help="Build the two-point covering family")
    cover.add_argument("--d", type=int)
    cover.add_argument("--p", required=True, help="Comma-separated rationals, e.g. 1/3,2/3")
    cover.add_argument("--q", required=True)
    cover.add_argument("--verify", action="store_true")
    cover.add_argument("--csv", action="store_true")
    cover.set_defaults(run=_cmd_cover)

    coverflat = sub.add_parser("coverflat", help="Build the covering family of a stair-flat")
    which = coverflat.add_mutually_exclusive_group(required=True)
    which.add_argument("--fixture", choices=sorted(FIXTURES))
    which.add_argument("--random", action="store_true")
    coverflat.add_argument("--d", type=int)
    coverflat.add_argument("--k", type=int)
    coverflat.add_argument("--seed", type=int, default=0)
    coverflat.add_argument("--verify", action="store_true")
    coverflat.add_argument("--csv", action="store_true")
    coverflat.set_defaults(run=_cmd_coverflat)

    depth = sub.add_parser("depth", help="Exact Tukey depth of a point or a flat")
    depth.add_argument("kind", choices=("point", "flat"))
    depth.add_argument("--set", required=True, help="JSON file holding a list of points")
    depth.add_argument("--query", help="The query point (for 'point')")
    depth.add_argument("--base", help="A point of the flat (for 'flat')")
    depth.add_argument("--direction", action="append", default=[], help="A direction of the flat; repeatable")
    depth.add_argument("--csv", action="store_true")
    depth.set_defaults(run=_cmd_depth)

    shallow = sub.add_parser(
        "shallow", aliases=["theorem1"], help="Run the shallow-halfspace pipeline over a family of lines"
    )
    shallow.add_argument("--d", type=int, required=True)
    shallow.add_argument("--m", type=int, required=True)
    shallow.add_argument("--lines", choices=("pairs", "random", "axis"), default="pairs")
    shallow.add_argument("--count", type=int)
    shallow.add_argument("--seed", type=int, default=0)
    shallow.add_argument("--retries", type=int, default=PipelineSettings.max_retries)
    shallow.add_argument("--depth-limit", type=int, default=PipelineSettings.depth_limit)
    shallow.add_argument("--threads", type=int)
    shallow.add_argument("--csv", action="store_true")
    shallow.set_defaults(run=_cmd_shallow)

    verify = sub.add_parser("verify", help="Run exhaustive and randomized self-checks")
    verify.add_argument("--suite", choices=("all", *SUITES, *SUITE_ALIASES), default="all")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--csv", action="store_true")
    verify.set_defaults(run=_cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None, *, out: TextIO | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "depth":
        if args.kind == "point" and args.query is None:
            parser.error("depth point needs --query")
        if args.kind == "flat" and args.base is None:
            parser.error("depth flat needs --base")
    try:
        return args.run(args, out if out is not None else sys.stdout)
    except ValueError as e:
        print(f"stairdepth: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
