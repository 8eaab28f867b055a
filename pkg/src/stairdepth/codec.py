"""
JSON encoding of the package's objects. Rationals become ``"p/q"`` strings (plain
decimal strings when integral), points become arrays of those, and every region
or flat carries a ``"kind"``. Records are plain ``dict`` objects ready for
`json.dumps`; `dumps` fixes the key order so equal inputs give equal bytes.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence, TextIO

from .covering import CoveringFamily, FamilyCertificate
from .depth import AffineFlat, DepthWitness, EuclideanHalfspace
from .flats import Cylinder, Diagonal, Extrusion, FullSpace, HalfStairFlat, Horizontal, PointFlat, StairFlat, Vertical
from .interfaces import IRegion
from .pipeline import LineCertificate
from .stair import CoverCertificate, StairHalfspace
from .util import Point, ScalarLike, as_scalar

Record = dict[str, Any]


class DecodeError(ValueError):
    """
    Exception raised when a JSON document does not describe the expected object.
    """


def encode_scalar(x: Fraction | int) -> str:
    return str(x)


def decode_scalar(s: ScalarLike) -> Fraction:
    try:
        return as_scalar(s)
    except (ValueError, ZeroDivisionError) as e:
        raise DecodeError(f"Not an exact rational: {s!r}") from e


def encode_point(p: Iterable[Fraction | int]) -> list[str]:
    return [encode_scalar(c) for c in p]


def decode_point(obj: Any) -> Point:
    if isinstance(obj, str):
        obj = [part for part in obj.split(",") if part.strip()]
    if not isinstance(obj, (list, tuple)):
        raise DecodeError(f"Expected a list of coordinates, got {obj!r}")
    return tuple(decode_scalar(c) for c in obj)


def _optional(x: Fraction | None) -> str | None:
    return None if x is None else encode_scalar(x)


def _kind(obj: Mapping[str, Any], *expected: str) -> str:
    kind = obj.get("kind")
    if kind not in expected:
        raise DecodeError(f"Expected one of {expected}, got kind {kind!r}")
    return kind


def encode_region(region: IRegion) -> Record:
    if isinstance(region, StairHalfspace):
        return {"kind": "stair", "vertex": encode_point(region.vertex), "index_set": sorted(region.index_set)}
    if isinstance(region, Cylinder):
        return {"kind": "cylinder", "base": encode_region(region.base)}
    if isinstance(region, Extrusion):
        base = encode_region(region.base)
        return {"kind": "extrusion", "base": base, "z": encode_scalar(region.z), "upper": region.upper}
    raise TypeError(f"Cannot encode region of type {type(region).__name__}")


def decode_region(obj: Mapping[str, Any]) -> IRegion:
    kind = obj.get("kind", "stair")
    if kind == "stair":
        return StairHalfspace(decode_point(obj["vertex"]), frozenset(int(i) for i in obj["index_set"]))
    if kind == "cylinder":
        return Cylinder(decode_region(obj["base"]))
    if kind == "extrusion":
        return Extrusion(decode_region(obj["base"]), decode_scalar(obj["z"]), bool(obj.get("upper", False)))
    raise DecodeError(f"Unknown region kind {kind!r}")


def encode_flat(f: StairFlat | HalfStairFlat) -> Record:
    if isinstance(f, PointFlat):
        return {"kind": "point", "point": encode_point(f.point)}
    if isinstance(f, FullSpace):
        return {"kind": "full", "d": f.d}
    if isinstance(f, Horizontal):
        return {"kind": "horizontal", "base": encode_flat(f.base), "z": encode_scalar(f.z)}
    if isinstance(f, Vertical):
        return {"kind": "vertical", "base": encode_flat(f.base)}
    if isinstance(f, Diagonal):
        return {
            "kind": "diagonal",
            "boundary": encode_flat(f.boundary),
            "half": encode_flat(f.half),
            "z": encode_scalar(f.z),
        }
    return {
        "kind": "half",
        "carrier": encode_flat(f.carrier),
        "boundary": encode_flat(f.boundary),
        "witnesses": [encode_point(w) for w in f.witnesses],
    }


def decode_flat(obj: Mapping[str, Any]) -> StairFlat:
    kind = _kind(obj, "point", "full", "horizontal", "vertical", "diagonal")
    if kind == "point":
        return PointFlat(decode_point(obj["point"]))
    if kind == "full":
        return FullSpace(int(obj["d"]))
    if kind == "horizontal":
        return Horizontal(decode_flat(obj["base"]), decode_scalar(obj["z"]))
    if kind == "vertical":
        return Vertical(decode_flat(obj["base"]))
    return Diagonal(decode_flat(obj["boundary"]), decode_half(obj["half"]), decode_scalar(obj["z"]))


def decode_half(obj: Mapping[str, Any]) -> HalfStairFlat:
    _kind(obj, "half")
    witnesses = tuple(decode_point(w) for w in obj["witnesses"])
    return HalfStairFlat(decode_flat(obj["carrier"]), decode_flat(obj["boundary"]), witnesses)


def encode_halfspace(h: EuclideanHalfspace) -> Record:
    return {"normal": encode_point(h.normal), "offset": encode_scalar(h.offset)}


def decode_halfspace(obj: Mapping[str, Any]) -> EuclideanHalfspace:
    return EuclideanHalfspace(decode_point(obj["normal"]), decode_scalar(obj["offset"]))


def encode_line(f: AffineFlat) -> Record:
    return {"base": encode_point(f.base), "directions": [encode_point(v) for v in f.directions]}


def decode_line(obj: Mapping[str, Any]) -> AffineFlat:
    return AffineFlat(decode_point(obj["base"]), tuple(decode_point(v) for v in obj.get("directions", ())))


def encode_family(fam: CoveringFamily) -> Record:
    return {
        "members": [encode_region(m) for m in fam.members],
        "delta": fam.delta,
        "anchors": [encode_point(a) for a in fam.anchors],
    }


def decode_family(obj: Mapping[str, Any]) -> CoveringFamily:
    return CoveringFamily(
        tuple(decode_region(m) for m in obj["members"]),
        int(obj["delta"]),
        tuple(decode_point(a) for a in obj.get("anchors", ())),
    )


def encode_cover_certificate(cert: CoverCertificate) -> Record:
    return {
        "ok": cert.ok,
        "delta": cert.delta,
        "cells_checked": cert.cells_checked,
        "violation": None if cert.violation is None else encode_point(cert.violation),
        "observed": cert.observed,
    }


def encode_family_certificate(cert: FamilyCertificate) -> Record:
    return {
        "ok": cert.ok,
        "cover": encode_cover_certificate(cert.cover),
        "failure": cert.failure,
        "member": cert.member,
    }


def encode_depth_witness(w: DepthWitness) -> Record:
    return {"depth": w.depth, "halfspace": encode_halfspace(w.halfspace)}


def encode_line_certificate(cert: LineCertificate) -> Record:
    out: Record = {
        "line": encode_line(cert.line),
        "n": cert.n,
        "trivial": cert.trivial,
        "first": encode_halfspace(cert.first),
        "final": encode_halfspace(cert.final),
        "count_first": cert.count_first,
        "count_final": cert.count_final,
        "ratio": encode_scalar(cert.ratio),
        "budget": encode_scalar(cert.budget),
        "within_budget": cert.within_budget,
        "depth": cert.depth,
        "ok": cert.ok,
        "failures": list(cert.failures),
        "retries": cert.retries,
        "widened": cert.widened,
        "candidates": cert.candidates,
    }
    if cert.trivial:
        return out
    assert cert.segment is not None and cert.anchors is not None and cert.family is not None, "Incomplete certificate"
    assert cert.member is not None and cert.moved is not None and cert.vertex is not None, "Incomplete certificate"
    out.update(
        segment=[encode_point(p) for p in cert.segment],
        anchors=[encode_point(p) for p in cert.anchors],
        family=encode_family(cert.family),
        member_index=cert.member_index,
        member=encode_region(cert.member),
        member_volume=_optional(cert.member_volume),
        moved=encode_region(cert.moved),
        moved_volume=_optional(cert.moved_volume),
        moved_count=cert.moved_count,
        vertex=encode_point(cert.vertex),
    )
    return out


def dumps(record: Any) -> str:
    return json.dumps(record, sort_keys=True)


def write_jsonl(records: Iterable[Any], stream: TextIO) -> None:
    for rec in records:
        stream.write(dumps(rec))
        stream.write("\n")


def flatten(record: Mapping[str, Any], prefix: str = "") -> Record:
    """
    Flatten nested mappings into dotted keys. Lists are kept as compact JSON
    text so every value fits in one CSV cell.
    """
    out: Record = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            out.update(flatten(value, f"{name}."))
        elif isinstance(value, (list, tuple)):
            out[name] = json.dumps(value, sort_keys=True, separators=(",", ":"))
        else:
            out[name] = value
    return out


def write_csv(records: Sequence[Mapping[str, Any]], stream: TextIO) -> None:
    rows = [flatten(r) for r in records]
    fields = sorted({key for row in rows for key in row})
    writer = csv.DictWriter(stream, fieldnames=fields, restval="", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
