"""JSON documents for families and reports.

Rationals travel as ``"p/q"`` strings (bare integers are also read); any
float literal is rejected. A family document looks like::

    {"schema_version": 1, "ambient_dim": 2,
     "members": [{"id": "F1",
                  "domain": [[["0", "1"], ["0", "1"]]],
                  "domain_coords": [0],            # optional
                  "map": {"constant": ["1/2"]}}]}

``map`` is one of ``{"constant": values}``, ``{"affine": {"matrix", "offset"}}``,
``{"per_box": [{"matrix", "offset"}, ...]}`` (one affine map per domain box)
or ``{"vertices": [[point, values], ...]}`` listing the value at every
vertex of the implied grid triangulation.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cell_complex import (
    AffineMap,
    BoxUnion,
    EmptyDomainError,
    PiecewiseAffineGraph,
    affine_on_boxes,
    check_continuity,
    triangulate,
)
from .helly import Family

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    """Malformed input; the message names the problem."""


class _FloatLiteral(str):
    pass


def parse_rational(value) -> Fraction:
    if isinstance(value, _FloatLiteral) or isinstance(value, float):
        raise DocumentError(f"rationals must be exact p/q, got {value}")
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise DocumentError(f"rationals must be exact p/q, got {value!r}")
    text = str(value).strip()
    if not text or "." in text or "e" in text.lower():
        raise DocumentError(f"rationals must be exact p/q, got {value!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"rationals must be exact p/q, got {value!r}") from None


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def loads(text: str) -> Any:
    """``json.loads`` that keeps float literals recognisable for rejection."""
    return json.loads(text, parse_float=_FloatLiteral)


def dumps(doc: Any) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# families

def _rationals(seq, what: str) -> tuple:
    if not isinstance(seq, list):
        raise DocumentError(f"{what} must be a list")
    return tuple(parse_rational(v) for v in seq)


def _domain(raw) -> BoxUnion:
    if not isinstance(raw, list) or not raw:
        raise DocumentError("empty domain")
    boxes = []
    for box in raw:
        if not isinstance(box, list) or not box:
            raise DocumentError("each domain box is a list of [lo, hi] pairs")
        sides = []
        for side in box:
            if not isinstance(side, list) or len(side) != 2:
                raise DocumentError("each box side is a pair [lo, hi]")
            if any(v is None or (isinstance(v, str) and "inf" in v.lower()) for v in side):
                raise DocumentError("unbounded domain")
            lo, hi = parse_rational(side[0]), parse_rational(side[1])
            if not lo < hi:
                raise DocumentError(f"empty domain box side [{lo}, {hi}]")
            sides.append((lo, hi))
        boxes.append(tuple(sides))
    dims = {len(b) for b in boxes}
    if len(dims) != 1:
        raise DocumentError("domain boxes differ in dimension")
    return BoxUnion(dims.pop(), tuple(boxes))


def _affine(raw) -> AffineMap:
    if not isinstance(raw, dict) or "matrix" not in raw or "offset" not in raw:
        raise DocumentError("an affine map needs 'matrix' and 'offset'")
    matrix = tuple(_rationals(row, "matrix row") for row in raw["matrix"])
    offset = _rationals(raw["offset"], "offset")
    if len(matrix) != len(offset):
        raise DocumentError("matrix and offset disagree on the range dimension")
    return AffineMap(matrix, offset)


def parse_member(raw: dict) -> tuple:
    if not isinstance(raw, dict):
        raise DocumentError("a member is an object")
    ident = str(raw.get("id", ""))
    domain = _domain(raw.get("domain"))
    coords = tuple(int(c) for c in raw.get("domain_coords", ()))
    form_doc = raw.get("map", {"constant": []})
    if not isinstance(form_doc, dict) or len(form_doc) != 1:
        raise DocumentError("map must have exactly one of constant, affine, per_box, vertices")
    (form, body), = form_doc.items()
    n = domain.ambient_dim
    try:
        if form == "constant":
            graph = PiecewiseAffineGraph.constant(domain, _rationals(body, "constant"), coords)
        elif form == "affine":
            amap = _affine(body)
            graph = PiecewiseAffineGraph.affine(domain, amap.matrix, amap.offset, coords)
        elif form == "per_box":
            maps = [_affine(m) for m in body]
            if len(maps) != len(domain.boxes):
                raise DocumentError("per_box needs one map per domain box")
            tri = triangulate(domain)
            chosen = []
            for s in tri.simplices:
                c = tri.barycenter(s)
                chosen.append(next(m for b, m in zip(domain.boxes, maps) if b.contains(c)))
            graph = PiecewiseAffineGraph.from_simplex_maps(domain, chosen, coords)
        elif form == "vertices":
            values = {}
            for entry in body:
                if not isinstance(entry, list) or len(entry) != 2:
                    raise DocumentError("each vertex entry is [point, values]")
                point, val = entry
                values[_rationals(point, "vertex")] = _rationals(val, "vertex value")
            graph = PiecewiseAffineGraph.from_vertex_values(domain, values, coords)
        else:
            raise DocumentError(f"unknown map form {form!r}")
    except EmptyDomainError:
        raise DocumentError("empty domain") from None
    except DocumentError:
        raise
    except (ValueError, TypeError) as exc:
        raise DocumentError(f"member {ident or '?'}: {exc}") from None
    if any(len(m.matrix) and len(m.matrix[0]) != n for m in graph.maps):
        raise DocumentError("map matrix width must equal the domain dimension")
    if not check_continuity(graph):
        raise DocumentError("discontinuous map")
    return ident, graph


def parse_family(doc) -> Family:
    if isinstance(doc, str):
        doc = loads(doc)
    if not isinstance(doc, dict):
        raise DocumentError("a family document is an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {version!r}")
    members = doc.get("members")
    if not isinstance(members, list) or not members:
        raise DocumentError("members must be a nonempty list")
    parsed = [parse_member(m) for m in members]
    ids = tuple(i or f"F{k + 1}" for k, (i, _) in enumerate(parsed))
    if len(set(ids)) != len(ids):
        raise DocumentError("member ids must be distinct")
    graphs = tuple(g for _, g in parsed)
    dim = doc.get("ambient_dim")
    for g in graphs:
        if g.ambient_dim != dim:
            raise DocumentError(f"member lives in R^{g.ambient_dim}, document says R^{dim}")
    try:
        return Family(dim, graphs, ids)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def _map_json(a: AffineMap) -> dict:
    return {"matrix": [[format_rational(x) for x in row] for row in a.matrix],
            "offset": [format_rational(x) for x in a.offset]}


def member_json(ident: str, g: PiecewiseAffineGraph) -> dict:
    out = {
        "id": ident,
        "domain": [[[format_rational(lo), format_rational(hi)] for lo, hi in b.bounds]
                   for b in g.domain.boxes],
    }
    if g.domain_coords != tuple(range(g.domain_dim)):
        out["domain_coords"] = list(g.domain_coords)
    if g.constant_tag is not None:
        out["map"] = {"constant": [format_rational(v) for v in g.constant_tag]}
    elif len(set(g.maps)) == 1:
        out["map"] = {"affine": _map_json(g.maps[0])}
    else:
        per_box = affine_on_boxes(g)
        if per_box is not None and PiecewiseAffineGraph.from_simplex_maps(
                g.domain, _per_simplex(g, per_box), g.domain_coords) == g:
            out["map"] = {"per_box": [_map_json(m) for m in per_box]}
        else:
            values = g.vertex_values()
            out["map"] = {"vertices": [
                [[format_rational(x) for x in p], [format_rational(v) for v in values[p]]]
                for p in sorted(values)
            ]}
    return out


def _per_simplex(g: PiecewiseAffineGraph, per_box) -> list:
    tri = g.triangulation
    out = []
    for s in tri.simplices:
        c = tri.barycenter(s)
        out.append(next(m for b, m in zip(g.domain.boxes, per_box) if b.contains(c)))
    return out


def family_json(fam: Family) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "ambient_dim": fam.ambient_dim,
        "members": [member_json(i, g) for i, g in zip(fam.ids, fam.members)],
    }


def single_member(fam: Family) -> PiecewiseAffineGraph:
    if fam.size != 1:
        raise DocumentError("this command expects a document with exactly one member")
    return fam.members[0]

