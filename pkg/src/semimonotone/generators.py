"""Deterministic instance generators for families of monotone graphs."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .cell_complex import BoxUnion, PiecewiseAffineGraph
from .helly import Family
from .predicates import is_semi_monotone

KINDS = (
    "nested_boxes",
    "random_staircase_semimonotone",
    "random_affine_graphs",
    "disconnected_pair",
    "minimal_empty_triple",
)

_SLOPES = (Fraction(-1), Fraction(0), Fraction(0), Fraction(1), Fraction(2), Fraction(1, 2))


def _set(union: BoxUnion) -> PiecewiseAffineGraph:
    """An open set viewed as the graph of a map into ``R^0``."""
    return PiecewiseAffineGraph.constant(union, ())


def nested_boxes(rng: random.Random, s: int = 3, dim: int = 2) -> Family:
    bounds = [(Fraction(0), Fraction(rng.randint(4, 8))) for _ in range(dim)]
    members = []
    for _ in range(s):
        members.append(_set(BoxUnion(dim, ((tuple(bounds)),))))
        shrunk = []
        for lo, hi in bounds:
            w = hi - lo
            shrunk.append((lo + w * Fraction(rng.randint(0, 3), 16),
                           hi - w * Fraction(rng.randint(0, 3), 16)))
        bounds = shrunk
    return Family(dim, tuple(members))


def _staircase_boxes(rng: random.Random, dim: int, pieces: int, ascending: bool) -> list:
    lo = [0] * dim
    hi = [rng.randint(2, 4) for _ in range(dim)]
    boxes = [(tuple(lo), tuple(hi))]
    for _ in range(pieces - 1):
        nlo, nhi = [], []
        for axis in range(dim):
            a, b = lo[axis], hi[axis]
            if axis == 0 or ascending:
                na = rng.randint(a + 1, b - 1)
                nb = b + rng.randint(1, 3)
            else:
                nb = rng.randint(a + 1, b - 1)
                na = a - rng.randint(1, 3)
            nlo.append(na)
            nhi.append(max(nb, na + 2))
        lo, hi = nlo, nhi
        boxes.append((tuple(lo), tuple(hi)))
    return boxes


def random_staircase(rng: random.Random, dim: int, anchor: tuple,
                     max_pieces: int = 3) -> BoxUnion:
    """A chain of overlapping boxes stepping monotonically, translated to cover ``anchor``.

    Retries until the union is verified semi-monotone.
    """
    for _ in range(100):
        raw = _staircase_boxes(rng, dim, rng.randint(1, max_pieces), rng.random() < 0.5)
        lo, hi = raw[rng.randrange(len(raw))]
        # place anchor strictly inside the chosen box
        shift = []
        for axis in range(dim):
            target = rng.randint(lo[axis], hi[axis] - 1) + Fraction(1, 2)
            shift.append(anchor[axis] - target)
        boxes = tuple(
            tuple((Fraction(l) + sh, Fraction(h) + sh) for l, h, sh in zip(blo, bhi, shift))
            for blo, bhi in raw
        )
        union = BoxUnion(dim, boxes)
        if is_semi_monotone(union).verdict:
            return union
    raise RuntimeError("could not produce a semi-monotone staircase")


def random_staircase_family(rng: random.Random, s: int = 3, dim: int = 2,
                            max_pieces: int = 3) -> Family:
    anchor = tuple(Fraction(0) for _ in range(dim))
    members = tuple(_set(random_staircase(rng, dim, anchor, max_pieces)) for _ in range(s))
    return Family(dim, members)


def _interval_around(rng, center) -> tuple:
    return (center - rng.randint(1, 3), center + rng.randint(1, 3))


def _affine_member(rng: random.Random, dim: int, p: tuple, flat: int) -> PiecewiseAffineGraph:
    """A box or an affine graph through ``p`` containing ``p + span(e_0..e_{flat-1})``."""
    kinds = ["box"] if dim == 1 or flat == dim else ["box", "graph", "graph", "graph"]
    kind = rng.choice(kinds)
    if kind == "box":
        return _set(BoxUnion(dim, (tuple(_interval_around(rng, c) for c in p),)))
    n = rng.randint(max(1, flat), dim - 1)
    coords = tuple(range(flat)) + tuple(sorted(rng.sample(range(flat, dim), n - flat)))
    rest = [c for c in range(dim) if c not in coords]
    domain = BoxUnion(n, (tuple(_interval_around(rng, p[c]) for c in coords),))
    matrix, offset = [], []
    for r in rest:
        row = [Fraction(0) if c < flat else rng.choice(_SLOPES) for c in coords]
        matrix.append(row)
        offset.append(p[r] - sum(a * p[c] for a, c in zip(row, coords)))
    return PiecewiseAffineGraph.affine(domain, matrix, offset, coords)


def random_affine_graphs(rng: random.Random, s: int = 3, dim: int = 2) -> Family:
    """Boxes and affine graphs over boxes, all through one common rational point.

    A random number of leading axes are kept free in every member, so the
    common intersection has dimension at least that number.
    """
    p = tuple(Fraction(rng.randint(0, 4)) + Fraction(rng.randint(0, 3), 4) for _ in range(dim))
    flat = rng.randint(0, dim - 1)
    members = tuple(_affine_member(rng, dim, p, flat) for _ in range(s))
    return Family(dim, members)


def _thick_segment(a, b, half: int) -> tuple:
    return tuple((Fraction(min(u, v) - half), Fraction(max(u, v) + half)) for u, v in zip(a, b))


def _staircase_path(start, first_horizontal: bool, segments: int, step: int) -> list:
    pts = [start]
    x, y = start
    horizontal = first_horizontal
    for _ in range(segments):
        if horizontal:
            x += step
        else:
            y += step
        pts.append((x, y))
        horizontal = not horizontal
    return pts


def disconnected_pair(m: int = 2) -> Family:
    """Two thickened staircase paths, tread-first and riser-first, crossing ``m`` times."""
    if m < 1:
        raise ValueError("m must be positive")
    step, half = 8, 1
    a = _staircase_path((0, 0), True, m, step)
    d = _staircase_path((step // 2, -step // 2), False, m, step)
    A = BoxUnion(2, tuple(_thick_segment(u, v, half) for u, v in zip(a, a[1:])))
    D = BoxUnion(2, tuple(_thick_segment(u, v, half) for u, v in zip(d, d[1:])))
    return Family(2, (_set(A), _set(D)), ("ascending", "descending"))


def minimal_empty_triple() -> Family:
    """Three semi-monotone sets in the plane: pairwise meeting, no common point."""
    L = BoxUnion.from_bounds([(0, 3), (0, 1)], [(0, 1), (0, 3)])
    B = BoxUnion.from_bounds([(2, 3), (0, 3)])
    C = BoxUnion.from_bounds([(0, 3), (2, 3)])
    return Family(2, (_set(L), _set(B), _set(C)), ("L", "right", "top"))


def generate(kind: str, params: Optional[dict] = None, seed: int = 0) -> Family:
    params = dict(params or {})
    rng = random.Random(seed)
    s = int(params.get("s", 3))
    dim = int(params.get("dim", 2))
    if s < 1 or s > 12:
        raise ValueError("s must lie in 1..12")
    if not 1 <= dim <= 4:
        raise ValueError("dim must lie in 1..4")
    if kind == "nested_boxes":
        return nested_boxes(rng, s, dim)
    if kind == "random_staircase_semimonotone":
        return random_staircase_family(rng, s, dim, int(params.get("max_pieces", 3)))
    if kind == "random_affine_graphs":
        return random_affine_graphs(rng, s, dim)
    if kind == "disconnected_pair":
        return disconnected_pair(int(params.get("m", 2)))
    if kind == "minimal_empty_triple":
        return minimal_empty_triple()
    raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def random_graph_candidate(rng: random.Random) -> PiecewiseAffineGraph:
    """A small piecewise-affine graph in R^2 or R^3 that is usually monotone.

    Callers that need a monotone graph must still verify it.
    """
    kind = rng.choice(("curve", "curve", "surface", "set"))
    if kind == "curve":
        cuts = sorted(rng.sample(range(0, 7), rng.randint(2, 4)))
        # nested intervals sharing the left end: a connected domain with interior grid points
        domain = BoxUnion(1, tuple(((Fraction(cuts[0]), Fraction(b)),) for b in cuts[1:]))
        k = rng.randint(1, 2)
        tri_points = sorted({(Fraction(c),) for c in cuts})
        columns = []
        for _ in range(k):
            vals = sorted(rng.sample(range(-6, 7), len(tri_points)))
            if rng.random() < 0.5:
                vals.reverse()
            columns.append(vals)
        values = {p: tuple(Fraction(col[i]) for col in columns) for i, p in enumerate(tri_points)}
        return PiecewiseAffineGraph.from_vertex_values(domain, values)
    if kind == "surface":
        lo = [rng.randint(0, 2) for _ in range(2)]
        hi = [a + rng.randint(1, 3) for a in lo]
        domain = BoxUnion(2, (tuple((Fraction(a), Fraction(b)) for a, b in zip(lo, hi)),))
        a, b = rng.choice(_SLOPES), rng.choice(_SLOPES)
        bend = Fraction(rng.randint(0, 2), 2)

        def f(p):
            x, y = p
            return (a * x + b * y + bend * max(x - lo[0], y - lo[1]),)

        return PiecewiseAffineGraph.from_function(domain, f, 1)
    anchor = (Fraction(0), Fraction(0))
    return _set(random_staircase(rng, 2, anchor, 3))
