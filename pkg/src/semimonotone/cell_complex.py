"""Box unions, Kuhn triangulations, piecewise-affine graphs and piece sets.

A :class:`PieceSet` is a finite union of relatively open convex pieces, each a
:class:`ConstraintSystem` written with ``=`` and ``<`` only. It carries a
``structure`` tag that the connectivity engine exploits:

``"faces"``
    pieces are pairwise disjoint and whenever a piece meets the closure of
    another it lies inside that closure (relatively open faces of a
    triangulation, and refinements of such).
``"cover"``
    every piece is open relative to the union (e.g. graphs over the open
    boxes of a domain on which the map is affine).
``"general"``
    no extra promise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .rational_linear import (
    EQ,
    LE,
    LT,
    ConstraintSystem,
    LinearConstraint,
    as_rational,
    coordinate_constraint,
    is_feasible,
    solve_square,
)

_ZERO = Fraction(0)

FACES = "faces"
COVER = "cover"
GENERAL = "general"


class EmptyDomainError(ValueError):
    pass


class ContinuityError(ValueError):
    pass


@dataclass(frozen=True)
class Box:
    """Open axis-aligned box, one ``(lo, hi)`` interval per axis."""

    bounds: tuple

    def __post_init__(self):
        clean = tuple((as_rational(lo), as_rational(hi)) for lo, hi in self.bounds)
        for lo, hi in clean:
            if not lo < hi:
                raise ValueError(f"empty box side ({lo}, {hi})")
        object.__setattr__(self, "bounds", clean)

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def contains(self, point) -> bool:
        return all(lo < x < hi for (lo, hi), x in zip(self.bounds, point))

    def volume(self) -> Fraction:
        v = Fraction(1)
        for lo, hi in self.bounds:
            v *= hi - lo
        return v

    def system(self) -> ConstraintSystem:
        return ConstraintSystem.box(self.bounds)


@dataclass(frozen=True)
class BoxUnion:
    ambient_dim: int
    boxes: tuple = ()

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be positive")
        boxes = tuple(b if isinstance(b, Box) else Box(tuple(b)) for b in self.boxes)
        for b in boxes:
            if b.dim != self.ambient_dim:
                raise ValueError("box dimension does not match the union")
        object.__setattr__(self, "boxes", boxes)

    @classmethod
    def from_bounds(cls, *boxes):
        boxes = [Box(tuple(b)) for b in boxes]
        return cls(boxes[0].dim, tuple(boxes))

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    def contains(self, point) -> bool:
        return any(b.contains(point) for b in self.boxes)

    def axis_endpoints(self, axis: int) -> list:
        return sorted({v for b in self.boxes for v in b.bounds[axis]})

    def volume(self) -> Fraction:
        """Exact volume via the induced grid."""
        grids = [self.axis_endpoints(a) for a in range(self.ambient_dim)]
        total = Fraction(0)
        for cell in itertools.product(*(range(len(g) - 1) for g in grids)):
            center = [(g[i] + g[i + 1]) / 2 for g, i in zip(grids, cell)]
            if self.contains(center):
                v = Fraction(1)
                for g, i in zip(grids, cell):
                    v *= g[i + 1] - g[i]
                total += v
        return total

    def pieces(self) -> "PieceSet":
        """The boxes themselves, an open cover of the union."""
        return PieceSet(self.ambient_dim, tuple(b.system() for b in self.boxes), COVER)


@dataclass(frozen=True)
class Triangulation:
    vertices: tuple          # rational points
    simplices: tuple         # sorted vertex-index tuples of length n+1
    owner: BoxUnion

    @property
    def dim(self) -> int:
        return self.owner.ambient_dim

    def faces(self) -> list:
        """All faces (vertex-index tuples) of simplices, deduplicated, sorted."""
        seen = set()
        for s in self.simplices:
            for r in range(1, len(s) + 1):
                for f in itertools.combinations(s, r):
                    seen.add(f)
        return sorted(seen, key=lambda f: (len(f), f))

    def barycenter(self, face) -> tuple:
        m = len(face)
        return tuple(
            sum((self.vertices[v][a] for v in face), _ZERO) / m for a in range(self.dim)
        )

    def simplex_volume(self, simplex) -> Fraction:
        base = self.vertices[simplex[0]]
        rows = [[p - q for p, q in zip(self.vertices[v], base)] for v in simplex[1:]]
        return abs(_det(rows)) / _factorial(self.dim)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def triangulate(X: BoxUnion) -> Triangulation:
    """Kuhn subdivision of every grid cell inside ``X``.

    The grid on each axis is given by all distinct box endpoints; a cell with
    lower corner ``a`` and upper corner ``b`` contributes one simplex per
    permutation of the axes.
    """
    if X.is_empty:
        raise EmptyDomainError("empty domain")
    n = X.ambient_dim
    grids = [X.axis_endpoints(a) for a in range(n)]
    index: dict = {}
    vertices: list = []
    simplices = []

    def vid(p):
        if p not in index:
            index[p] = len(vertices)
            vertices.append(p)
        return index[p]

    for cell in itertools.product(*(range(len(g) - 1) for g in grids)):
        lo = [g[i] for g, i in zip(grids, cell)]
        hi = [g[i + 1] for g, i in zip(grids, cell)]
        center = [(a + b) / 2 for a, b in zip(lo, hi)]
        if not X.contains(center):
            continue
        for perm in itertools.permutations(range(n)):
            p = list(lo)
            chain = [vid(tuple(p))]
            for axis in perm:
                p[axis] = hi[axis]
                chain.append(vid(tuple(p)))
            simplices.append(tuple(sorted(chain)))
    # canonical vertex order: lexicographic on coordinates
    order = sorted(range(len(vertices)), key=lambda i: vertices[i])
    relabel = {old: new for new, old in enumerate(order)}
    verts = tuple(vertices[i] for i in order)
    simps = tuple(sorted(tuple(sorted(relabel[v] for v in s)) for s in simplices))
    return Triangulation(verts, simps, X)


@dataclass(frozen=True)
class AffineMap:
    """``x -> A x + b`` with ``A`` a k-by-n tuple of rows."""

    matrix: tuple
    offset: tuple

    def __call__(self, x) -> tuple:
        return tuple(
            sum((a * xi for a, xi in zip(row, x)), _ZERO) + b
            for row, b in zip(self.matrix, self.offset)
        )

    @classmethod
    def constant(cls, n: int, values) -> "AffineMap":
        values = tuple(as_rational(v) for v in values)
        return cls(tuple((_ZERO,) * n for _ in values), values)

    @classmethod
    def from_rows(cls, matrix, offset) -> "AffineMap":
        return cls(
            tuple(tuple(as_rational(a) for a in row) for row in matrix),
            tuple(as_rational(b) for b in offset),
        )


def _fit_affine(points, values, k: int) -> AffineMap:
    """Affine map through ``n+1`` affinely independent points."""
    n = len(points[0])
    rows = [list(p) + [Fraction(1)] for p in points]
    matrix, offset = [], []
    for comp in range(k):
        sol = solve_square(rows, [v[comp] for v in values])
        if sol is None:
            raise ValueError("degenerate simplex")
        matrix.append(tuple(sol[:n]))
        offset.append(sol[n])
    return AffineMap(tuple(matrix), tuple(offset))


@dataclass(frozen=True)
class PiecewiseAffineGraph:
    """Graph of a continuous piecewise-affine map over a box union.

    The graph lives in ``R^(n+k)``; the domain variables occupy the ambient
    coordinates ``domain_coords`` and the map's components fill the remaining
    coordinates in increasing order.
    """

    domain: BoxUnion
    triangulation: Triangulation
    maps: tuple                      # one AffineMap per simplex
    range_dim: int
    domain_coords: tuple = ()
    constant_tag: Optional[tuple] = None

    def __post_init__(self):
        n = self.domain.ambient_dim
        if not self.domain_coords:
            object.__setattr__(self, "domain_coords", tuple(range(n)))
        if len(self.domain_coords) != n or sorted(self.domain_coords) != list(self.domain_coords):
            raise ValueError("domain_coords must be n increasing indices")
        if max(self.domain_coords) >= self.ambient_dim:
            raise ValueError("domain coordinate outside the ambient space")
        if len(self.maps) != len(self.triangulation.simplices):
            raise ValueError("need one affine map per simplex")

    @property
    def domain_dim(self) -> int:
        return self.domain.ambient_dim

    @property
    def ambient_dim(self) -> int:
        return self.domain.ambient_dim + self.range_dim

    @property
    def range_coords(self) -> tuple:
        return tuple(i for i in range(self.ambient_dim) if i not in self.domain_coords)

    @classmethod
    def from_vertex_values(cls, domain: BoxUnion, values, domain_coords=(), constant_tag=None):
        """``values`` maps each triangulation vertex (a point tuple) to a k-tuple."""
        tri = triangulate(domain)
        vals = {tuple(as_rational(x) for x in p): tuple(as_rational(v) for v in val)
                for p, val in dict(values).items()}
        missing = [p for p in tri.vertices if p not in vals]
        if missing:
            raise ValueError(f"no value given for vertex {missing[0]}")
        k = len(next(iter(vals.values()))) if vals else 0
        maps = tuple(
            _fit_affine([tri.vertices[v] for v in s], [vals[tri.vertices[v]] for v in s], k)
            for s in tri.simplices
        )
        return cls(domain, tri, maps, k, tuple(domain_coords), constant_tag)

    @classmethod
    def from_function(cls, domain: BoxUnion, fn, k: int, domain_coords=()):
        tri = triangulate(domain)
        return cls.from_vertex_values(
            domain, {p: tuple(fn(p)) for p in tri.vertices} if k else {p: () for p in tri.vertices},
            domain_coords,
        )

    @classmethod
    def affine(cls, domain: BoxUnion, matrix, offset, domain_coords=()):
        amap = AffineMap.from_rows(matrix, offset)
        tri = triangulate(domain)
        return cls(domain, tri, tuple(amap for _ in tri.simplices), len(amap.offset),
                   tuple(domain_coords))

    @classmethod
    def constant(cls, domain: BoxUnion, values=(), domain_coords=()):
        values = tuple(as_rational(v) for v in values)
        amap = AffineMap.constant(domain.ambient_dim, values)
        tri = triangulate(domain)
        return cls(domain, tri, tuple(amap for _ in tri.simplices), len(values),
                   tuple(domain_coords), values)

    @classmethod
    def from_simplex_maps(cls, domain: BoxUnion, maps, domain_coords=()):
        tri = triangulate(domain)
        maps = tuple(m if isinstance(m, AffineMap) else AffineMap.from_rows(*m) for m in maps)
        k = len(maps[0].offset) if maps else 0
        return cls(domain, tri, maps, k, tuple(domain_coords))

    def vertex_values(self) -> dict:
        """Map value at every triangulation vertex (first simplex containing it)."""
        out = {}
        for s, m in zip(self.triangulation.simplices, self.maps):
            for v in s:
                p = self.triangulation.vertices[v]
                out.setdefault(p, m(p))
        return out

    def lift(self, x) -> tuple:
        """Ambient point ``(x, f(x))`` for a domain point inside some simplex."""
        for s, m in zip(self.triangulation.simplices, self.maps):
            if _in_closed_simplex(self.triangulation, s, x):
                return self._embed(x, m(x))
        raise ValueError("point outside the triangulated domain")

    def _embed(self, x, y) -> tuple:
        out = [None] * self.ambient_dim
        for i, c in enumerate(self.domain_coords):
            out[c] = x[i]
        for i, c in enumerate(self.range_coords):
            out[c] = y[i]
        return tuple(out)


def _barycentric_rows(tri: Triangulation, simplex) -> list:
    """Rows ``(coeffs, const)`` with ``lambda_v(x) = coeffs . x + const``."""
    n = tri.dim
    pts = [tri.vertices[v] for v in simplex]
    # solve [p_0 .. p_n; 1 .. 1] lambda = [x; 1]  ->  lambda = M^{-1} [x; 1]
    cols = [list(p) + [Fraction(1)] for p in pts]
    mat = [[cols[j][i] for j in range(n + 1)] for i in range(n + 1)]
    inv = []
    for i in range(n + 1):
        e = [Fraction(int(i == j)) for j in range(n + 1)]
        inv.append(solve_square(mat, e))
    # inv columns: column i = M^{-1} e_i  -> lambda_v = sum_i inv[i][v] * rhs_i
    rows = []
    for v in range(n + 1):
        coeffs = tuple(inv[i][v] for i in range(n))
        rows.append((coeffs, inv[n][v]))
    return rows


def _in_closed_simplex(tri, simplex, x) -> bool:
    for coeffs, const in _barycentric_rows(tri, simplex):
        if sum((a * b for a, b in zip(coeffs, x)), _ZERO) + const < 0:
            return False
    return True


def check_continuity(f: PiecewiseAffineGraph) -> bool:
    """Affine pieces agree on every shared face (checked at the shared vertices)."""
    tri = f.triangulation
    at_vertex: dict = {}
    for s, m in zip(tri.simplices, f.maps):
        for v in s:
            val = m(tri.vertices[v])
            prev = at_vertex.setdefault(v, val)
            if prev != val:
                return False
    return True


def face_system(tri: Triangulation, simplex, face) -> ConstraintSystem:
    """Relative interior of ``face`` (a subset of ``simplex``) in the domain space."""
    n = tri.dim
    out = []
    for v, (coeffs, const) in zip(simplex, _barycentric_rows(tri, simplex)):
        # lambda_v(x) = coeffs.x + const
        if v in face:
            out.append(LinearConstraint(tuple(-a for a in coeffs), LT, const))
        else:
            out.append(LinearConstraint(coeffs, EQ, -const))
    return ConstraintSystem(n, tuple(out))


def graph_system(f: PiecewiseAffineGraph, domain_system: ConstraintSystem,
                 amap: AffineMap) -> ConstraintSystem:
    """Lift a domain system to the ambient space with ``y = A x + b``."""
    N = f.ambient_dim
    lifted = domain_system.embed(N, f.domain_coords)
    extra = []
    for row, b, yc in zip(amap.matrix, amap.offset, f.range_coords):
        coeffs = [_ZERO] * N
        coeffs[yc] = Fraction(1)
        for a, xc in zip(row, f.domain_coords):
            coeffs[xc] -= a
        extra.append(LinearConstraint(tuple(coeffs), EQ, b))
    return lifted.with_constraints(extra)


def graph_pieces(f: PiecewiseAffineGraph) -> "PieceSet":
    """One relatively open piece per triangulation face lying inside the open domain."""
    if not check_continuity(f):
        raise ContinuityError("map is not continuous across shared faces")
    tri = f.triangulation
    owner: dict = {}
    for si, s in enumerate(tri.simplices):
        for r in range(1, len(s) + 1):
            for face in itertools.combinations(s, r):
                owner.setdefault(face, si)
    pieces = []
    for face in sorted(owner, key=lambda fc: (len(fc), fc)):
        if not f.domain.contains(tri.barycenter(face)):
            continue
        si = owner[face]
        dom = face_system(tri, tri.simplices[si], set(face))
        pieces.append(graph_system(f, dom, f.maps[si]))
    return PieceSet(f.ambient_dim, tuple(pieces), FACES)


def affine_on_boxes(f: PiecewiseAffineGraph) -> Optional[tuple]:
    """The affine map of each domain box when ``f`` is affine there, else ``None``."""
    tri = f.triangulation
    out = []
    for box in f.domain.boxes:
        maps = {m for s, m in zip(tri.simplices, f.maps)
                if box.contains(tri.barycenter(s))}
        if len(maps) != 1:
            return None
        out.append(maps.pop())
    return tuple(out)


def graph_cover(f: PiecewiseAffineGraph) -> Optional["PieceSet"]:
    """Open cover of the graph by the graphs over single boxes, when available."""
    maps = affine_on_boxes(f)
    if maps is None or not check_continuity(f):
        return None
    pieces = tuple(graph_system(f, b.system(), m) for b, m in zip(f.domain.boxes, maps))
    return PieceSet(f.ambient_dim, pieces, COVER)


def member_pieces(f: PiecewiseAffineGraph) -> "PieceSet":
    """Cheapest exact piece representation of a graph."""
    cover = graph_cover(f)
    return cover if cover is not None else graph_pieces(f)


# ---------------------------------------------------------------------------
# piece sets

def canonical_pieces(system: ConstraintSystem) -> list:
    """Split a system into relatively open pieces (``=`` and ``<`` only)."""
    base = [c for c in system.constraints if c.rel != LE]
    weak = [c for c in system.constraints if c.rel == LE]
    out = []
    for choice in itertools.product((LT, EQ), repeat=len(weak)):
        cons = base + [LinearConstraint(c.coeffs, rel, c.rhs) for c, rel in zip(weak, choice)]
        s = ConstraintSystem(system.ambient_dim, tuple(cons))
        if is_feasible(s):
            out.append(s.simplified())
    return out


@dataclass(frozen=True)
class PieceSet:
    ambient_dim: int
    pieces: tuple = ()
    structure: str = GENERAL

    def __post_init__(self):
        for p in self.pieces:
            if p.ambient_dim != self.ambient_dim:
                raise ValueError("piece dimension mismatch")
            if not p.is_relatively_open_form:
                raise ValueError("pieces must use only '=' and '<'")

    def __len__(self):
        return len(self.pieces)

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def contains(self, point) -> bool:
        return any(p.contains(point) for p in self.pieces)

    def count_containing(self, point) -> int:
        return sum(1 for p in self.pieces if p.contains(point))

    def canonical(self) -> "PieceSet":
        """Drop empty pieces and duplicates, keep the structure tag."""
        seen = []
        for p in self.pieces:
            p = p.simplified()
            if p not in seen and is_feasible(p):
                seen.append(p)
        return PieceSet(self.ambient_dim, tuple(seen), self.structure)


def intersect(P: PieceSet, S: ConstraintSystem) -> PieceSet:
    """``P ∩ S`` as relatively open pieces."""
    if P.ambient_dim != S.ambient_dim:
        raise ValueError("ambient dimensions differ")
    out = []
    for p in P.pieces:
        for q in canonical_pieces(p & S):
            if q not in out:
                out.append(q)
    structure = P.structure if S.is_relatively_open_form else GENERAL
    return PieceSet(P.ambient_dim, tuple(out), structure)


def intersect_sets(P: PieceSet, Q: PieceSet) -> PieceSet:
    """Exact intersection of two piece sets."""
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("ambient dimensions differ")
    out = []
    for p in P.pieces:
        for q in Q.pieces:
            s = p & q
            if is_feasible(s):
                s = s.simplified()
                if s not in out:
                    out.append(s)
    if P.structure == Q.structure and P.structure in (FACES, COVER):
        structure = P.structure
    else:
        structure = GENERAL
    return PieceSet(P.ambient_dim, tuple(out), structure)


def project_pieces(P: PieceSet, coords: Sequence[int]) -> PieceSet:
    """Coordinate projection of each piece (stays relatively open)."""
    from .rational_linear import project

    coords = tuple(coords)
    out = []
    for p in P.pieces:
        q = project(p, coords).simplified()
        if q not in out:
            out.append(q)
    return PieceSet(len(coords), tuple(out), GENERAL)


def embed_constraint(dim: int, index: int, rel: str, value) -> LinearConstraint:
    return coordinate_constraint(dim, index, rel, value)
