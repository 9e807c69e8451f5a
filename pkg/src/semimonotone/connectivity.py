"""Connected components and dimension of finite unions of relatively open convex pieces.

Two pieces are joined when they are not separated, i.e. when one of them
meets the closure of the other. For finitely many convex pieces the union is
connected exactly when this adjacency graph is connected.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .cell_complex import COVER, FACES, GENERAL, PieceSet
from .rational_linear import (
    EQ,
    ConstraintSystem,
    _axis_bounds,
    is_feasible,
    coordinate_row,
    project,
    rows_feasible,
    rows_system,
    solution_dim,
    system_rows,
)


class UnionFind:
    """Union-find with path halving; roots are the smallest member index."""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb

    def groups(self) -> list:
        out: dict = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return [out[k] for k in sorted(out)]


def pieces_separated(P: ConstraintSystem, Q: ConstraintSystem) -> bool:
    """True iff ``P ∩ cl(Q)`` and ``cl(P) ∩ Q`` are both empty."""
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if is_feasible(P & Q.closure()):
        return False
    return not is_feasible(P.closure() & Q)


# ---------------------------------------------------------------------------
# axis-aligned fast path: each piece is a product of open intervals and points

def axis_form(system: ConstraintSystem) -> Optional[tuple]:
    """``((lo, hi), ...)`` per axis for a bounded axis-aligned relatively open piece.

    ``lo == hi`` encodes a point. Returns ``None`` if the system is not of that
    shape (or is empty).
    """
    if not system.is_axis_aligned:
        return None
    bounds = _axis_bounds(system)
    if bounds is None:
        return None
    out = []
    for lo, ls, hi, hs in bounds:
        if lo is None or hi is None:
            return None
        if lo == hi:
            out.append((lo, hi))
        elif ls and hs:
            out.append((lo, hi))
        else:
            return None
    return tuple(out)


def _axis_meet(a, b) -> Optional[tuple]:
    """Intersection of two relatively open axis pieces."""
    out = []
    for (alo, ahi), (blo, bhi) in zip(a, b):
        apt, bpt = alo == ahi, blo == bhi
        if apt and bpt:
            if alo != blo:
                return None
            out.append((alo, alo))
        elif apt:
            if not blo < alo < bhi:
                return None
            out.append((alo, alo))
        elif bpt:
            if not alo < blo < ahi:
                return None
            out.append((blo, blo))
        else:
            lo, hi = max(alo, blo), min(ahi, bhi)
            if not lo < hi:
                return None
            out.append((lo, hi))
    return tuple(out)


def _axis_meets_closure(a, b) -> bool:
    """``a ∩ cl(b)`` nonempty."""
    for (alo, ahi), (blo, bhi) in zip(a, b):
        if alo == ahi:
            if not blo <= alo <= bhi:
                return False
        elif not (alo < bhi and blo < ahi):
            return False
    return True


def _axis_separated(a, b) -> bool:
    return not _axis_meets_closure(a, b) and not _axis_meets_closure(b, a)


def _axis_cut(a, cone_conditions) -> Optional[tuple]:
    out = list(a)
    for j, rel, c in cone_conditions:
        lo, hi = out[j]
        if lo == hi:
            ok = (lo < c) if rel == "<" else (lo > c) if rel == ">" else (lo == c)
            if not ok:
                return None
            continue
        if rel == "<":
            hi = min(hi, c)
        elif rel == ">":
            lo = max(lo, c)
        else:
            if not lo < c < hi:
                return None
            lo = hi = c
        if lo > hi or (lo == hi and rel != "="):
            return None
        out[j] = (lo, hi)
    return tuple(out)


# ---------------------------------------------------------------------------

def _adjacent(P: PieceSet, i: int, j: int) -> bool:
    p, q = P.pieces[i], P.pieces[j]
    if P.structure == COVER:
        return is_feasible(p & q)
    return not pieces_separated(p, q)


def adjacency(P: PieceSet) -> list:
    """All non-separated pairs ``(i, j)`` with ``i < j``."""
    forms = [axis_form(p) for p in P.pieces]
    n = len(P.pieces)
    edges = []
    if all(f is not None for f in forms):
        for i in range(n):
            for j in range(i + 1, n):
                if P.structure == COVER:
                    if _axis_meet(forms[i], forms[j]) is not None:
                        edges.append((i, j))
                elif not _axis_separated(forms[i], forms[j]):
                    edges.append((i, j))
        return edges
    for i in range(n):
        for j in range(i + 1, n):
            if _adjacent(P, i, j):
                edges.append((i, j))
    return edges


def _groups(n: int, edges: Iterable) -> list:
    uf = UnionFind(n)
    for i, j in edges:
        uf.union(i, j)
    return uf.groups()


def connected_components(P: PieceSet) -> list:
    """Components as piece sets, ordered by their smallest piece index."""
    if P.is_empty:
        return []
    return [
        PieceSet(P.ambient_dim, tuple(P.pieces[i] for i in g), P.structure)
        for g in _groups(len(P.pieces), adjacency(P))
    ]


def component_count(P: PieceSet) -> int:
    if P.is_empty:
        return 0
    return len(_groups(len(P.pieces), adjacency(P)))


def is_connected(P: PieceSet) -> bool:
    """Empty sets count as connected."""
    return component_count(P) <= 1


def set_dimension(P: PieceSet) -> int:
    if P.is_empty:
        return -1
    return max(solution_dim(p) for p in P.pieces)


def _axis_spans(p: ConstraintSystem) -> list:
    """Closed ``(lo, hi)`` range of each coordinate over ``cl(p)``; ``None`` when unbounded."""
    out = []
    for j in range(p.ambient_dim):
        bounds = _axis_bounds(project(p.closure(), (j,)))
        if bounds is None:
            out.append((None, None))
        else:
            lo, _, hi, _ = bounds[0]
            out.append((lo, hi))
    return out


class SliceCounter:
    """Component counts of ``P ∩ C`` for many coordinate cones ``C``.

    The adjacency of ``P`` is computed once. Pieces of ``P ∩ C`` can only be
    adjacent when their parents are, so only parent edges are re-tested; for
    ``faces`` structure no re-test is needed at all, since a cone is relatively
    open and a face contained in the closure of a piece stays in the closure
    of that piece's cut.
    """

    def __init__(self, P: PieceSet):
        self.P = P
        self.forms = [axis_form(p) for p in P.pieces]
        self.axis = bool(P.pieces) and all(f is not None for f in self.forms)
        self.edges = adjacency(P)
        self.spans = None if self.axis else [_axis_spans(p) for p in P.pieces]
        self.rows = None if self.axis else [system_rows(p) for p in P.pieces]
        self.values = None
        self.cut_memo: dict = {}
        self.proj_rows: dict = {}

    def _cut(self, i: int, conditions):
        """Live cone conditions for piece ``i``, or ``None`` if the cut is empty.

        Bounding boxes settle most conditions; the rest go to elimination.
        """
        spans = self.spans[i]
        live = []
        for cond in conditions:
            j, rel, c = cond
            lo, hi = spans[j]
            if rel == "<":
                if lo is not None and c <= lo:
                    return None
                if hi is not None and c > hi:
                    continue
            elif rel == ">":
                if hi is not None and c >= hi:
                    return None
                if lo is not None and c < lo:
                    continue
            else:
                if (lo is not None and c < lo) or (hi is not None and c > hi):
                    return None
                if lo == hi == c:
                    continue
            live.append(cond)
        live = tuple(live)
        if not live:
            return live
        if len(live) == 1:
            # the projection of a relatively open piece to one axis is an open
            # interval (points were settled above), so only "=" at an end fails
            j, rel, c = live[0]
            lo, hi = spans[j]
            return None if rel == "=" and c in (lo, hi) else live
        key = (i, live)
        hit = self.cut_memo.get(key)
        if hit is None:
            # only the projection onto the cone's axes matters
            coords = tuple(j for j, _, _ in live)
            rows = self._projected_rows(i, coords)
            k = len(coords)
            vals = self.values
            rows = rows + tuple(
                coordinate_row(k, pos, rel, vals[j][c] if vals else c)
                for pos, (j, rel, c) in enumerate(live)
            )
            hit = self.cut_memo[key] = rows_feasible(rows, k)
        return live if hit else None

    def _projected_rows(self, i: int, coords: tuple) -> tuple:
        key = (i, coords)
        rows = self.proj_rows.get(key)
        if rows is None:
            rows = self.proj_rows[key] = system_rows(project(self.P.pieces[i], coords))
        return rows

    def _cut_system(self, i: int, live) -> ConstraintSystem:
        p = self.P.pieces[i]
        if not live:
            return p
        dim = p.ambient_dim
        vals = self.values
        return p & rows_system(
            [coordinate_row(dim, j, rel, vals[j][c] if vals else c) for j, rel, c in live], dim
        )

    def survivors(self, conditions) -> list:
        """``(index, cut)`` for every nonempty ``piece ∩ cone``.

        On the axis path ``cut`` is the cut's interval form; otherwise it is
        the tuple of cone conditions still live for that piece.
        """
        out = []
        if self.axis:
            for i, f in enumerate(self.forms):
                cut = _axis_cut(f, conditions)
                if cut is not None:
                    out.append((i, cut))
            return out
        for i in range(len(self.P.pieces)):
            live = self._cut(i, conditions)
            if live is not None:
                out.append((i, live))
        return out

    def rank_values(self) -> list:
        """Per axis, every value a piece boundary sits at."""
        out = [set() for _ in range(self.P.ambient_dim)]
        for bounds in (self.forms if self.axis else self.spans):
            for a, (lo, hi) in enumerate(bounds):
                out[a].update(v for v in (lo, hi) if v is not None)
        return out

    def rank_compress(self, values_per_axis) -> None:
        """Replace piece bounds by their ranks in ``values_per_axis``.

        Cone thresholds must then be given as ranks too. Only order matters
        when comparing against bounds, so verdicts are unchanged; elimination
        maps ranks back to values.
        """
        ranks = [{v: i for i, v in enumerate(vals)} for vals in values_per_axis]

        def compress(bounds):
            return tuple((ranks[a].get(lo), ranks[a].get(hi)) for a, (lo, hi) in enumerate(bounds))

        if self.axis:
            self.forms = [compress(f) for f in self.forms]
        else:
            self.spans = [compress(sp) for sp in self.spans]
        self.values = values_per_axis

    def count(self, cone) -> int:
        return self.count_conditions(cone.conditions)

    def count_conditions(self, conditions) -> int:
        alive = self.survivors(conditions)
        if len(alive) <= 1:
            return len(alive)
        pos = {i: k for k, (i, _) in enumerate(alive)}
        structure = self.P.structure
        if self.axis:
            cuts = [c for _, c in alive]
        elif structure != FACES:
            cuts = [self._cut_system(i, live) for i, live in alive]
        edges = []
        for i, j in self.edges:
            a, b = pos.get(i), pos.get(j)
            if a is None or b is None:
                continue
            if structure == FACES:
                edges.append((a, b))
            elif self.axis:
                if structure == COVER:
                    if _axis_meet(cuts[a], cuts[b]) is not None:
                        edges.append((a, b))
                elif not _axis_separated(cuts[a], cuts[b]):
                    edges.append((a, b))
            elif structure == COVER:
                if is_feasible(cuts[a] & cuts[b]):
                    edges.append((a, b))
            elif not pieces_separated(cuts[a], cuts[b]):
                edges.append((a, b))
        return len(_groups(len(alive), edges))

    def cut_set(self, cone) -> PieceSet:
        csys = cone.system(self.P.ambient_dim)
        pieces = tuple(
            (p & csys).simplified() for p in self.P.pieces if is_feasible(p & csys)
        )
        return PieceSet(self.P.ambient_dim, pieces, self.P.structure)
