"""Semi-monotone sets, quasi-affine maps and graphs of monotone maps.

For a quasi-affine map, connectivity of every slice by an affine coordinate
subspace (the subspace criterion) is equivalent to connectivity of every
slice by a coordinate cone (the cone criterion). Both are evaluated; a
disagreement on a quasi-affine input raises :class:`InconsistencyError`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cell_complex import (
    COVER,
    FACES,
    GENERAL,
    BoxUnion,
    PiecewiseAffineGraph,
    PieceSet,
    check_continuity,
    intersect,
    member_pieces,
    project_pieces,
)
from .cones import (
    CONE_RELATIONS,
    CoordinateCone,
    all_thresholds,
    iter_conditions,
    representative_values,
)
from .connectivity import SliceCounter, set_dimension
from .rational_linear import (
    EQ,
    LE,
    LT,
    ConstraintSystem,
    LinearConstraint,
    direction_space,
    is_feasible,
    nullspace,
    project,
    projected_dim,
    solution_dim,
    witness_point,
)

_ZERO = Fraction(0)
AFFINE = ("=",)


class InconsistencyError(AssertionError):
    """The subspace and cone criteria disagreed on a quasi-affine input."""


@dataclass
class PredicateVerdict:
    verdict: bool
    reason: str = ""
    witness: Optional[dict] = None
    diagnostics: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict

    def to_json(self) -> dict:
        out = {"verdict": self.verdict}
        if self.reason:
            out["reason"] = self.reason
        if self.witness is not None:
            out["witness"] = self.witness
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


def _ok(**diag) -> PredicateVerdict:
    return PredicateVerdict(True, diagnostics=dict(diag))


# ---------------------------------------------------------------------------
# cone sweeps

def _bbox(thresholds):
    return [(t[0], t[-1]) if t else (None, None) for t in thresholds]


def _normalize_condition(rel, c, lo, hi):
    """``True`` if vacuous on ``[lo, hi]``, ``False`` if it empties it, else ``None``."""
    if lo is None:
        return None
    if rel == "<":
        return True if c > hi else False if c <= lo else None
    if rel == ">":
        return True if c < lo else False if c >= hi else None
    return None if lo <= c <= hi else False


class _Sweep:
    """Memoized component counts of ``P ∩ C`` over normalized cones.

    Thresholds and piece bounds are replaced by integer ranks, which keeps
    the many comparisons and memo keys off Fraction arithmetic.
    """

    def __init__(self, P: PieceSet, thresholds):
        self.P = P
        self.counter = SliceCounter(P)
        self.reps = [representative_values(t) for t in thresholds]
        self.bbox = _bbox(thresholds)
        self.memo: dict = {}
        self.evaluated = 0
        self.values = None
        self.keys = self.reps
        if P.pieces:
            values = [sorted(vals | set(reps))
                      for vals, reps in zip(self.counter.rank_values(), self.reps)]
            self.counter.rank_compress(values)
            rank = [{v: i for i, v in enumerate(vals)} for vals in values]
            self.values = values
            self.keys = [[rank[a][v] for v in reps] for a, reps in enumerate(self.reps)]
            self.bbox = [(rank[a][lo], rank[a][hi]) if lo is not None else (None, None)
                         for a, (lo, hi) in enumerate(self.bbox)]

    def cone(self, raw) -> CoordinateCone:
        if self.values is None:
            return CoordinateCone(tuple(raw))
        return CoordinateCone(tuple((j, rel, self.values[j][c]) for j, rel, c in raw))

    def count(self, key) -> int:
        hit = self.memo.get(key)
        if hit is None:
            hit = self.counter.count_conditions(key)
            self.memo[key] = hit
            self.evaluated += 1
        return hit

    def options(self, relations) -> list:
        """Per axis, the conditions that neither hold vacuously nor empty the set's bounding box.

        Every representative cone normalizes to a product of such conditions
        over some subset of axes, so sweeping these products covers them all.
        """
        out = []
        for j, reps in enumerate(self.keys):
            lo, hi = self.bbox[j]
            out.append([c for c in ((j, rel, v) for rel in relations for v in reps)
                        if _normalize_condition(c[1], c[2], lo, hi) is None])
        return out

    def first_disconnected(self, relations) -> Optional[tuple]:
        for key in iter_conditions(self.options(relations), None):
            n = self.count(key)
            if n > 1:
                return self.cone(key), n
        return None


def _cone_witness(cone, n, criterion) -> dict:
    return {"criterion": criterion, "cone": cone.to_json(),
            "description": cone.describe(), "components": n}


# ---------------------------------------------------------------------------
# semi-monotone sets

def _open_set_pieces(X) -> PieceSet:
    if isinstance(X, BoxUnion):
        return X.pieces()
    if isinstance(X, PieceSet):
        return X
    raise TypeError("expected a BoxUnion or PieceSet")


def _thresholds_of(X, P: PieceSet):
    if isinstance(X, BoxUnion):
        return [X.axis_endpoints(a) for a in range(X.ambient_dim)]
    return all_thresholds(P)


def is_semi_monotone(X) -> PredicateVerdict:
    """Every representative coordinate cone cuts ``X`` in a connected set."""
    P = _open_set_pieces(X)
    if P.is_empty:
        return _ok(empty=True)
    sweep = _Sweep(P, _thresholds_of(X, P))
    bad = sweep.first_disconnected(CONE_RELATIONS)
    if bad:
        return PredicateVerdict(False, "disconnected cone slice", _cone_witness(*bad, "cones"))
    return _ok(cones_evaluated=sweep.evaluated)


def is_semi_monotone_via_subspaces(X) -> PredicateVerdict:
    """Same test quantifying only over affine coordinate subspaces."""
    P = _open_set_pieces(X)
    if P.is_empty:
        return _ok(empty=True)
    sweep = _Sweep(P, _thresholds_of(X, P))
    bad = sweep.first_disconnected(AFFINE)
    if bad:
        return PredicateVerdict(False, "disconnected subspace slice",
                                _cone_witness(*bad, "subspaces"))
    return _ok(subspaces_evaluated=sweep.evaluated)


# ---------------------------------------------------------------------------
# projections and injectivity

def _pair_system(p: ConstraintSystem, q: ConstraintSystem, T: Sequence[int]) -> ConstraintSystem:
    """``x in p, y in q, x_T = y_T`` over ``2N`` variables ``(x, y)``."""
    N = p.ambient_dim
    cons = list(p.embed(2 * N, range(N)).constraints)
    cons += q.embed(2 * N, range(N, 2 * N)).constraints
    for t in T:
        coeffs = [_ZERO] * (2 * N)
        coeffs[t] = Fraction(1)
        coeffs[N + t] = Fraction(-1)
        cons.append(LinearConstraint(tuple(coeffs), EQ, _ZERO))
    return ConstraintSystem(2 * N, tuple(cons))


def _differ(N: int, r: int, sign: int) -> LinearConstraint:
    coeffs = [_ZERO] * (2 * N)
    coeffs[r] = Fraction(sign)
    coeffs[N + r] = Fraction(-sign)
    return LinearConstraint(tuple(coeffs), LT, _ZERO)


def _collision(p, q, T, N, disjoint: bool) -> Optional[tuple]:
    """Distinct ``x in p``, ``y in q`` with equal ``T``-coordinates, if any."""
    if T:
        if not is_feasible(project(p, tuple(T)) & project(q, tuple(T))):
            return None
    base = _pair_system(p, q, T)
    if disjoint:
        w = witness_point(base)
        return None if w is None else (w[:N], w[N:])
    for r in range(N):
        if r in T:
            continue
        for sign in (1, -1):
            w = witness_point(base.with_constraints([_differ(N, r, sign)]))
            if w is not None:
                return (w[:N], w[N:])
    return None


def _same_flat(p, q) -> bool:
    return direction_space(p) == direction_space(q) and is_feasible(p & q)


def injectivity_counterexample(P: PieceSet, T: Sequence[int]) -> Optional[tuple]:
    """Two distinct points of ``P`` with the same projection to ``T``, if any."""
    N = P.ambient_dim
    T = tuple(T)
    pieces = P.pieces
    for p in pieces:
        if projected_dim(p, T) < solution_dim(p):
            w = witness_point(p)
            basis = direction_space(p)
            # a direction of the piece killed by the projection
            if T:
                coeffs = nullspace([[v[t] for v in basis] for t in T], len(basis))
            else:
                coeffs = [[Fraction(int(i == 0)) for i in range(len(basis))]]
            d = [sum((c * v[a] for c, v in zip(coeffs[0], basis)), _ZERO) for a in range(N)]
            # stay inside the relatively open piece
            eps = Fraction(1)
            while True:
                q = tuple(x + eps * da for x, da in zip(w, d))
                if p.contains(q):
                    return (tuple(w), q)
                eps /= 2
    disjoint = P.structure == FACES
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            p, q = pieces[i], pieces[j]
            if not disjoint and _same_flat(p, q):
                continue
            hit = _collision(p, q, T, N, disjoint=disjoint)
            if hit is not None:
                return hit
    return None


def image_dim(P: PieceSet, T: Sequence[int]) -> int:
    if P.is_empty:
        return -1
    return max(projected_dim(p, tuple(T)) for p in P.pieces)


def _as_pieceset(F) -> tuple:
    """``(pieces, chart)``; the chart is known only for explicit graphs."""
    if isinstance(F, PiecewiseAffineGraph):
        return member_pieces(F), F.domain_coords
    if isinstance(F, BoxUnion):
        return F.pieces(), tuple(range(F.ambient_dim))
    if isinstance(F, PieceSet):
        return F, None
    raise TypeError(f"cannot interpret {type(F).__name__} as a set")


def _quasi_affine(P: PieceSet, d: int) -> PredicateVerdict:
    N = P.ambient_dim
    for size in range(N + 1):
        for T in itertools.combinations(range(N), size):
            dim_img = image_dim(P, T)
            hit = injectivity_counterexample(P, T)
            injective = hit is None
            if injective != (dim_img == d):
                witness = {"subspace": list(T), "injective": injective, "image_dim": dim_img}
                if hit is not None:
                    witness["points"] = [[str(x) for x in hit[0]], [str(x) for x in hit[1]]]
                return PredicateVerdict(False, "projection audit failed", witness)
    return _ok()


def is_quasi_affine(F) -> PredicateVerdict:
    """For every coordinate subspace T: injective projection iff the image has full dimension."""
    if isinstance(F, PiecewiseAffineGraph) and not check_continuity(F):
        return PredicateVerdict(False, "map is not continuous")
    P, _ = _as_pieceset(F)
    if P.is_empty:
        return PredicateVerdict(False, "empty set")
    d = F.domain_dim if isinstance(F, PiecewiseAffineGraph) else set_dimension(P)
    return _quasi_affine(P, d)


# ---------------------------------------------------------------------------
# graph structure of a piece set

def _negations(c: LinearConstraint) -> list:
    neg = tuple(-a for a in c.coeffs)
    if c.rel == LT:
        return [LinearConstraint(neg, LE, -c.rhs)]
    if c.rel == LE:
        return [LinearConstraint(neg, LT, -c.rhs)]
    return [LinearConstraint(c.coeffs, LT, c.rhs), LinearConstraint(neg, LT, -c.rhs)]


def _subtract(region: ConstraintSystem, q: ConstraintSystem) -> list:
    out = []
    prefix = []
    for c in q.constraints:
        for n in _negations(c):
            s = region.with_constraints(prefix + [n])
            if is_feasible(s):
                out.append(s)
        prefix.append(c)
    return out


def union_is_open(P: PieceSet) -> bool:
    """Whether a bounded union of pieces is open in its ambient space."""
    N = P.ambient_dim
    if N == 0 or P.is_empty:
        return True
    dims = [solution_dim(p) for p in P.pieces]
    if all(d == N for d in dims):
        return True
    from .cones import all_thresholds as _thr

    bounds = [(t[0] - 1, t[-1] + 1) for t in _thr(P)]
    complement = [ConstraintSystem.box(bounds, strict=False)]
    for q in P.pieces:
        nxt = []
        for r in complement:
            nxt.extend(_subtract(r, q))
        complement = nxt
    for q in P.pieces:
        for r in complement:
            if is_feasible(q & r.closure()):
                return False
    return True


def _continuous_over(P: PieceSet, S: tuple) -> Optional[tuple]:
    """A jump: ``x in p`` and ``y in cl(q)`` over the same chart point but distinct."""
    N = P.ambient_dim
    for i, p in enumerate(P.pieces):
        for j, q in enumerate(P.pieces):
            if i == j:
                continue
            hit = _collision(p, q.closure(), S, N, disjoint=False)
            if hit is not None:
                return hit
    return None


def find_chart(P: PieceSet) -> tuple:
    """``(S, verdict)``: the lexicographically first coordinate set over which ``P`` is a graph."""
    d = set_dimension(P)
    N = P.ambient_dim
    last = None
    for S in itertools.combinations(range(N), d):
        if image_dim(P, S) != d:
            continue
        if injectivity_counterexample(P, S) is not None:
            continue
        image = project_pieces(P, S)
        if not union_is_open(image):
            last = {"chart": list(S), "problem": "image not open"}
            continue
        if P.structure != COVER or len({solution_dim(p) for p in P.pieces}) > 1:
            jump = _continuous_over(P, S)
            if jump is not None:
                last = {"chart": list(S), "problem": "discontinuous",
                        "points": [[str(x) for x in jump[0]], [str(x) for x in jump[1]]]}
                continue
        return S, _ok(chart=list(S))
    return None, PredicateVerdict(False, "not the graph of a continuous map over an open set",
                                  last or {"dimension": d})


# ---------------------------------------------------------------------------

def _thresholds_for(F, P: PieceSet):
    if isinstance(F, (PiecewiseAffineGraph, BoxUnion)):
        if isinstance(F, BoxUnion):
            return [F.axis_endpoints(a) for a in range(F.ambient_dim)]
        from .cones import critical_thresholds
        return [critical_thresholds(F, j) for j in range(F.ambient_dim)]
    return all_thresholds(P)


def monotone_criteria(F) -> dict:
    """Evaluate the subspace and cone criteria independently, without early exit between them."""
    P, _ = _as_pieceset(F)
    sweep = _Sweep(P, _thresholds_for(F, P))
    flat = sweep.first_disconnected(AFFINE)
    cone = sweep.first_disconnected(CONE_RELATIONS)
    return {"subspaces": flat is None, "cones": cone is None,
            "subspace_witness": flat, "cone_witness": cone}


def is_monotone_graph(F, shortcut: bool = True) -> PredicateVerdict:
    """Graph of a monotone map: quasi-affine and connected on every representative slice.

    ``shortcut`` lets a single convex piece pass immediately: a convex set
    meets every cone in a convex set, and its projections are injective
    exactly when they preserve dimension.
    """
    if isinstance(F, PiecewiseAffineGraph) and not check_continuity(F):
        return PredicateVerdict(False, "map is not continuous")
    P, chart = _as_pieceset(F)
    if P.is_empty:
        return PredicateVerdict(False, "empty set")
    d = set_dimension(P)
    if chart is None:
        chart, v = find_chart(P)
        if chart is None:
            return v
    if shortcut and len(P.pieces) == 1:
        return _ok(chart=list(chart), dimension=d, convex=True, subspaces=True, cones=True)
    qa = _quasi_affine(P, d)
    sweep = _Sweep(P, _thresholds_for(F, P))
    flat = sweep.first_disconnected(AFFINE)
    if flat is not None:
        # an affine coordinate subspace is itself a cone, so the cone criterion fails too
        cones_ok = False
    else:
        cone = sweep.first_disconnected(CONE_RELATIONS)
        cones_ok = cone is None
        if not cones_ok and qa.verdict:
            raise InconsistencyError(
                f"the subspace criterion holds but the cone criterion fails at {cone[0].describe()}"
            )
    diag = {"chart": list(chart), "dimension": d, "quasi_affine": qa.verdict,
            "subspaces": flat is None, "cones": cones_ok, "slices_evaluated": sweep.evaluated}
    if not qa.verdict and (flat is None) != cones_ok:
        diag["criteria_disagree_without_quasi_affine"] = True
    if not qa.verdict:
        return PredicateVerdict(False, "not quasi-affine", qa.witness, diag)
    if flat is not None:
        return PredicateVerdict(False, "disconnected slice", _cone_witness(*flat, "subspaces"), diag)
    return PredicateVerdict(True, diagnostics=diag)


def graph_set(F) -> PieceSet:
    return _as_pieceset(F)[0]


def slice_check(F, coord: int, rel: str, value) -> PredicateVerdict:
    """``F ∩ {x_coord rel value}`` is empty or again a monotone graph."""
    P = graph_set(F)
    cone = CoordinateCone(((coord, rel, value),))
    cut = intersect(P, cone.system(P.ambient_dim))
    if cut.is_empty:
        return _ok(empty=True)
    v = is_monotone_graph(cut)
    v.diagnostics["slice"] = cone.describe()
    return v


def projection_check(F, T: Sequence[int]) -> PredicateVerdict:
    """The image in the coordinate subspace ``T`` is semi-monotone or a monotone graph."""
    T = tuple(T)
    if not T:
        return _ok(kind="point")
    P = graph_set(F)
    image = project_pieces(P, T)
    v = is_monotone_graph(image)
    if v.verdict:
        kind = "semi-monotone" if set_dimension(image) == len(T) else "graph"
        v.diagnostics["kind"] = kind
    v.diagnostics["subspace"] = list(T)
    return v


def recheck_witness(F, verdict: PredicateVerdict) -> bool:
    """Re-derive the failure a negative verdict's witness claims."""
    if verdict.verdict or not verdict.witness:
        return False
    w = verdict.witness
    P = graph_set(F)
    if "cone" in w:
        cone = CoordinateCone(tuple(tuple(c) for c in w["cone"]))
        from .connectivity import component_count
        return component_count(intersect(P, cone.system(P.ambient_dim))) == w["components"]
    if "subspace" in w:
        T = w["subspace"]
        d = set_dimension(P)
        injective = injectivity_counterexample(P, T) is None
        return injective == w["injective"] and (image_dim(P, T) == d) != injective
    return False
