"""Verifier for the Helly-type theorem on graphs of monotone maps.

For a family ``F_1..F_s`` of monotone graphs in ``R^N``: if every subfamily of
at most ``N + 1`` members has a nonempty intersection that is again a
monotone graph, then so does the whole family, and the dimension of the full
intersection is the minimum over those small subfamilies.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .cell_complex import Box, PiecewiseAffineGraph, PieceSet, intersect_sets, member_pieces
from .connectivity import component_count, set_dimension
from .predicates import PredicateVerdict, is_monotone_graph

THEOREM_VIOLATION = "THEOREM-VIOLATION"


class TheoremViolation(AssertionError):
    """A verified hypothesis failed to produce the guaranteed conclusion."""


class NotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class Family:
    ambient_dim: int
    members: tuple
    ids: tuple = ()

    def __post_init__(self):
        if not self.members:
            raise ValueError("a family needs at least one member")
        for m in self.members:
            if m.ambient_dim != self.ambient_dim:
                raise ValueError("members must share the ambient space")
        if not self.ids:
            object.__setattr__(self, "ids", tuple(f"F{i + 1}" for i in range(len(self.members))))
        if len(self.ids) != len(self.members):
            raise ValueError("one id per member")

    @property
    def size(self) -> int:
        return len(self.members)

    def subfamily(self, J: Sequence[int]) -> "Family":
        return Family(self.ambient_dim, tuple(self.members[j] for j in J),
                      tuple(self.ids[j] for j in J))


@dataclass
class SubfamilyRecord:
    J: tuple
    nonempty: bool
    monotone: bool
    dim: int
    components: int = 0
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.nonempty and self.monotone

    def to_json(self) -> dict:
        out = {"J": [j + 1 for j in self.J], "nonempty": self.nonempty,
               "monotone": self.monotone, "dim": self.dim, "components": self.components}
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class VerificationReport:
    operation: str
    records: list = field(default_factory=list)
    hypothesis_ok: Optional[bool] = None
    conclusion_ok: Optional[bool] = None
    applicable: bool = True
    dim_clause: Optional[dict] = None
    counterexample: Optional[dict] = None
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return bool(self.violations)

    def to_json(self) -> dict:
        out = {"operation": self.operation, "applicable": self.applicable,
               "records": [r.to_json() for r in self.records]}
        for key in ("hypothesis_ok", "conclusion_ok", "dim_clause", "counterexample"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        out["violations"] = list(self.violations)
        if self.details:
            out["details"] = self.details
        return out


@lru_cache(maxsize=4096)
def _monotone(F) -> PredicateVerdict:
    return is_monotone_graph(F)


class FamilyIntersections:
    """Cache of ``F_J`` keyed by the sorted index tuple ``J``."""

    def __init__(self, family: Family):
        self.family = family
        self._pieces: dict = {}
        self._records: dict = {}
        self._members_checked = False

    def check_members(self) -> None:
        if self._members_checked:
            return
        for i, m in enumerate(self.family.members):
            v = _monotone(m)
            if not v.verdict:
                raise ValueError(
                    f"member {self.family.ids[i]} is not the graph of a monotone map: {v.reason}"
                )
        self._members_checked = True

    def pieces(self, J: Sequence[int]) -> PieceSet:
        J = tuple(sorted(J))
        if not J:
            raise ValueError("the empty subfamily has no intersection here")
        hit = self._pieces.get(J)
        if hit is not None:
            return hit
        if len(J) == 1:
            out = member_pieces(self.family.members[J[0]])
        else:
            out = intersect_sets(self.pieces(J[:-1]), self.pieces(J[-1:]))
        self._pieces[J] = out
        return out

    def record(self, J: Sequence[int]) -> SubfamilyRecord:
        J = tuple(sorted(J))
        hit = self._records.get(J)
        if hit is not None:
            return hit
        P = self.pieces(J)
        if P.is_empty:
            rec = SubfamilyRecord(J, False, False, -1, 0, "empty")
        else:
            target = self.family.members[J[0]] if len(J) == 1 else P
            v = _monotone(target)
            rec = SubfamilyRecord(J, True, v.verdict, set_dimension(P),
                                  component_count(P), v.reason)
        self._records[J] = rec
        return rec


@lru_cache(maxsize=256)
def _intersections(family: Family) -> FamilyIntersections:
    return FamilyIntersections(family)


def intersect_family(fam: Family, J: Iterable[int]) -> PieceSet:
    """``F_J`` as a piece set (indices are 0-based)."""
    J = tuple(sorted(set(J)))
    if not J or J[0] < 0 or J[-1] >= fam.size:
        raise ValueError("J must be a nonempty subset of the index set")
    return _intersections(fam).pieces(J)


def subfamilies(s: int, max_size: int) -> Iterable[tuple]:
    """Nonempty index sets by increasing size, then lexicographically."""
    for size in range(1, min(s, max_size) + 1):
        yield from itertools.combinations(range(s), size)


def check_hypotheses(fam: Family, stop_early: bool = False) -> VerificationReport:
    """Record every subfamily of at most ``N + 1`` members."""
    cache = _intersections(fam)
    cache.check_members()
    report = VerificationReport("check_hypotheses")
    ok = True
    for J in subfamilies(fam.size, fam.ambient_dim + 1):
        rec = cache.record(J)
        report.records.append(rec)
        if not rec.ok and ok:
            ok = False
            report.counterexample = {"J": [j + 1 for j in J], "reason": rec.reason or
                                     "not monotone", "components": rec.components}
            if stop_early:
                break
    report.hypothesis_ok = ok
    return report


def check_conclusion(fam: Family, hypotheses: Optional[VerificationReport] = None) -> VerificationReport:
    hyp = hypotheses or check_hypotheses(fam)
    report = VerificationReport("check_conclusion", records=list(hyp.records),
                                hypothesis_ok=hyp.hypothesis_ok,
                                counterexample=hyp.counterexample)
    if not hyp.hypothesis_ok:
        report.applicable = False
        return report
    full = _intersections(fam).record(tuple(range(fam.size)))
    report.conclusion_ok = full.ok
    report.details["full"] = full.to_json()
    if not full.ok:
        report.violations.append(
            f"{THEOREM_VIOLATION}: hypotheses hold but F_I is "
            f"{'empty' if not full.nonempty else 'not a monotone graph'}"
        )
    return report


def _min_member_dim(fam: Family) -> int:
    return min(m.domain_dim for m in fam.members)


def check_dim_clause(fam: Family, d: int,
                     hypotheses: Optional[VerificationReport] = None) -> VerificationReport:
    """If every small subfamily has dimension at least ``d`` then so does ``F_I``."""
    if not 0 <= d <= _min_member_dim(fam):
        raise ValueError(f"d must lie in [0, {_min_member_dim(fam)}]")
    hyp = hypotheses or check_hypotheses(fam)
    report = VerificationReport("check_dim_clause", hypothesis_ok=hyp.hypothesis_ok)
    dims = [r.dim for r in hyp.records]
    if not hyp.hypothesis_ok or min(dims) < d:
        report.applicable = False
        return report
    full = _intersections(fam).record(tuple(range(fam.size)))
    report.dim_clause = {"d": d, "dim_full": full.dim, "ok": full.dim >= d}
    if full.dim < d:
        report.violations.append(f"{THEOREM_VIOLATION}: dim F_I = {full.dim} < d = {d}")
    return report


def min_dim_formula_check(fam: Family,
                          hypotheses: Optional[VerificationReport] = None) -> VerificationReport:
    """``dim F_I`` equals the minimum of ``dim F_J`` over ``|J| <= N + 1``."""
    hyp = hypotheses or check_hypotheses(fam)
    report = VerificationReport("min_dim_formula_check", hypothesis_ok=hyp.hypothesis_ok)
    if not hyp.hypothesis_ok:
        report.applicable = False
        return report
    smallest = min(r.dim for r in hyp.records)
    full = _intersections(fam).record(tuple(range(fam.size)))
    report.details = {"min_small": smallest, "dim_full": full.dim}
    if full.dim != smallest:
        report.violations.append(
            f"{THEOREM_VIOLATION}: dim F_I = {full.dim} but the minimum is {smallest}"
        )
    return report


def find_dim_witness(fam: Family, p: int) -> tuple:
    """Some ``J`` with ``|J| <= N - p`` and ``dim F_J = p`` (0-based indices)."""
    N = fam.ambient_dim
    if not 0 <= p < N:
        raise ValueError("p must satisfy 0 <= p < N")
    cache = _intersections(fam)
    full = cache.record(tuple(range(fam.size)))
    if full.dim != p:
        raise ValueError(f"dim F_I is {full.dim}, not {p}")
    for J in subfamilies(fam.size, N - p):
        if cache.record(J).dim == p:
            return J
    raise TheoremViolation(f"{THEOREM_VIOLATION}: no J with |J| <= {N - p} has dimension {p}")


def katchalski_g(n: int, j: int) -> int:
    """Helly number for the dimension-``j`` version of Helly's theorem for convex sets."""
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    if j == 0:
        return n + 1
    return max(n + 1, 2 * (n - j + 1))


def _box_meet(boxes: Sequence[Box]) -> Optional[tuple]:
    out = []
    for axis in range(boxes[0].dim):
        lo = max(b.bounds[axis][0] for b in boxes)
        hi = min(b.bounds[axis][1] for b in boxes)
        if not lo < hi:
            return None
        out.append((lo, hi))
    return tuple(out)


def classical_helly_check(boxes: Sequence) -> VerificationReport:
    """Convex baseline: ``(n+1)``-wise nonempty open boxes have a common point."""
    boxes = [b if isinstance(b, Box) else Box(tuple(b)) for b in boxes]
    n = boxes[0].dim
    report = VerificationReport("classical_helly_check")
    for J in subfamilies(len(boxes), n + 1):
        if _box_meet([boxes[j] for j in J]) is None:
            report.applicable = False
            report.hypothesis_ok = False
            report.counterexample = {"J": [j + 1 for j in J]}
            return report
    report.hypothesis_ok = True
    meet = _box_meet(boxes)
    report.conclusion_ok = meet is not None
    if meet is None:
        report.violations.append(f"{THEOREM_VIOLATION}: Helly's theorem failed")
    else:
        report.details["point"] = [str((lo + hi) / 2) for lo, hi in meet]
    return report


def verify(fam: Family, d: Optional[int] = None, min_dim: bool = False,
           witness_p: Optional[int] = None) -> VerificationReport:
    """Hypotheses, conclusion and the optional extra clauses in one report."""
    hyp = check_hypotheses(fam)
    report = check_conclusion(fam, hyp)
    report.operation = "verify_helly"
    if not hyp.hypothesis_ok:
        return report
    if d is not None:
        dc = check_dim_clause(fam, d, hyp)
        report.dim_clause = dc.dim_clause or {"d": d, "applicable": False}
        report.violations += dc.violations
    if min_dim:
        mc = min_dim_formula_check(fam, hyp)
        report.details["min_dim_formula"] = mc.details
        report.violations += mc.violations
    if witness_p is not None:
        try:
            J = find_dim_witness(fam, witness_p)
            report.details["dim_witness"] = {"p": witness_p, "J": [j + 1 for j in J]}
        except TheoremViolation as exc:
            report.violations.append(str(exc))
    return report
