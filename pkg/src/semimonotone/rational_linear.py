"""Exact rational linear constraint systems.

Everything here works over :class:`fractions.Fraction`. A system is a finite
conjunction of constraints ``a . x REL b`` with ``REL`` one of ``<``, ``<=``
or ``=``. Projection is Fourier-Motzkin elimination with explicit strictness
bookkeeping, which also gives feasibility and witness points.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

Rational = Fraction

LT = "<"
LE = "<="
EQ = "="
RELATIONS = (LT, LE, EQ)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or "." in text or "e" in text.lower():
            raise ValueError(f"rationals must be exact p/q, got {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def _int_key(values) -> tuple:
    return tuple((v.numerator, v.denominator) for v in values)


@dataclass(frozen=True)
class LinearConstraint:
    """``coeffs . x  rel  rhs``.

    An all-zero coefficient vector is allowed; such a constraint is a constant
    and ``truth`` tells which one.
    """

    coeffs: tuple
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "_key", (_int_key(self.coeffs), self.rel,
                                          self.rhs.numerator, self.rhs.denominator))

    def __hash__(self):
        # Fraction.__hash__ computes a modular inverse; integer pairs are far cheaper
        return hash(self._key)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def is_constant(self) -> bool:
        return not any(self.coeffs)

    @property
    def truth(self) -> Optional[bool]:
        if not self.is_constant:
            return None
        return _compare(_ZERO, self.rel, self.rhs)

    def evaluate(self, point: Sequence[Fraction]) -> bool:
        lhs = sum((c * x for c, x in zip(self.coeffs, point) if c), _ZERO)
        return _compare(lhs, self.rel, self.rhs)

    def weakened(self) -> "LinearConstraint":
        if self.rel == LT:
            return LinearConstraint(self.coeffs, LE, self.rhs)
        return self

    def normalized(self) -> "LinearConstraint":
        """Scale so the first nonzero coefficient has absolute value 1.

        Equalities are additionally made to have a positive leading entry.
        """
        lead = next((c for c in self.coeffs if c), None)
        if lead is None:
            truth = self.truth
            return TRUE_CONSTRAINT(self.dim) if truth else FALSE_CONSTRAINT(self.dim)
        scale = abs(lead) if self.rel != EQ else lead
        if scale == 1:
            return self
        return LinearConstraint(
            tuple(c / scale for c in self.coeffs), self.rel, self.rhs / scale
        )


def _compare(lhs: Fraction, rel: str, rhs: Fraction) -> bool:
    if rel == LT:
        return lhs < rhs
    if rel == LE:
        return lhs <= rhs
    return lhs == rhs


def TRUE_CONSTRAINT(dim: int) -> LinearConstraint:
    return LinearConstraint((_ZERO,) * dim, LE, _ZERO)


def FALSE_CONSTRAINT(dim: int) -> LinearConstraint:
    return LinearConstraint((_ZERO,) * dim, LT, _ZERO)


def constraint(coeffs: Iterable, rel: str, rhs) -> LinearConstraint:
    """Build a constraint, accepting ``>`` and ``>=`` by negation."""
    coeffs = tuple(as_rational(c) for c in coeffs)
    rhs = as_rational(rhs)
    if rel in (">", ">="):
        coeffs = tuple(-c for c in coeffs)
        rhs = -rhs
        rel = LT if rel == ">" else LE
    elif rel == "==":
        rel = EQ
    return LinearConstraint(coeffs, rel, rhs)


def coordinate_constraint(dim: int, index: int, rel: str, value) -> LinearConstraint:
    """``x_index rel value`` with ``rel`` in ``<, <=, =, >, >=``."""
    coeffs = [0] * dim
    coeffs[index] = 1
    return constraint(coeffs, rel, value)


@dataclass(frozen=True)
class ConstraintSystem:
    """A convex set given by a conjunction of linear constraints."""

    ambient_dim: int
    constraints: tuple = ()

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise ValueError("ambient dimension must be nonnegative")
        for c in self.constraints:
            if len(c.coeffs) != self.ambient_dim:
                raise ValueError(
                    f"constraint of length {len(c.coeffs)} in a system of "
                    f"dimension {self.ambient_dim}"
                )

    @classmethod
    def of(cls, ambient_dim: int, constraints: Iterable[LinearConstraint]):
        return cls(ambient_dim, tuple(constraints))

    @classmethod
    def box(cls, bounds: Sequence[tuple], strict: bool = True) -> "ConstraintSystem":
        """Open (or closed) axis-aligned box from ``(lo, hi)`` pairs."""
        dim = len(bounds)
        rel = LT if strict else LE
        out = []
        for i, (lo, hi) in enumerate(bounds):
            out.append(coordinate_constraint(dim, i, ">" if strict else ">=", lo))
            out.append(coordinate_constraint(dim, i, rel, hi))
        return cls(dim, tuple(out))

    def __and__(self, other: "ConstraintSystem") -> "ConstraintSystem":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return ConstraintSystem(self.ambient_dim, self.constraints + other.constraints)

    def with_constraints(self, extra: Iterable[LinearConstraint]) -> "ConstraintSystem":
        return ConstraintSystem(self.ambient_dim, self.constraints + tuple(extra))

    def closure(self) -> "ConstraintSystem":
        """Same system with every strict relation weakened."""
        return ConstraintSystem(
            self.ambient_dim, tuple(c.weakened() for c in self.constraints)
        )

    def contains(self, point: Sequence) -> bool:
        point = [as_rational(x) for x in point]
        return all(c.evaluate(point) for c in self.constraints)

    @property
    def is_relatively_open_form(self) -> bool:
        return all(c.rel != LE for c in self.constraints)

    @property
    def is_axis_aligned(self) -> bool:
        return all(
            sum(1 for a in c.coeffs if a) <= 1 for c in self.constraints
        )

    def embed(self, ambient_dim: int, coords: Sequence[int]) -> "ConstraintSystem":
        """Re-express in a larger space where variable ``i`` becomes ``coords[i]``."""
        out = []
        for c in self.constraints:
            coeffs = [_ZERO] * ambient_dim
            for i, a in enumerate(c.coeffs):
                coeffs[coords[i]] = a
            out.append(LinearConstraint(tuple(coeffs), c.rel, c.rhs))
        return ConstraintSystem(ambient_dim, tuple(out))

    def simplified(self) -> "ConstraintSystem":
        return ConstraintSystem(self.ambient_dim, _simplify(self.constraints, self.ambient_dim))


# Fourier-Motzkin runs on integer rows ``(coeffs, rel, rhs)`` scaled so that all
# entries are coprime; Python ints are much cheaper than Fractions here.

_FALSE_ROW = None


def _to_row(c: LinearConstraint) -> tuple:
    den = c.rhs.denominator
    for a in c.coeffs:
        if a.denominator != 1:
            den = den * a.denominator // math.gcd(den, a.denominator)
    coeffs = tuple(int(a * den) for a in c.coeffs)
    rhs = int(c.rhs * den)
    return _primitive(coeffs, c.rel, rhs)


def _primitive(coeffs: tuple, rel: str, rhs: int) -> tuple:
    g = math.gcd(*coeffs, rhs)
    if g > 1:
        coeffs = tuple(a // g for a in coeffs)
        rhs //= g
    if rel == EQ:
        lead = next((a for a in coeffs if a), 0)
        if lead < 0:
            coeffs = tuple(-a for a in coeffs)
            rhs = -rhs
    return coeffs, rel, rhs


def _from_row(row: tuple) -> LinearConstraint:
    coeffs, rel, rhs = row
    return LinearConstraint(tuple(Fraction(a) for a in coeffs), rel, Fraction(rhs))


def _row_truth(rel: str, rhs: int) -> bool:
    return 0 < rhs if rel == LT else 0 <= rhs if rel == LE else rhs == 0


def _rsimplify(rows) -> Optional[tuple]:
    """Drop true constants and keep the tightest of parallel rows; ``None`` if evidently infeasible."""
    ineqs: dict = {}
    eqs: dict = {}
    for coeffs, rel, rhs in rows:
        g = math.gcd(*coeffs)
        if not g:
            if _row_truth(rel, rhs):
                continue
            return _FALSE_ROW
        key = tuple(a // g for a in coeffs) if g > 1 else coeffs
        # the row reads  key . x  rel  rhs / g
        if rel == EQ:
            prev = eqs.get(key)
            if prev is not None and prev[1] * g != rhs * prev[2]:
                return _FALSE_ROW
            eqs[key] = ((coeffs, rel, rhs), rhs, g)
            continue
        prev = ineqs.get(key)
        if prev is None:
            ineqs[key] = ((coeffs, rel, rhs), rhs, g)
            continue
        _, prhs, pg = prev
        lhs, rhs_ = rhs * pg, prhs * g
        if lhs < rhs_ or (lhs == rhs_ and rel == LT):
            ineqs[key] = ((coeffs, rel, rhs), rhs, g)
    out = [v[0] for v in eqs.values()]
    for key, (row, rhs, g) in ineqs.items():
        neg = tuple(-a for a in key)
        e = eqs.get(key)
        sign = 1
        if e is None:
            e = eqs.get(neg)
            sign = -1
        if e is None:
            out.append(row)
            continue
        # key.x is pinned to sign * e_rhs / e_g; test it against rhs / g
        value_num, value_den = sign * e[1], e[2]
        if not _row_truth(row[1], rhs * value_den - value_num * g):
            return _FALSE_ROW
    for key, (row, rhs, g) in ineqs.items():
        other = ineqs.get(tuple(-a for a in key))
        if other is None:
            continue
        # key.x < rhs/g  and  key.x > -orhs/og
        orow, orhs, og = other
        lo_num, lo_den = -orhs, og
        cmp = lo_num * g - rhs * lo_den
        if cmp > 0 or (cmp == 0 and (row[1] == LT or orow[1] == LT)):
            return _FALSE_ROW
    return tuple(out)


def _reliminate(rows: tuple, var: int) -> Optional[tuple]:
    """One Fourier-Motzkin step on simplified rows; the column becomes zero."""
    pivot = next((r for r in rows if r[1] == EQ and r[0][var]), None)
    if pivot is not None:
        pc, _, pr = pivot
        a = pc[var]
        out = []
        for r in rows:
            if r is pivot:
                continue
            coeffs, rel, rhs = r
            b = coeffs[var]
            if not b:
                out.append(r)
                continue
            # a * r - b * pivot, with the sign of a kept positive for inequalities
            s = 1 if a > 0 or rel == EQ else -1
            new = tuple(s * (a * ci - b * pi) for ci, pi in zip(coeffs, pc))
            out.append(_primitive(new, rel, s * (a * rhs - b * pr)))
        return _rsimplify(out)
    pos, neg, rest = [], [], []
    for r in rows:
        b = r[0][var]
        if b > 0:
            pos.append(r)
        elif b < 0:
            neg.append(r)
        else:
            rest.append(r)
    for pc, prel, pr in pos:
        bp = pc[var]
        for qc, qrel, qr in neg:
            bq = -qc[var]
            coeffs = tuple(bq * pi + bp * qi for pi, qi in zip(pc, qc))
            rel = LT if (prel == LT or qrel == LT) else LE
            rest.append(_primitive(coeffs, rel, bq * pr + bp * qr))
    return _rsimplify(rest)


def _rorder(rows: tuple, variables: Iterable[int]) -> list:
    """Greedy order: variables fixed by an equality first, then fewest new rows."""
    remaining = list(variables)
    order = []
    while remaining:
        best, best_cost = None, None
        for v in remaining:
            if any(r[1] == EQ and r[0][v] for r in rows):
                cost = -1
            else:
                p = sum(1 for r in rows if r[0][v] > 0)
                n = sum(1 for r in rows if r[0][v] < 0)
                cost = p * n - p - n
            if best_cost is None or cost < best_cost:
                best, best_cost = v, cost
        order.append(best)
        remaining.remove(best)
    return order


def _row_of(c: LinearConstraint) -> tuple:
    row = c.__dict__.get("_row")
    if row is None:
        row = _to_row(c)
        object.__setattr__(c, "_row", row)
    return row


def _rows(constraints) -> Optional[tuple]:
    return _rsimplify([_row_of(c) for c in constraints])


def system_rows(system: "ConstraintSystem") -> tuple:
    """Unsimplified integer rows of a system."""
    return tuple(_row_of(c) for c in system.constraints)


def coordinate_row(dim: int, index: int, rel: str, value: Fraction) -> tuple:
    """Integer row for ``x_index rel value`` with ``rel`` in ``<, =, >``."""
    n, d = value.numerator, value.denominator
    sign = -1 if rel == ">" else 1
    coeffs = [0] * dim
    coeffs[index] = sign * d
    return tuple(coeffs), (LT if rel in "<>" else EQ), sign * n


def rows_feasible(rows, dim: int) -> bool:
    rows = _rsimplify(rows)
    if rows is _FALSE_ROW:
        return False
    return _eliminate_rows(rows, _rorder(rows, range(dim))) is not _FALSE_ROW


def rows_system(rows, dim: int) -> "ConstraintSystem":
    return ConstraintSystem(dim, tuple(_from_row(r) for r in rows))


def _simplify(constraints: Iterable[LinearConstraint], dim: int) -> tuple:
    """Scale to coprime integers, drop true constants, keep the tightest parallel constraint.

    Returns a single false constant when an inconsistency is evident.
    """
    rows = _rows(constraints)
    if rows is _FALSE_ROW:
        return (FALSE_CONSTRAINT(dim),)
    return tuple(_from_row(r) for r in rows)


def _is_false(constraints: tuple) -> bool:
    return any(c.is_constant and not c.truth for c in constraints)


def _eliminate_rows(rows: Optional[tuple], variables) -> Optional[tuple]:
    for v in variables:
        if rows is _FALSE_ROW:
            break
        rows = _reliminate(rows, v)
    return rows


def fm_eliminate(system: ConstraintSystem, var_index: int) -> ConstraintSystem:
    """Project out one variable; the result lives in ``ambient_dim - 1`` dimensions."""
    dim = system.ambient_dim
    if not 0 <= var_index < dim:
        raise IndexError(f"variable {var_index} out of range for dimension {dim}")
    rows = _eliminate_rows(_rows(system.constraints), [var_index])
    if rows is _FALSE_ROW:
        return ConstraintSystem(dim - 1, (FALSE_CONSTRAINT(dim - 1),))
    out = tuple(
        _from_row((c[:var_index] + c[var_index + 1:], rel, rhs)) for c, rel, rhs in rows
    )
    return ConstraintSystem(dim - 1, out)


@lru_cache(maxsize=200_000)
def project(system: ConstraintSystem, keep: tuple) -> ConstraintSystem:
    """Coordinate projection onto the variables in ``keep`` (in that order)."""
    dim = system.ambient_dim
    drop = [v for v in range(dim) if v not in keep]
    rows = _rows(system.constraints)
    if rows is not _FALSE_ROW:
        rows = _eliminate_rows(rows, _rorder(rows, drop))
    if rows is _FALSE_ROW:
        return ConstraintSystem(len(keep), (FALSE_CONSTRAINT(len(keep)),))
    out = tuple(_from_row((tuple(c[k] for k in keep), rel, rhs)) for c, rel, rhs in rows)
    return ConstraintSystem(len(keep), out)


def _axis_bounds(system: ConstraintSystem):
    """Per-variable interval data for a system whose constraints each touch one variable.

    Returns ``None`` when the system is infeasible, otherwise a list of
    ``[lo, lo_strict, hi, hi_strict]`` entries (``None`` bounds are infinite).
    """
    bounds = [[None, False, None, False] for _ in range(system.ambient_dim)]
    for c in system.constraints:
        idx = next((i for i, a in enumerate(c.coeffs) if a), None)
        if idx is None:
            if not c.truth:
                return None
            continue
        a = c.coeffs[idx]
        v = c.rhs / a
        b = bounds[idx]
        strict = c.rel == LT
        if c.rel == EQ or a > 0:
            if b[2] is None or v < b[2] or (v == b[2] and strict):
                b[2], b[3] = v, strict
        if c.rel == EQ or a < 0:
            if b[0] is None or v > b[0] or (v == b[0] and strict):
                b[0], b[1] = v, strict
    for lo, ls, hi, hs in bounds:
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and (ls or hs)):
                return None
    return bounds


@lru_cache(maxsize=500_000)
def is_feasible(system: ConstraintSystem) -> bool:
    """True iff some (rational, equivalently real) point satisfies the system."""
    if system.is_axis_aligned:
        return _axis_bounds(system) is not None
    rows = _rows(system.constraints)
    if rows is _FALSE_ROW:
        return False
    # after eliminating every variable only constants remain, and _rsimplify drops true ones
    return _eliminate_rows(rows, _rorder(rows, range(system.ambient_dim))) is not _FALSE_ROW


def _choose(lo, lo_strict, hi, hi_strict) -> Fraction:
    if lo is not None and hi is not None:
        if lo == hi:
            return lo
        return (lo + hi) / 2
    if lo is not None:
        return lo + 1 if lo_strict else lo
    if hi is not None:
        return hi - 1 if hi_strict else hi
    return _ZERO


def witness_point(system: ConstraintSystem) -> Optional[tuple]:
    """A rational point of the system, or ``None`` when it is empty."""
    dim = system.ambient_dim
    if system.is_axis_aligned:
        bounds = _axis_bounds(system)
        if bounds is None:
            return None
        return tuple(_choose(*b) for b in bounds)
    stages = [_rows(system.constraints)]
    if stages[0] is _FALSE_ROW:
        return None
    order = _rorder(stages[0], range(dim))
    for v in order:
        nxt = _reliminate(stages[-1], v)
        if nxt is _FALSE_ROW:
            return None
        stages.append(nxt)
    values: dict = {}
    for step in range(dim - 1, -1, -1):
        v = order[step]
        lo, ls, hi, hs = None, False, None, False
        for coeffs, rel, rhs in stages[step]:
            a = coeffs[v]
            if not a:
                continue
            rest = sum((coeffs[u] * values[u] for u in values if coeffs[u]), _ZERO)
            bound = (rhs - rest) / a
            strict = rel == LT
            if rel == EQ or a > 0:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hs = bound, strict
            if rel == EQ or a < 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, ls = bound, strict
        values[v] = _choose(lo, ls, hi, hs)
    point = tuple(values[i] for i in range(dim))
    assert system.contains(point), "witness back-substitution failed"
    return point


# ---------------------------------------------------------------------------
# exact linear algebra

def row_reduce(rows: Sequence[Sequence[Fraction]]) -> list:
    """Reduced row echelon form (nonzero rows only)."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out_row = 0
    for col in range(ncols):
        pivot = next((r for r in range(out_row, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[out_row], m[pivot] = m[pivot], m[out_row]
        p = m[out_row][col]
        m[out_row] = [x / p for x in m[out_row]]
        for r in range(len(m)):
            if r != out_row and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[out_row])]
        out_row += 1
        if out_row == len(m):
            break
    return m[:out_row]


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_reduce(rows))


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list:
    """Basis of ``{v : rows . v = 0}``."""
    rref = row_reduce(rows)
    pivots = []
    for r in rref:
        pivots.append(next(i for i, x in enumerate(r) if x))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = _ONE
        for r, p in zip(rref, pivots):
            v[p] = -r[f]
        basis.append(v)
    return basis


def solve_square(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Unique solution of a square system, or ``None`` if singular."""
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rref = row_reduce(aug)
    if len(rref) != n or any(not any(r[:n]) for r in rref):
        return None
    sol = [_ZERO] * n
    for r in rref:
        p = next(i for i, x in enumerate(r[:n]) if x)
        sol[p] = r[n]
    return sol


# ---------------------------------------------------------------------------
# dimension and affine hulls

@lru_cache(maxsize=200_000)
def implied_equalities(system: ConstraintSystem) -> tuple:
    """Coefficient rows of all equalities holding on the (nonempty) solution set."""
    rows = []
    for c in system.constraints:
        if c.is_constant:
            continue
        if c.rel == EQ:
            rows.append(c.coeffs)
        elif c.rel == LE:
            tightened = tuple(
                LinearConstraint(d.coeffs, LT, d.rhs) if d is c else d
                for d in system.constraints
            )
            if not is_feasible(ConstraintSystem(system.ambient_dim, tightened)):
                rows.append(c.coeffs)
    return tuple(rows)


@lru_cache(maxsize=200_000)
def solution_dim(system: ConstraintSystem) -> int:
    """Dimension of the solution set, -1 when empty."""
    if not is_feasible(system):
        return -1
    return system.ambient_dim - rank(implied_equalities(system))


@lru_cache(maxsize=200_000)
def direction_space(system: ConstraintSystem) -> tuple:
    """Basis of the linear space parallel to the affine hull of a nonempty system."""
    rows = implied_equalities(system)
    return tuple(tuple(v) for v in nullspace(rows, system.ambient_dim))


def projected_dim(system: ConstraintSystem, coords: Sequence[int]) -> int:
    """Dimension of the coordinate projection of a nonempty system."""
    basis = direction_space(system)
    return rank([[v[c] for c in coords] for v in basis]) if coords else 0


@lru_cache(maxsize=100_000)
def closure_vertices(system: ConstraintSystem) -> tuple:
    """Vertices of the closure of a bounded nonempty system."""
    closed = system.closure().simplified()
    if _is_false(closed.constraints) or not is_feasible(closed):
        return ()
    dim = system.ambient_dim
    if closed.is_axis_aligned:
        bounds = _axis_bounds(closed)
        axes = []
        for lo, _, hi, _ in bounds:
            if lo is None or hi is None:
                raise ValueError("closure_vertices needs a bounded system")
            axes.append((lo,) if lo == hi else (lo, hi))
        return tuple(itertools.product(*axes))
    eqs = [c for c in closed.constraints if c.rel == EQ]
    ineqs = [c for c in closed.constraints if c.rel != EQ]
    base_rank = rank([c.coeffs for c in eqs])
    need = dim - base_rank
    found = set()
    for combo in itertools.combinations(ineqs, need):
        rows = [c.coeffs for c in eqs] + [c.coeffs for c in combo]
        rhs = [c.rhs for c in eqs] + [c.rhs for c in combo]
        # square up: pick an independent subset of size dim
        sel_rows, sel_rhs = [], []
        for r, b in zip(rows, rhs):
            if rank(sel_rows + [r]) > len(sel_rows):
                sel_rows.append(r)
                sel_rhs.append(b)
        if len(sel_rows) != dim:
            continue
        sol = solve_square(sel_rows, sel_rhs)
        if sol is None:
            continue
        if all(c.evaluate(sol) for c in closed.constraints):
            found.add(tuple(sol))
    return tuple(sorted(found))
