"""Coordinate cones and affine coordinate subspaces over finite threshold sets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .cell_complex import PiecewiseAffineGraph, PieceSet
from .rational_linear import (
    ConstraintSystem,
    as_rational,
    closure_vertices,
    coordinate_constraint,
)

CONE_RELATIONS = ("<", "=", ">")


@dataclass(frozen=True)
class CoordinateCone:
    """Conjunction of conditions ``x_j rel c``, at most one per coordinate.

    The empty conjunction is the whole space.
    """

    conditions: tuple = ()

    def __post_init__(self):
        clean = tuple((int(j), rel, as_rational(c)) for j, rel, c in self.conditions)
        idx = [j for j, _, _ in clean]
        if idx != sorted(set(idx)):
            raise ValueError("coordinates must be strictly increasing")
        for _, rel, _ in clean:
            if rel not in CONE_RELATIONS:
                raise ValueError(f"cone relation must be one of {CONE_RELATIONS}")
        object.__setattr__(self, "conditions", clean)

    @property
    def is_affine_subspace(self) -> bool:
        return all(rel == "=" for _, rel, _ in self.conditions)

    @property
    def coords(self) -> tuple:
        return tuple(j for j, _, _ in self.conditions)

    def system(self, ambient_dim: int) -> ConstraintSystem:
        return ConstraintSystem(
            ambient_dim,
            tuple(coordinate_constraint(ambient_dim, j, rel, c)
                  for j, rel, c in self.conditions),
        )

    def contains(self, point) -> bool:
        for j, rel, c in self.conditions:
            x = point[j]
            if rel == "<" and not x < c:
                return False
            if rel == ">" and not x > c:
                return False
            if rel == "=" and x != c:
                return False
        return True

    def describe(self) -> str:
        if not self.conditions:
            return "whole space"
        return " and ".join(f"x{j} {rel} {c}" for j, rel, c in self.conditions)

    def to_json(self) -> list:
        return [[j, rel, str(c)] for j, rel, c in self.conditions]


AffineCoordinateSubspace = CoordinateCone


def critical_thresholds(F, coord: int) -> list:
    """Values on one coordinate where the combinatorics of slices can change.

    For a :class:`PiecewiseAffineGraph` these are the grid endpoints (domain
    coordinates) or the map's values at triangulation vertices (range
    coordinates). For a :class:`PieceSet` they are the coordinates of all
    vertices of the pieces' closures.
    """
    if isinstance(F, PiecewiseAffineGraph):
        if not 0 <= coord < F.ambient_dim:
            raise IndexError("coordinate out of range")
        if coord in F.domain_coords:
            axis = F.domain_coords.index(coord)
            return F.domain.axis_endpoints(axis)
        comp = F.range_coords.index(coord)
        return sorted({v[comp] for v in F.vertex_values().values()})
    return sorted({v[coord] for p in F.pieces for v in closure_vertices(p)})


def all_thresholds(F) -> list:
    return [critical_thresholds(F, j) for j in range(F.ambient_dim)]


def representative_values(criticals: Sequence[Fraction]) -> list:
    """Criticals, midpoints between neighbours, and one value beyond each end."""
    crit = list(criticals)
    if not crit:
        return [Fraction(0)]
    out = [crit[0] - 1]
    for a, b in zip(crit, crit[1:]):
        out.append(a)
        out.append((a + b) / 2)
    out.append(crit[-1])
    out.append(crit[-1] + 1)
    return out


def iter_conditions(per_axis: Sequence[Sequence], relations) -> Iterator[tuple]:
    """Condition tuples in enumeration order: by number of axes, then lexicographically.

    With ``relations`` given, ``per_axis`` holds values and each axis offers
    every ``(j, rel, value)``; with ``relations=None`` it already holds the
    condition triples.
    """
    dim = len(per_axis)
    if relations is not None:
        per_axis = [[(j, rel, c) for rel in relations for c in per_axis[j]] for j in range(dim)]
    for size in range(dim + 1):
        for coords in itertools.combinations(range(dim), size):
            yield from itertools.product(*(per_axis[j] for j in coords))


def _enumerate(reps_per_axis: Sequence[Sequence[Fraction]], relations) -> Iterator[CoordinateCone]:
    for combo in iter_conditions(reps_per_axis, relations):
        yield CoordinateCone(combo)


def _reps(F_or_reps):
    if isinstance(F_or_reps, (list, tuple)):
        return [list(r) for r in F_or_reps]
    return [representative_values(c) for c in all_thresholds(F_or_reps)]


def enumerate_cones(F) -> Iterator[CoordinateCone]:
    """All representative coordinate cones, whole space first.

    ``F`` is a graph or piece set, or directly a list of representative
    values per coordinate.
    """
    return _enumerate(_reps(F), CONE_RELATIONS)


def enumerate_affine_subspaces(F) -> Iterator[CoordinateCone]:
    return _enumerate(_reps(F), ("=",))


def cone_count(reps_per_axis: Sequence[Sequence]) -> int:
    """Closed-form size of :func:`enumerate_cones`."""
    total = 0
    dim = len(reps_per_axis)
    for size in range(dim + 1):
        for coords in itertools.combinations(range(dim), size):
            prod = 1
            for j in coords:
                prod *= 3 * len(reps_per_axis[j])
            total += prod
    return total
