"""Nerve complexes of families and integral simplicial homology."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .helly import Family, NotApplicable, intersect_family


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed set of vertex subsets, each stored as a sorted tuple."""

    vertices: tuple
    faces: frozenset

    @classmethod
    def from_maximal(cls, vertices: Iterable[int], maximal: Iterable[Sequence[int]]) -> "SimplicialComplex":
        faces = set()
        for m in maximal:
            m = tuple(sorted(set(m)))
            for k in range(1, len(m) + 1):
                faces.update(itertools.combinations(m, k))
        return cls(tuple(sorted(set(vertices))), frozenset(faces))

    def __post_init__(self):
        verts = set(self.vertices)
        for f in self.faces:
            if not f or tuple(sorted(set(f))) != f:
                raise ValueError(f"face {f} must be a nonempty sorted tuple without repeats")
            if not set(f) <= verts:
                raise ValueError(f"face {f} uses unknown vertices")
            for g in itertools.combinations(f, len(f) - 1):
                if g and g not in self.faces:
                    raise ValueError(f"face {f} is missing its facet {g}")

    @property
    def dim(self) -> int:
        return max((len(f) - 1 for f in self.faces), default=-1)

    def faces_of_dim(self, q: int) -> list:
        return sorted(f for f in self.faces if len(f) == q + 1)

    def f_vector(self) -> tuple:
        return tuple(len(self.faces_of_dim(q)) for q in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * n for q, n in enumerate(self.f_vector()))

    def induced(self, vertices: Iterable[int]) -> "SimplicialComplex":
        keep = set(vertices)
        return SimplicialComplex(
            tuple(v for v in self.vertices if v in keep),
            frozenset(f for f in self.faces if set(f) <= keep),
        )

    def to_json(self) -> list:
        return [list(f) for f in sorted(self.faces, key=lambda f: (len(f), f))]


def full_simplex(vertices: Sequence[int]) -> SimplicialComplex:
    return SimplicialComplex.from_maximal(vertices, [vertices])


def boundary_of_simplex(p: int) -> SimplicialComplex:
    """``∂Δ^{p-1}`` on vertices ``0..p-1``: every proper nonempty subset."""
    if p < 2:
        raise ValueError("need at least two vertices")
    verts = tuple(range(p))
    return SimplicialComplex.from_maximal(verts, itertools.combinations(verts, p - 1))


# ---------------------------------------------------------------------------
# Smith normal form

def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list:
    """Nonzero diagonal entries of the Smith normal form, each dividing the next."""
    A = [list(map(int, row)) for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0

    def move_to(t, i, j):
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]

    diag = []
    for t in range(min(rows, cols)):
        cells = [(i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not cells:
            break
        move_to(t, *min(cells, key=lambda ij: abs(A[ij[0]][ij[1]])))
        while True:
            piv = A[t][t]
            for i in range(t + 1, rows):
                q = A[i][t] // piv
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
            for j in range(t + 1, cols):
                q = A[t][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[t]
            rest = [(i, t) for i in range(t + 1, rows) if A[i][t]]
            rest += [(t, j) for j in range(t + 1, cols) if A[t][j]]
            if rest:
                # remainders are smaller than the pivot; take the smallest as new pivot
                move_to(t, *min(rest, key=lambda ij: abs(A[ij[0]][ij[1]])))
                continue
            bad = next((i for i in range(t + 1, rows)
                        for j in range(t + 1, cols) if A[i][j] % piv), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
    return diag


@dataclass(frozen=True)
class HomologyProfile:
    """Integral homology ranks and torsion per degree."""

    betti: tuple
    torsion: tuple = ()
    reduced: bool = False

    def __post_init__(self):
        if not self.torsion:
            object.__setattr__(self, "torsion", tuple(() for _ in self.betti))

    @property
    def torsion_free(self) -> bool:
        return all(not t for t in self.torsion)

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * b for q, b in enumerate(self.betti))

    def to_json(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion],
                "reduced": self.reduced}


def boundary_matrix(K: SimplicialComplex, q: int) -> list:
    """``∂_q: C_q -> C_{q-1}`` with rows indexed by (q-1)-faces in sorted order."""
    rows = K.faces_of_dim(q - 1)
    cols = K.faces_of_dim(q)
    index = {f: i for i, f in enumerate(rows)}
    M = [[0] * len(cols) for _ in rows]
    for c, face in enumerate(cols):
        for k in range(len(face)):
            M[index[face[:k] + face[k + 1:]]][c] = (-1) ** k
    return M


def homology(K: SimplicialComplex) -> HomologyProfile:
    """Unreduced integral homology of ``K``."""
    if not K.faces:
        raise ValueError("homology of the empty complex is not defined here")
    top = K.dim
    sizes = [len(K.faces_of_dim(q)) for q in range(top + 1)]
    divisors = [[] for _ in range(top + 2)]  # divisors[q] for ∂_q
    for q in range(1, top + 1):
        divisors[q] = smith_diagonal(boundary_matrix(K, q))
    betti, torsion = [], []
    for q in range(top + 1):
        rank_out = len(divisors[q]) if q >= 1 else 0
        rank_in = len(divisors[q + 1])
        betti.append(sizes[q] - rank_out - rank_in)
        torsion.append(tuple(d for d in divisors[q + 1] if d > 1))
    return HomologyProfile(tuple(betti), tuple(torsion))


def sphere_profile(m: int) -> HomologyProfile:
    """Unreduced homology of ``S^m``; ``S^0`` is two points."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return HomologyProfile((2,))
    return HomologyProfile((1,) + (0,) * (m - 1) + (1,))


# ---------------------------------------------------------------------------

def nerve(fam: Family) -> SimplicialComplex:
    """Faces are the index sets ``J`` (0-based) with ``F_J`` nonempty."""
    faces = set()
    level = [(i,) for i in range(fam.size) if not intersect_family(fam, (i,)).is_empty]
    while level:
        faces.update(level)
        nxt = []
        for J in level:
            for v in range(J[-1] + 1, fam.size):
                cand = J + (v,)
                if all(cand[:k] + cand[k + 1:] in faces for k in range(len(cand))):
                    if not intersect_family(fam, cand).is_empty:
                        nxt.append(cand)
        level = nxt
    return SimplicialComplex(tuple(range(fam.size)), frozenset(faces))


@dataclass
class EmptyAudit:
    J: tuple
    p: int
    nerve: SimplicialComplex
    homology: HomologyProfile
    is_boundary: bool
    sphere_ok: bool
    forced_min_p: int = 0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.is_boundary and self.sphere_ok

    def to_json(self) -> dict:
        return {
            "J": [j + 1 for j in self.J],
            "p": self.p,
            "nerve": [[self.J[i] + 1 for i in f] for f in self.nerve.to_json()],
            "homology": self.homology.to_json(),
            "is_boundary_of_simplex": self.is_boundary,
            "matches_sphere": self.sphere_ok,
            "forced_min_p": self.forced_min_p,
            "notes": list(self.notes),
        }


def minimal_empty_audit(fam: Family) -> EmptyAudit:
    """Find a smallest empty subfamily and check its nerve is a sphere boundary.

    Raises :class:`NotApplicable` when the whole family has a common point.
    """
    everything = tuple(range(fam.size))
    if not intersect_family(fam, everything).is_empty:
        raise NotApplicable("not applicable: the whole family has nonempty intersection")
    found = None
    for size in range(1, fam.size + 1):
        for J in itertools.combinations(everything, size):
            if intersect_family(fam, J).is_empty:
                found = J
                break
        if found:
            break
    p = len(found)
    sub = fam.subfamily(found)
    K = nerve(sub)
    notes = []
    if p == 1:
        # a single empty member has the empty nerve; nothing to compare
        return EmptyAudit(found, 1, K, HomologyProfile(()), False, False, 0,
                          ["an empty member has no nerve"])
    is_boundary = K == boundary_of_simplex(p)
    H = homology(K)
    sphere_ok = H == sphere_profile(p - 2)
    N = fam.ambient_dim
    small_nonempty = all(
        not intersect_family(fam, J).is_empty
        for size in range(1, min(fam.size, N + 1) + 1)
        for J in itertools.combinations(everything, size)
    )
    forced = 0
    if small_nonempty:
        forced = N + 2
        notes.append(f"every subfamily of at most {N + 1} members meets, so p >= {N + 2}")
        if p < forced:
            notes.append(f"inconsistent: p = {p} < {forced}")
    return EmptyAudit(found, p, K, H, is_boundary, sphere_ok, forced, notes)
