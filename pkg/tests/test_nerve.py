import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from semimonotone.cell_complex import PiecewiseAffineGraph
from semimonotone.generators import generate, minimal_empty_triple
from semimonotone.helly import Family, NotApplicable
from semimonotone.nerve import (
    HomologyProfile,
    SimplicialComplex,
    boundary_of_simplex,
    full_simplex,
    homology,
    minimal_empty_audit,
    nerve,
    smith_diagonal,
    sphere_profile,
)

from helpers import box_union


def set_member(*boxes):
    return PiecewiseAffineGraph.constant(box_union(*boxes))


DISJOINT = Family(1, (set_member([(0, 1)]), set_member([(2, 3)])))


def test_nerve_examples():
    nested = generate("nested_boxes", {"s": 3}, 0)
    assert nerve(nested) == full_simplex((0, 1, 2))
    assert nerve(minimal_empty_triple()) == boundary_of_simplex(3)
    K = nerve(DISJOINT)
    assert sorted(K.faces) == [(0,), (1,)]


def test_homology_examples():
    assert homology(full_simplex((0, 1, 2, 3))) == HomologyProfile((1, 0, 0, 0))
    assert homology(boundary_of_simplex(3)).betti == (1, 1)
    assert homology(boundary_of_simplex(4)).betti == (1, 0, 1)
    assert homology(nerve(DISJOINT)).betti == (2,)


@pytest.mark.parametrize("p", range(2, 7))
def test_sphere_boundaries(p):
    assert homology(boundary_of_simplex(p)) == sphere_profile(p - 2)


def test_projective_plane_has_torsion():
    # six-vertex triangulation of the real projective plane
    triangles = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
                 (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    H = homology(SimplicialComplex.from_maximal(range(6), triangles))
    assert H.betti == (1, 0, 0)
    assert H.torsion == ((), (2,), ())


def test_minimal_empty_audit_examples():
    audit = minimal_empty_audit(minimal_empty_triple())
    assert audit.p == 3 and audit.ok
    assert audit.homology.betti == (1, 1)
    assert audit.forced_min_p == 0
    pair = minimal_empty_audit(DISJOINT)
    assert pair.p == 2 and pair.ok and pair.homology.betti == (2,)
    with pytest.raises(NotApplicable):
        minimal_empty_audit(generate("nested_boxes", {"s": 3}, 0))


def test_complex_validation():
    with pytest.raises(ValueError):
        SimplicialComplex((0, 1), frozenset({(0, 1)}))


# --- properties ------------------------------------------------------------

@given(st.lists(st.lists(st.integers(-6, 6), min_size=1, max_size=5), min_size=1, max_size=5))
def test_smith_diagonal_matches_sympy(rows):
    width = min(len(r) for r in rows)
    M = [r[:width] for r in rows]
    expected = [abs(int(d)) for d in invariant_factors(Matrix(M), domain=ZZ) if d]
    assert smith_diagonal(M) == expected


def random_complex(rng):
    n = rng.randint(2, 7)
    maximal = [rng.sample(range(n), rng.randint(1, min(4, n))) for _ in range(rng.randint(1, 6))]
    return SimplicialComplex.from_maximal(range(n), maximal)


@given(st.integers(0, 10**9))
def test_euler_characteristic_consistency(seed):
    K = random_complex(random.Random(seed))
    H = homology(K)
    assert K.euler_characteristic() == H.euler_characteristic()


@given(st.integers(0, 10**6), st.integers(2, 5))
def test_nerve_of_subfamily_is_induced(seed, s):
    fam = generate("random_staircase_semimonotone", {"s": s, "dim": 2}, seed)
    K = nerve(fam)
    rng = random.Random(seed)
    J = sorted(rng.sample(range(s), rng.randint(1, s)))
    sub = nerve(fam.subfamily(J))
    relabel = {f: tuple(J[i] for i in f) for f in sub.faces}
    assert set(relabel.values()) == set(K.induced(J).faces)
