import random
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semimonotone.cell_complex import PiecewiseAffineGraph, graph_pieces, intersect
from semimonotone.cones import CoordinateCone
from semimonotone.connectivity import component_count
from semimonotone.generators import random_graph_candidate
from semimonotone.predicates import (
    is_monotone_graph,
    is_quasi_affine,
    is_semi_monotone,
    is_semi_monotone_via_subspaces,
    monotone_criteria,
    projection_check,
    recheck_witness,
    slice_check,
)

from helpers import (
    L_SHAPE,
    SQUARE,
    U_SHAPE,
    box_union,
    identity_on_unit,
    random_box_union,
    sum_on_square,
    tent,
)


@pytest.mark.parametrize("check", [is_semi_monotone, is_semi_monotone_via_subspaces])
def test_semi_monotone_examples(check):
    assert check(box_union([(0, 2), (1, 5), (-1, 0)])).verdict
    assert check(L_SHAPE).verdict
    v = check(U_SHAPE)
    assert not v.verdict
    assert v.witness["components"] == 2


def test_u_shape_upper_cone_has_two_arms():
    U = PiecewiseAffineGraph.constant(U_SHAPE)
    v = is_monotone_graph(U)
    assert not v.verdict
    assert recheck_witness(U, v)
    upper = CoordinateCone(((1, ">", 1),))
    assert component_count(intersect(graph_pieces(U), upper.system(2))) == 2


def test_quasi_affine_examples():
    assert is_quasi_affine(PiecewiseAffineGraph.constant(SQUARE, [Q(1, 2)])).verdict
    assert is_quasi_affine(identity_on_unit()).verdict
    v = is_quasi_affine(tent())
    assert not v.verdict
    assert v.witness["subspace"] == [1]
    assert recheck_witness(tent(), is_monotone_graph(tent()))


def test_monotone_examples():
    assert is_monotone_graph(sum_on_square()).verdict
    v = is_monotone_graph(tent())
    assert not v.verdict and v.reason == "not quasi-affine"
    assert not is_monotone_graph(PiecewiseAffineGraph.constant(U_SHAPE, [0])).verdict


def test_slice_examples():
    assert slice_check(identity_on_unit(), 1, "<", Q(1, 2)).verdict
    v = slice_check(sum_on_square(), 2, "=", 1)
    assert v.verdict and v.diagnostics["dimension"] == 1
    below = slice_check(sum_on_square(), 0, "<", -5)
    assert below.verdict and below.diagnostics.get("empty")


def test_projection_examples():
    F = sum_on_square()
    assert projection_check(F, (0, 1)).diagnostics["kind"] == "semi-monotone"
    xz = projection_check(F, (0, 2))
    assert xz.verdict and xz.diagnostics["kind"] == "semi-monotone"
    assert projection_check(identity_on_unit(), (1,)).verdict


# --- properties ------------------------------------------------------------

@given(st.integers(0, 10**9), st.integers(1, 3))
def test_cones_and_subspaces_agree_on_box_unions(seed, dim):
    X = random_box_union(random.Random(seed), dim)
    assert is_semi_monotone(X).verdict == is_semi_monotone_via_subspaces(X).verdict


@given(st.integers(0, 10**9))
def test_negative_verdicts_recheck(seed):
    X = random_box_union(random.Random(seed), 2, top=5, count=4)
    F = PiecewiseAffineGraph.constant(X)
    v = is_monotone_graph(F)
    if not v.verdict:
        assert recheck_witness(F, v)


@given(st.integers(0, 10**9), st.integers(1, 3), st.integers(0, 2))
def test_convex_baseline(seed, dim, k):
    """Boxes and affine graphs over boxes are monotone, with or without the shortcut."""
    rng = random.Random(seed)
    X = random_box_union(rng, dim, count=1)
    matrix = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(k)]
    F = PiecewiseAffineGraph.affine(X, matrix, [rng.randint(-2, 2) for _ in range(k)])
    assert is_monotone_graph(F).verdict
    if dim + k <= 3:
        assert is_monotone_graph(F, shortcut=False).verdict


@given(st.integers(0, 10**9))
def test_criteria_agree(seed):
    F = random_graph_candidate(random.Random(seed))
    c = monotone_criteria(F)
    if is_quasi_affine(F).verdict:
        assert c["subspaces"] == c["cones"]
