import random
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semimonotone.cell_complex import PiecewiseAffineGraph, member_pieces
from semimonotone.connectivity import set_dimension
from semimonotone.generators import disconnected_pair, generate
from semimonotone.helly import (
    Family,
    check_conclusion,
    check_dim_clause,
    check_hypotheses,
    classical_helly_check,
    find_dim_witness,
    intersect_family,
    katchalski_g,
    min_dim_formula_check,
    verify,
)

from helpers import box_union, identity_on_unit


def set_member(*boxes):
    return PiecewiseAffineGraph.constant(box_union(*boxes))


def line(slope, offset, lo=0, hi=2):
    return PiecewiseAffineGraph.affine(box_union([(lo, hi)]), [[slope]], [offset])


NESTED = Family(2, (set_member([(0, 4), (0, 4)]), set_member([(1, 4), (0, 3)]),
                    set_member([(1, 2), (1, 2)])))


def test_hypotheses_on_nested_boxes():
    rep = check_hypotheses(NESTED)
    assert rep.hypothesis_ok
    assert [r.J for r in rep.records][:4] == [(0,), (1,), (2,), (0, 1)]


def test_disjoint_members_fail_with_a_pair():
    fam = Family(2, (set_member([(0, 1), (0, 1)]), set_member([(2, 3), (0, 1)])))
    rep = check_hypotheses(fam)
    assert not rep.hypothesis_ok
    assert rep.counterexample["J"] == [1, 2]


def test_disconnected_overlap_fails_with_two_components():
    pair = disconnected_pair(2)
    cover = set_member([(-20, 40), (-20, 40)])
    fam = Family(2, pair.members + (cover,))
    rep = check_hypotheses(fam)
    assert not rep.hypothesis_ok
    assert rep.counterexample["J"] == [1, 2]
    assert rep.counterexample["components"] == 2


def test_conclusion_examples():
    assert check_conclusion(NESTED).conclusion_ok
    small = Family(2, NESTED.members[:2])
    hyp = check_hypotheses(small)
    conc = check_conclusion(small, hyp)
    assert conc.details["full"] == hyp.records[-1].to_json()


def test_six_staircases_in_the_plane():
    found = 0
    for seed in range(40):
        fam = generate("random_staircase_semimonotone", {"s": 6, "dim": 2}, seed)
        hyp = check_hypotheses(fam)
        if hyp.hypothesis_ok:
            found += 1
            assert check_conclusion(fam, hyp).conclusion_ok
    assert found >= 1


def test_dim_clause_examples():
    rep = check_dim_clause(NESTED, 2)
    assert rep.dim_clause["ok"] and not rep.violations
    segment = Family(2, (line(1, 0, 0, 3), line(1, 0, 0, 2), line(1, 0, 1, 3)))
    rep = check_dim_clause(segment, 1)
    assert rep.dim_clause == {"d": 1, "dim_full": 1, "ok": True}
    assert check_dim_clause(segment, 0).dim_clause["ok"]
    with pytest.raises(ValueError):
        check_dim_clause(segment, 2)
    with pytest.raises(ValueError):
        check_dim_clause(NESTED, -1)


@pytest.mark.parametrize("n, j, g", [(3, 0, 4), (3, 1, 6), (3, 3, 4), (1, 1, 2), (6, 1, 12)])
def test_katchalski_examples(n, j, g):
    assert katchalski_g(n, j) == g


def test_katchalski_rejects_bad_j():
    with pytest.raises(ValueError):
        katchalski_g(2, 3)


def test_min_dim_formula_examples():
    assert min_dim_formula_check(NESTED).details == {"min_small": 2, "dim_full": 2}
    fam = Family(2, (set_member([(0, 2), (0, 2)]), line(1, 0)))
    assert min_dim_formula_check(fam).details == {"min_small": 1, "dim_full": 1}
    single = Family(2, (line(1, 0),))
    assert min_dim_formula_check(single).details["dim_full"] == 1


def test_dim_witness_examples():
    cross = Family(2, (line(1, 0), line(-1, 2)))
    J = find_dim_witness(cross, 0)
    assert len(J) <= 2
    assert set_dimension(intersect_family(cross, J)) == 0
    fam = Family(2, (set_member([(0, 2), (0, 2)]), line(1, 0)))
    assert find_dim_witness(fam, 1) == (1,)
    with pytest.raises(ValueError):
        find_dim_witness(NESTED, 2)


def test_classical_examples():
    rep = classical_helly_check([((0, 2),), ((1, 3),), ((Q(3, 2), Q(5, 2)),)])
    assert rep.conclusion_ok
    assert rep.details["point"] == ["7/4"]
    rep = classical_helly_check([((0, 1),), ((2, 3),)])
    assert not rep.applicable


def test_intersect_family_examples():
    assert intersect_family(NESTED, (0,)).pieces == member_pieces(NESTED.members[0]).pieces
    twins = Family(2, (identity_on_unit(), identity_on_unit()))
    both = intersect_family(twins, (0, 1))
    for n in range(1, 10):
        x = Q(n, 10)
        assert both.contains((x, x))
    assert not both.contains((Q(1), Q(1)))


def test_verify_combines_the_clauses():
    rep = verify(NESTED, d=2, min_dim=True)
    assert rep.hypothesis_ok and rep.conclusion_ok and not rep.violations


# --- properties ------------------------------------------------------------

KINDS = ["nested_boxes", "random_affine_graphs", "random_staircase_semimonotone"]


@given(st.sampled_from(KINDS), st.integers(0, 10**6), st.integers(1, 2), st.integers(2, 4))
def test_intersections_shrink_as_J_grows(kind, seed, dim, s):
    fam = generate(kind, {"s": s, "dim": dim}, seed)
    rng = random.Random(seed)
    full = intersect_family(fam, range(fam.size))
    part = intersect_family(fam, rng.sample(range(fam.size), rng.randint(1, fam.size)))
    for _ in range(60):
        p = tuple(Q(rng.randint(-4, 40), 4) for _ in range(dim))
        if full.contains(p):
            assert part.contains(p)


@given(st.integers(0, 10**6), st.integers(2, 3), st.integers(2, 5))
def test_dim_witness_revalidates(seed, dim, s):
    fam = generate("random_affine_graphs", {"s": s, "dim": dim}, seed)
    hyp = check_hypotheses(fam)
    p = set_dimension(intersect_family(fam, range(fam.size)))
    if not hyp.hypothesis_ok or p >= dim:
        return
    J = find_dim_witness(fam, p)
    assert len(J) <= dim - p
    assert set_dimension(intersect_family(fam, J)) == p


@given(st.sampled_from(KINDS), st.integers(0, 10**6), st.integers(1, 2), st.integers(2, 5))
def test_theorem_holds_on_generated_families(kind, seed, dim, s):
    fam = generate(kind, {"s": s, "dim": dim}, seed)
    hyp = check_hypotheses(fam)
    if hyp.hypothesis_ok:
        d = min(r.dim for r in hyp.records)
        rep = verify(fam, d=d, min_dim=True)
        assert rep.conclusion_ok and not rep.violations
