import itertools
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semimonotone.rational_linear import (
    ConstraintSystem,
    LinearConstraint,
    as_rational,
    constraint,
    fm_eliminate,
    is_feasible,
    solution_dim,
    witness_point,
)


def system(dim, *cons):
    return ConstraintSystem(dim, tuple(constraint(*c) for c in cons))


def same_set(a: ConstraintSystem, b: ConstraintSystem) -> bool:
    """Each system implies every constraint of the other."""
    def implies(s, c):
        neg = [constraint(c.coeffs, ">=" if c.rel == "<" else ">", c.rhs)]
        if c.rel == "=":
            return all(not is_feasible(s.with_constraints([constraint(c.coeffs, r, c.rhs)]))
                       for r in ("<", ">"))
        return not is_feasible(s.with_constraints(neg))
    return all(implies(a, c) for c in b.constraints) and all(implies(b, c) for c in a.constraints)


# --- frozen examples -------------------------------------------------------

def test_eliminate_diagonal_segment():
    s = system(2, ([1, -1], "=", 0), ([1, 0], ">", 0), ([1, 0], "<", 1))
    out = fm_eliminate(s, 1)
    assert out.ambient_dim == 1
    assert same_set(out, system(1, ([1], ">", 0), ([1], "<", 1)))


def test_eliminate_contradiction_is_infeasible():
    out = fm_eliminate(system(1, ([1], ">", 0), ([1], "<", 0)), 0)
    assert not is_feasible(out)


def test_eliminate_triangle_corner():
    s = system(2, ([1, 0], ">", 0), ([1, 0], "<", 1), ([0, 1], ">", 0), ([0, 1], "<", 1),
               ([1, 1], "<", Q(1, 2)))
    out = fm_eliminate(s, 1)
    assert same_set(out, system(1, ([1], ">", 0), ([1], "<", Q(1, 2))))
    # grid oracle on the eliminated variable
    for n in range(-4, 9):
        x = Q(n, 8)
        exists = any(s.contains((x, Q(m, 64))) for m in range(1, 64))
        assert exists == out.contains((x,))


@pytest.mark.parametrize("cons, expected", [
    ([([1], ">", 0), ([1], "<", 1)], True),
    ([([1], "=", 0), ([1], ">", 0)], False),
])
def test_feasibility_examples_1d(cons, expected):
    assert is_feasible(system(1, *cons)) is expected


def test_feasible_on_antidiagonal():
    s = system(2, ([1, 0], ">", 0), ([1, 0], "<", 1), ([0, 1], ">", 0), ([0, 1], "<", 1),
               ([1, 1], "=", 1))
    assert is_feasible(s)
    assert s.contains((Q(1, 2), Q(1, 2)))


def test_witness_examples():
    p = witness_point(system(1, ([1], ">", 0), ([1], "<", 1)))
    assert 0 < p[0] < 1
    assert witness_point(system(1, ([1], ">", 0), ([1], "<", 0))) is None
    s = system(2, ([1, 1], "=", 1), ([1, 0], ">", 0), ([0, 1], ">", 0), ([1, -1], "<", 0))
    x, y = witness_point(s)
    assert x > 0 and y > 0 and x + y == 1 and x < y


@pytest.mark.parametrize("cons, dim", [
    ([([1, 0], ">", 0), ([1, 0], "<", 1), ([0, 1], ">", 0), ([0, 1], "<", 1)], 2),
    ([([1, 0], "=", 0), ([0, 1], ">", 0), ([0, 1], "<", 1)], 1),
    ([([1, 1], "=", 1), ([1, -1], "=", 0)], 0),
])
def test_solution_dim_examples(cons, dim):
    assert solution_dim(system(2, *cons)) == dim


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(ValueError):
        as_rational("0.5")


def test_zero_coefficient_constraints_become_constants():
    assert not is_feasible(system(2, ([0, 0], "<", 0)))
    assert is_feasible(system(2, ([0, 0], "<", 1)))


# --- brute-force oracle ----------------------------------------------------

def _solve(rows, rhs):
    """Unique solution of a square rational system, or None when singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col] / m[col][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def oracle_feasible(s: ConstraintSystem) -> bool:
    """Basic solutions of the closure of a bounded system; their barycentre
    lies in the relative interior of the closure, which meets ``s`` iff ``s``
    is nonempty."""
    n = s.ambient_dim
    closed = [(c.coeffs, c.rhs) if c.rel != "=" else None for c in s.constraints]
    eqs = [(c.coeffs, c.rhs) for c in s.constraints if c.rel == "="]
    ineqs = [x for x in closed if x is not None]
    hyper = eqs + ineqs
    vertices = set()
    for combo in itertools.combinations(range(len(hyper)), n):
        pt = _solve([hyper[i][0] for i in combo], [hyper[i][1] for i in combo])
        if pt is None:
            continue
        if all(sum(a * x for a, x in zip(c, pt)) == b for c, b in eqs) and \
                all(sum(a * x for a, x in zip(c, pt)) <= b for c, b in ineqs):
            vertices.add(pt)
    if n == 0:
        return all(c.rhs > 0 if c.rel == "<" else c.rhs >= 0 if c.rel == "<=" else c.rhs == 0
                   for c in s.constraints)
    if not vertices:
        return False
    centre = tuple(sum(v[i] for v in vertices) / len(vertices) for i in range(n))
    return s.contains(centre)


def random_system(rng: random.Random) -> ConstraintSystem:
    n = rng.randint(1, 4)
    m = rng.randint(1, 10 if n <= 2 else 6)
    cons = []
    for _ in range(m):
        coeffs = [Q(rng.randint(-2, 2), rng.choice((1, 1, 2))) for _ in range(n)]
        rel = rng.choice(("<", "<", "<=", "="))
        cons.append(LinearConstraint(tuple(coeffs), rel, Q(rng.randint(-3, 3), rng.choice((1, 2)))))
    # keep every system inside a box so the oracle's vertex search is complete
    for i in range(n):
        e = [Q(0)] * n
        e[i] = Q(1)
        cons.append(LinearConstraint(tuple(e), "<", Q(3)))
        cons.append(LinearConstraint(tuple(-x for x in e), "<", Q(3)))
    return ConstraintSystem(n, tuple(cons))


def test_feasibility_matches_vertex_oracle_on_1000_systems():
    rng = random.Random(20261016)
    feasible = 0
    for _ in range(1000):
        s = random_system(rng)
        got = is_feasible(s)
        assert got == oracle_feasible(s), s
        feasible += got
        if got:
            assert s.contains(witness_point(s))
    # both outcomes are exercised
    assert 100 < feasible < 900


# --- properties ------------------------------------------------------------

@st.composite
def systems(draw):
    seed = draw(st.integers(0, 10**9))
    return random_system(random.Random(seed))


@given(systems(), st.data())
def test_feasibility_invariant_under_elimination(s, data):
    i = data.draw(st.integers(0, s.ambient_dim - 1))
    assert is_feasible(s) == is_feasible(fm_eliminate(s, i))


@given(systems())
def test_witness_satisfies_every_constraint(s):
    p = witness_point(s)
    assert (p is not None) == is_feasible(s)
    if p is not None:
        assert s.contains(p)


@given(systems(), st.integers(0, 10**6))
def test_adding_a_constraint_never_raises_dimension(s, seed):
    rng = random.Random(seed)
    c = LinearConstraint(tuple(Q(rng.randint(-2, 2)) for _ in range(s.ambient_dim)),
                         rng.choice(("<", "<=", "=")), Q(rng.randint(-2, 2)))
    assert solution_dim(s.with_constraints([c])) <= solution_dim(s)
