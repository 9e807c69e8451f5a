import itertools
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semimonotone.cell_complex import GENERAL, PieceSet, graph_pieces
from semimonotone.connectivity import (
    component_count,
    connected_components,
    is_connected,
    pieces_separated,
    set_dimension,
)
from semimonotone.generators import disconnected_pair
from semimonotone.helly import intersect_family
from semimonotone.rational_linear import ConstraintSystem, constraint

from helpers import SQUARE, identity_on_unit


def interval(lo, hi):
    return ConstraintSystem(1, (constraint([1], ">", lo), constraint([1], "<", hi)))


def test_separation_examples():
    assert pieces_separated(interval(0, 1), interval(1, 2))
    assert not pieces_separated(interval(0, Q(1)), interval(Q(1, 2), 2))
    segment = ConstraintSystem(2, (constraint([1, 0], ">", 0), constraint([1, 0], "<", 1),
                                   constraint([0, 1], "=", 0)))
    point = ConstraintSystem(2, (constraint([1, 0], "=", 1), constraint([0, 1], "=", 0)))
    assert not pieces_separated(segment, point)


def test_component_examples():
    assert component_count(PieceSet(1, (interval(0, 1), interval(1, 2)))) == 2
    assert component_count(PieceSet(1, (interval(0, 1), interval(Q(1, 2), 2)))) == 1
    assert is_connected(PieceSet(1, (interval(0, 1), interval(Q(1, 2), 2))))
    assert not is_connected(PieceSet(1, (interval(0, 1), interval(1, 2))))
    assert is_connected(PieceSet(1, ()))
    pair = intersect_family(disconnected_pair(2), (0, 1))
    assert component_count(pair) == 2
    assert [len(c.pieces) > 0 for c in connected_components(pair)] == [True, True]


def test_set_dimension_examples():
    assert set_dimension(PieceSet(2, ())) == -1
    assert set_dimension(SQUARE.pieces()) == 2
    assert set_dimension(graph_pieces(identity_on_unit())) == 1


# --- rasterization oracle ----------------------------------------------------

VALUES = [Q(n, 2) for n in range(7)]   # 0, 1/2, ..., 3


def random_pieces(rng: random.Random) -> list:
    """Open rectangles, open segments and points with corners on a half-integer grid."""
    out = []
    for _ in range(rng.randint(1, 6)):
        kind = rng.choice(("rect", "rect", "hseg", "vseg", "point"))
        bounds = []
        for axis in range(2):
            flat = kind == "point" or (kind, axis) in (("hseg", 1), ("vseg", 0))
            if flat:
                v = rng.choice(VALUES)
                bounds.append((v, v))
            else:
                a, b = sorted(rng.sample(VALUES, 2))
                bounds.append((a, b))
        out.append(tuple(bounds))
    return out


def piece_system(bounds, slanted=False) -> ConstraintSystem:
    cons = []
    for axis, (a, b) in enumerate(bounds):
        e = [0, 0]
        e[axis] = 1
        if a == b:
            cons.append(constraint(e, "=", a))
        else:
            cons += [constraint(e, ">", a), constraint(e, "<", b)]
    if slanted:
        cons.append(constraint([1, 1], "<", 100))
    return ConstraintSystem(2, tuple(cons))


def raster_count(pieces) -> int:
    """Grid graph at half the smallest threshold gap.

    Neighbouring samples (differing by at most one step per axis) are joined
    when both they and their midpoint lie in the union: the open segment
    between them stays inside one cell of the threshold arrangement.
    """
    thresholds = sorted({v for b in pieces for lo_hi in b for v in lo_hi})
    gaps = [b - a for a, b in zip(thresholds, thresholds[1:])] or [Q(1)]
    h = min(gaps) / 2
    lo, hi = thresholds[0], thresholds[-1]
    steps = int((hi - lo) / h)

    def inside(p):
        return any(all(a <= x <= b if a == b else a < x < b for (a, b), x in zip(bnd, p))
                   for bnd in pieces)

    samples = [(lo + i * h, lo + j * h) for i in range(steps + 1) for j in range(steps + 1)]
    present = {p for p in samples if inside(p)}
    parent = {p: p for p in present}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for p in present:
        for dx, dy in itertools.product((-h, 0, h), repeat=2):
            q = (p[0] + dx, p[1] + dy)
            if q in present and inside(((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)):
                parent[find(p)] = find(q)
    return len({find(p) for p in present})


@settings(max_examples=400)
@given(st.integers(0, 10**9), st.booleans())
def test_components_match_raster_oracle(seed, slanted):
    pieces = random_pieces(random.Random(seed))
    P = PieceSet(2, tuple(piece_system(b, slanted) for b in pieces), GENERAL)
    assert component_count(P) == raster_count(pieces)


def test_raster_oracle_examples():
    # two open segments meeting only at a corner that neither contains
    corner = [((Q(1), Q(1)), (Q(0), Q(1))), ((Q(0), Q(1)), (Q(1), Q(1)))]
    assert raster_count(corner) == 2
    # an open square and a point in its closure
    touching = [((Q(0), Q(1)), (Q(0), Q(1))), ((Q(1), Q(1)), (Q(1), Q(1)))]
    assert raster_count(touching) == 1


# --- invariances -----------------------------------------------------------

def split(p: ConstraintSystem, coeffs, rhs) -> list:
    return [p.with_constraints([constraint(coeffs, rel, rhs)]) for rel in ("<", "=", ">")]


@given(st.integers(0, 10**9))
def test_refinement_invariance(seed):
    rng = random.Random(seed)
    pieces = [piece_system(b) for b in random_pieces(rng)]
    P = PieceSet(2, tuple(pieces), GENERAL)
    i = rng.randrange(len(pieces))
    coeffs = [rng.randint(-1, 1), rng.randint(-1, 1)]
    rhs = Q(rng.randint(0, 12), 4)
    refined = pieces[:i] + split(pieces[i], coeffs, rhs) + pieces[i + 1:]
    R = PieceSet(2, tuple(refined), GENERAL).canonical()
    assert component_count(R) == component_count(P)
    assert set_dimension(R) == set_dimension(P)


@given(st.integers(0, 10**9))
def test_component_count_ignores_piece_order(seed):
    rng = random.Random(seed)
    pieces = [piece_system(b) for b in random_pieces(rng)]
    shuffled = pieces[:]
    rng.shuffle(shuffled)
    assert component_count(PieceSet(2, tuple(pieces), GENERAL)) == \
        component_count(PieceSet(2, tuple(shuffled), GENERAL))
