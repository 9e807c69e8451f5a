"""Shared builders for the test modules."""
import itertools
import random
from fractions import Fraction as Q

from semimonotone.cell_complex import BoxUnion, PiecewiseAffineGraph


def box_union(*boxes) -> BoxUnion:
    return BoxUnion.from_bounds(*boxes)


SQUARE = box_union([(0, 1), (0, 1)])
L_SHAPE = box_union([(0, 2), (0, 1)], [(0, 1), (0, 2)])
U_SHAPE = box_union([(0, 3), (0, 1)], [(0, 1), (0, 3)], [(2, 3), (0, 3)])
# (0,1) split at 1/2 by a nested second interval
UNIT_WITH_MIDPOINT = box_union([(0, 1)], [(0, Q(1, 2))])


def tent() -> PiecewiseAffineGraph:
    values = {(Q(0),): (Q(0),), (Q(1, 2),): (Q(1),), (Q(1),): (Q(0),)}
    return PiecewiseAffineGraph.from_vertex_values(UNIT_WITH_MIDPOINT, values)


def identity_on_unit() -> PiecewiseAffineGraph:
    return PiecewiseAffineGraph.affine(box_union([(0, 1)]), [[1]], [0])


def sum_on_square() -> PiecewiseAffineGraph:
    return PiecewiseAffineGraph.affine(SQUARE, [[1, 1]], [0])


def random_box_union(rng: random.Random, dim: int, top: int = 4, count: int = 3) -> BoxUnion:
    boxes = []
    for _ in range(rng.randint(1, count)):
        box = []
        for _ in range(dim):
            a = rng.randint(0, top - 1)
            box.append((a, rng.randint(a + 1, top)))
        boxes.append(box)
    return box_union(*boxes)


def union_volume(X: BoxUnion) -> Q:
    """Inclusion and exclusion over the boxes."""
    total = Q(0)
    for r in range(1, len(X.boxes) + 1):
        for combo in itertools.combinations(X.boxes, r):
            v = Q(1)
            for axis in range(X.ambient_dim):
                lo = max(b.bounds[axis][0] for b in combo)
                hi = min(b.bounds[axis][1] for b in combo)
                v *= max(hi - lo, Q(0))
            total += (-1) ** (r + 1) * v
    return total
