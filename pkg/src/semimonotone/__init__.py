"""Exact semi-linear verification of semi-monotone sets, monotone maps and Helly-type theorems."""

__version__ = "0.1.0"

from .rational_linear import ConstraintSystem, LinearConstraint, constraint  # noqa: E402
from .cell_complex import Box, BoxUnion, PiecewiseAffineGraph, PieceSet  # noqa: E402
from .cones import CoordinateCone  # noqa: E402
from .connectivity import component_count, connected_components  # noqa: E402
from .predicates import (  # noqa: E402
    InconsistencyError,
    PredicateVerdict,
    is_monotone_graph,
    is_quasi_affine,
    is_semi_monotone,
)
from .helly import Family, verify  # noqa: E402
from .nerve import SimplicialComplex, homology, nerve  # noqa: E402

__all__ = [
    "Box", "BoxUnion", "ConstraintSystem", "CoordinateCone", "Family", "InconsistencyError",
    "LinearConstraint", "PieceSet", "PiecewiseAffineGraph", "PredicateVerdict",
    "SimplicialComplex", "component_count", "connected_components", "constraint", "homology",
    "is_monotone_graph", "is_quasi_affine", "is_semi_monotone", "nerve", "verify",
]
