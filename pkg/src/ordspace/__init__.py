"""Finite ordinal spaces: rank matrices, balls, embeddings, ordinal metric."""

from .errors import (
    AxiomViolation,
    OrdspaceError,
    SizeLimitError,
    SolverError,
    UnderdeterminedOrder,
    ValidationError,
)
from .space import (
    ComparisonList,
    DistanceMatrix,
    OrdinalSpace,
    Relation,
    canonical_form,
    find_isomorphism,
    from_comparisons,
    is_isomorphic,
    ordinal_type,
    realize,
    subspace,
    to_comparisons,
    weakly_similar,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "ComparisonList",
    "DistanceMatrix",
    "OrdinalSpace",
    "OrdspaceError",
    "Relation",
    "SizeLimitError",
    "SolverError",
    "UnderdeterminedOrder",
    "ValidationError",
    "canonical_form",
    "find_isomorphism",
    "from_comparisons",
    "is_isomorphic",
    "ordinal_type",
    "realize",
    "subspace",
    "to_comparisons",
    "weakly_similar",
    "__version__",
]
