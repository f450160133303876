"""Testable learning with distribution shift: learners, testers, oracles and an experiment harness."""

from .core import (
    ACCEPT,
    REJECT,
    Constant,
    Constants,
    Halfspace,
    Hypothesis,
    LabeledDataset,
    Majority,
    PolySign,
    SparsePolynomial,
    TdsOutcome,
    make_rng,
)
from .halfspaces import (
    tds_general_halfspace,
    tds_homogeneous_agnostic,
    tds_homogeneous_realizable,
)
from .learners import amplify, pq_to_tds, tds_disagreement, tds_moment_matching

__all__ = [
    "ACCEPT", "REJECT", "Constant", "Constants", "Halfspace", "Hypothesis", "LabeledDataset",
    "Majority", "PolySign", "SparsePolynomial", "TdsOutcome", "amplify", "make_rng", "pq_to_tds",
    "tds_disagreement", "tds_general_halfspace", "tds_homogeneous_agnostic",
    "tds_homogeneous_realizable", "tds_moment_matching",
]
