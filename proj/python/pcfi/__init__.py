"""Pseudo-confidence feature imputation for graphs with missing node features."""

import json as _json

from ._core import (
    RNG_ALGORITHM,
    UNREACHABLE,
    Error,
    Graph,
    InputError,
    InvariantError,
    IoError,
    class_homophily,
    compute_spds,
    correlation,
    feature_homophily,
    generate_synthetic,
    impute,
    largest_component,
    num_threads,
    propagate_stage2,
    pseudo_confidence,
    set_num_threads,
    structural_mask,
    uniform_mask,
)
from ._core import _evaluate_json

__version__ = "0.1.0"


def evaluate(truth, imputed, known, spds=None):
    """Recovery metrics over unobserved entries, as a dict (same layout as the CLI report)."""
    return _json.loads(_evaluate_json(truth, imputed, known, spds))


__all__ = [
    "RNG_ALGORITHM",
    "UNREACHABLE",
    "Error",
    "Graph",
    "InputError",
    "InvariantError",
    "IoError",
    "class_homophily",
    "compute_spds",
    "correlation",
    "evaluate",
    "feature_homophily",
    "generate_synthetic",
    "impute",
    "largest_component",
    "num_threads",
    "propagate_stage2",
    "pseudo_confidence",
    "set_num_threads",
    "structural_mask",
    "uniform_mask",
]
