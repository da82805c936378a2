"""corrkit: correction resolution via token-level sequence labeling."""

__version__ = "0.1.0"

from .core import (
    LABELS,
    EntityPair,
    TaggedPair,
    Token,
    ValidationReport,
    tokenize,
    validate,
)
from .merging import CorrectionResult, extract_pairs, merge

__all__ = [
    "LABELS",
    "EntityPair",
    "TaggedPair",
    "Token",
    "ValidationReport",
    "tokenize",
    "validate",
    "CorrectionResult",
    "extract_pairs",
    "merge",
    "__version__",
]
