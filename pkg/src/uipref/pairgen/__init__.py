from .builder import AlignmentPair, build_alignment_pairs
from .export import (
    DEFAULT_MAX_TOKENS,
    ExportReport,
    count_tokens,
    export_orpo,
    read_orpo,
    truncate_tokens,
)
from .scoring import FAILURE_SCORE, ScoredBatch, ensure_rendered, score_batch

__all__ = [
    "AlignmentPair",
    "DEFAULT_MAX_TOKENS",
    "ExportReport",
    "FAILURE_SCORE",
    "ScoredBatch",
    "build_alignment_pairs",
    "count_tokens",
    "ensure_rendered",
    "export_orpo",
    "read_orpo",
    "score_batch",
    "truncate_tokens",
]
