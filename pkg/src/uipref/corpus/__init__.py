from .datasets import export_preferences, import_preferences
from .model import (
    GenerationBatch,
    MergeResult,
    PreferenceDataset,
    PreferencePair,
    SplitReport,
    UiCandidate,
    UiDescription,
    dedup_merge,
    normalize_text,
    split_guard,
)
from .store import BlobStore, CorpusStore, content_hash

__all__ = [
    "BlobStore",
    "CorpusStore",
    "GenerationBatch",
    "MergeResult",
    "PreferenceDataset",
    "PreferencePair",
    "SplitReport",
    "UiCandidate",
    "UiDescription",
    "content_hash",
    "dedup_merge",
    "export_preferences",
    "import_preferences",
    "normalize_text",
    "split_guard",
]
