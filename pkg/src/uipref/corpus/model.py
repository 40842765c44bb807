"""Domain types for the UI corpus plus the text-level dedup/split operations.

Descriptions are deduplicated by a normalized form (lowercased, internal
whitespace collapsed, trimmed); the original spelling of the first occurrence
is what gets stored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from ..errors import ValidationError

_WS = re.compile(r"\s+")

PROVENANCES = ("ranking", "commenting", "sketching", "revising", "synthetic")

SPLITS = ("train", "eval")


def normalize_text(text: str) -> str:
    """Canonical form used for description uniqueness checks."""
    return _WS.sub(" ", text.strip()).lower()


@dataclass(frozen=True)
class UiDescription:
    """One natural-language UI description."""

    id: str
    text: str
    split: str = "train"

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError("description text is empty")
        if self.split not in SPLITS:
            raise ValidationError(f"unknown split {self.split!r}")


@dataclass(frozen=True)
class UiCandidate:
    """One generated UI: markup plus references to its rendered artifacts."""

    id: str
    description_id: str
    batch_index: int
    html_ref: str
    screenshot_ref: str | None = None
    geometry_ref: str | None = None
    sketch_ref: str | None = None
    score: float | None = None

    def __post_init__(self):
        if self.batch_index < 0:
            raise ValidationError("batch_index must be non-negative")


@dataclass
class GenerationBatch:
    """The candidates sampled for one description in one generation run."""

    id: str
    description_id: str
    sampler_seed: int
    candidate_ids: list[str] = field(default_factory=list)
    retained_ids: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if not set(self.retained_ids) <= set(self.candidate_ids):
            raise ValidationError("retained_ids must be a subset of candidate_ids")


@dataclass(frozen=True)
class PreferencePair:
    """A (description, chosen, rejected) triple with its provenance.

    chosen_ref / rejected_ref are blob references of the same kind (both
    screenshots or both previews), never a mix.
    """

    description_id: str
    chosen_ref: str
    rejected_ref: str
    provenance: str
    annotator_id: str = ""

    def __post_init__(self):
        if self.chosen_ref == self.rejected_ref:
            raise ValidationError("chosen and rejected refs must differ")
        if self.provenance not in PROVENANCES:
            raise ValidationError(f"unknown provenance {self.provenance!r}")


@dataclass
class PreferenceDataset:
    """A list of preference pairs with per-provenance counts."""

    pairs: list[PreferencePair]
    counts: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: Iterable[PreferencePair]) -> "PreferenceDataset":
        pairs = list(pairs)
        counts: dict[str, int] = {}
        for p in pairs:
            counts[p.provenance] = counts.get(p.provenance, 0) + 1
        return cls(pairs=pairs, counts=counts)

    def validate(self) -> None:
        recount: dict[str, int] = {}
        for p in self.pairs:
            recount[p.provenance] = recount.get(p.provenance, 0) + 1
        if recount != self.counts:
            raise ValidationError("provenance counts do not match pair multiset")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PreferenceDataset):
            return NotImplemented
        return self.pairs == other.pairs and self.counts == other.counts


@dataclass
class MergeResult:
    """Outcome of dedup_merge: merged texts in first-occurrence order."""

    merged: list[str]
    accepted: int


def dedup_merge(existing: Iterable[str], incoming: Iterable[str]) -> MergeResult:
    """Merge incoming texts into an existing collection, dropping duplicates.

    Identity is the normalized form; the first-seen original spelling is kept.
    ``accepted`` counts how many incoming texts were new.
    """
    merged: list[str] = []
    seen: set[str] = set()
    for text in existing:
        key = normalize_text(text)
        if key and key not in seen:
            seen.add(key)
            merged.append(text)
    before = len(merged)
    for text in incoming:
        key = normalize_text(text)
        if key and key not in seen:
            seen.add(key)
            merged.append(text)
    return MergeResult(merged=merged, accepted=len(merged) - before)


@dataclass
class SplitReport:
    """Exact-overlap report between a train and an eval split."""

    exact_overlaps: list[str]

    @property
    def is_disjoint(self) -> bool:
        return not self.exact_overlaps


def split_guard(train: Iterable[str], eval_texts: Iterable[str]) -> SplitReport:
    """List eval texts whose normalized form also occurs in train.

    Only exact (post-normalization) matches are flagged; semantically similar
    descriptions are deliberately left alone.
    """
    train_keys = {normalize_text(t) for t in train}
    overlaps: list[str] = []
    seen: set[str] = set()
    for text in eval_texts:
        key = normalize_text(text)
        if key in train_keys and key not in seen:
            seen.add(key)
            overlaps.append(text)
    return SplitReport(exact_overlaps=overlaps)
