"""Chosen/rejected code pairs from scored batches.

Per batch the top-scored candidate is chosen (ties toward the lower batch
index) and the rejected one is a uniform draw over the remaining finitely
scored candidates. The pair prompt is the full generation prompt for the
description, so an alignment trainer sees exactly what the generator saw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus.store import CorpusStore
from ..errors import ValidationError
from ..gateway import templates
from .scoring import ScoredBatch


@dataclass(frozen=True)
class AlignmentPair:
    prompt: str
    chosen: str
    rejected: str
    description_id: str = ""
    chosen_score: float = 0.0
    rejected_score: float = 0.0

    def __post_init__(self):
        if self.chosen == self.rejected:
            raise ValidationError("chosen and rejected markup must differ")


def build_alignment_pairs(
    scored: list[ScoredBatch],
    store: CorpusStore,
    rng: np.random.Generator,
    pairs_per_description: int = 1,
) -> tuple[list[AlignmentPair], int]:
    """Alignment pairs plus the count of batches skipped for lack of candidates."""
    if pairs_per_description < 1:
        raise ValidationError("pairs_per_description must be at least 1")
    pairs: list[AlignmentPair] = []
    skipped = 0
    for batch in scored:
        finite = batch.finite_scores()
        if len(finite) < 2:
            skipped += 1
            continue
        index_of = {cid: i for i, cid in enumerate(cid for cid, _ in batch.scores)}
        best_score = max(s for _, s in finite)
        chosen_id = min(
            (cid for cid, s in finite if s == best_score), key=lambda cid: index_of[cid]
        )
        others = [(cid, s) for cid, s in finite if cid != chosen_id]
        description = store.get_description(batch.description_id)
        prompt = templates.generation_prompt(description.text)
        chosen_html = store.candidate_html(chosen_id)
        for _ in range(pairs_per_description):
            rejected_id, rejected_score = others[int(rng.integers(len(others)))]
            pairs.append(
                AlignmentPair(
                    prompt=prompt,
                    chosen=chosen_html,
                    rejected=store.candidate_html(rejected_id),
                    description_id=batch.description_id,
                    chosen_score=best_score,
                    rejected_score=rejected_score,
                )
            )
    return pairs, skipped
