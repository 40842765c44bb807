"""Top-k retention of a generation batch by reward score."""

from __future__ import annotations

from ..corpus.model import GenerationBatch
from ..errors import ValidationError

DEFAULT_TOP_K = 8


def topk_filter(batch: GenerationBatch, scores: list[float], k: int = DEFAULT_TOP_K) -> list[str]:
    """The k highest-scored candidate ids, in descending score order.

    Ties break toward the lower batch index, so the result is independent of
    the ordering the scores arrived in.
    """
    if k <= 0:
        raise ValidationError("k must be positive")
    if len(scores) != len(batch.candidate_ids):
        raise ValidationError(
            f"{len(scores)} scores for {len(batch.candidate_ids)} candidates"
        )
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return [batch.candidate_ids[i] for i in order[: min(k, len(order))]]
