"""Score whole generation batches through render -> embed -> score."""

from __future__ import annotations

import math
import shutil
from dataclasses import dataclass

from ..corpus.store import CorpusStore
from ..errors import UiPrefError, ValidationError
from ..gateway.client import GatewayClient
from ..htmlkit.staging import stage_assets
from ..reward.dataset import target_embedding
from ..reward.scoring import RewardHead, score

FAILURE_SCORE = -math.inf


@dataclass(frozen=True)
class ScoredBatch:
    description_id: str
    batch_id: str
    scores: tuple[tuple[str, float], ...]
    failed: tuple[str, ...] = ()

    def finite_scores(self) -> list[tuple[str, float]]:
        return [(cid, s) for cid, s in self.scores if math.isfinite(s)]


def ensure_rendered(candidate_id: str, store: CorpusStore, gateway: GatewayClient) -> str:
    """Screenshot ref for a candidate, rendering through the gateway if absent."""
    candidate = store.get_candidate(candidate_id)
    if candidate.screenshot_ref is not None:
        return candidate.screenshot_ref
    html = store.candidate_html(candidate_id)
    stage_dir = store.root / "staging" / f"score-{candidate_id}"
    try:
        manifest = stage_assets(html, gateway.placeholders_for(html), stage_dir)
        result = gateway.render(manifest)
    finally:
        shutil.rmtree(stage_dir, ignore_errors=True)
    screenshot_ref = store.blobs.put(result.screenshot)
    from ..htmlkit.geometry import serialize_geometry

    geometry_ref = store.blobs.put(serialize_geometry(result.geometry).encode())
    store.update_candidate(candidate_id, screenshot_ref=screenshot_ref, geometry_ref=geometry_ref)
    return screenshot_ref


def score_batch(
    batch_id: str, head: RewardHead, store: CorpusStore, gateway: GatewayClient
) -> ScoredBatch:
    """One reward score per candidate; failures get a -inf sentinel and a flag."""
    batch = store.get_batch(batch_id)
    description = store.get_description(batch.description_id)
    target = target_embedding(description.text, gateway)

    scores: list[tuple[str, float]] = []
    failed: list[str] = []
    for cand_id in batch.candidate_ids:
        try:
            screenshot_ref = ensure_rendered(cand_id, store, gateway)
            emb = gateway.embed_image(store.blobs.get(screenshot_ref))
            scores.append((cand_id, score(emb, target, head)))
        except UiPrefError:
            scores.append((cand_id, FAILURE_SCORE))
            failed.append(cand_id)
    if len(failed) == len(batch.candidate_ids):
        raise ValidationError(f"every candidate in batch {batch_id} failed scoring")
    return ScoredBatch(
        description_id=batch.description_id,
        batch_id=batch_id,
        scores=tuple(scores),
        failed=tuple(failed),
    )
