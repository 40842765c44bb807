"""Assemble training inputs from the store and the embedding backend.

All embeddings are computed through the gateway (frozen backends); the
trainer only ever sees numpy arrays.
"""

from __future__ import annotations

import numpy as np

from ..corpus.model import PreferencePair
from ..corpus.store import CorpusStore
from ..errors import IntegrityError
from ..gateway.client import GatewayClient
from .scoring import PromptEmbeddingSet, build_prompts, combine
from .trainer import TrainingPair, UnlabeledPair


def target_embedding(description: str, gateway: GatewayClient) -> np.ndarray:
    positive, negative, empty = build_prompts(description)
    prompts = PromptEmbeddingSet.from_raw(
        gateway.embed_text(positive),
        gateway.embed_text(negative),
        gateway.embed_text(empty),
    )
    return combine(prompts)


def pairs_to_training(
    pairs: list[PreferencePair], store: CorpusStore, gateway: GatewayClient
) -> list[TrainingPair]:
    targets: dict[str, np.ndarray] = {}
    out = []
    for pair in pairs:
        description = store.get_description(pair.description_id)
        if description.id not in targets:
            targets[description.id] = target_embedding(description.text, gateway)
        for ref in (pair.chosen_ref, pair.rejected_ref):
            if not store.blobs.has(ref):
                raise IntegrityError(f"pair reference {ref} does not resolve")
        out.append(
            TrainingPair(
                chosen=gateway.embed_image(store.blobs.get(pair.chosen_ref)),
                rejected=gateway.embed_image(store.blobs.get(pair.rejected_ref)),
                target=targets[description.id],
            )
        )
    return out


def build_synthetic_pool(
    store: CorpusStore,
    gateway: GatewayClient,
    rng: np.random.Generator,
    pairs_per_batch: int = 16,
) -> list[UnlabeledPair]:
    """Unlabeled candidate pairs sampled from the full (unfiltered) batches.

    Only rendered candidates participate; batches with fewer than two are
    skipped.
    """
    pool: list[UnlabeledPair] = []
    for batch in store.batches():
        rendered = [
            c
            for c in (store.get_candidate(cid) for cid in batch.candidate_ids)
            if c.screenshot_ref is not None
        ]
        if len(rendered) < 2:
            continue
        description = store.get_description(batch.description_id)
        target = target_embedding(description.text, gateway)
        embeddings = {
            c.id: gateway.embed_image(store.blobs.get(c.screenshot_ref)) for c in rendered
        }
        ids = [c.id for c in rendered]
        for _ in range(pairs_per_batch):
            i, j = rng.choice(len(ids), size=2, replace=False)
            pool.append(
                UnlabeledPair(
                    emb_a=embeddings[ids[int(i)]],
                    emb_b=embeddings[ids[int(j)]],
                    target=target,
                )
            )
    return pool
