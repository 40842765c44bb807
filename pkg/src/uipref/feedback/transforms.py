"""Turn feedback records into preference pairs.

Rankings map straight to pairs of the two screenshots. Comments and sketches
run an edit pipeline (LLM edit -> stage -> render) whose new screenshot is
preferred over the original; sketch items are first grounded to the element
with the best-overlapping box and sent with that element's markup snippet.
Revisions compare rendered previews of the revised and original documents.

A failed edit or render drops the record (TransformError) rather than
emitting a degenerate pair with the same image on both sides.
"""

from __future__ import annotations

import shutil
from pathlib import Path

from ..corpus.model import PreferencePair
from ..corpus.store import CorpusStore
from ..errors import TransformError, UiPrefError, ValidationError
from ..gateway.client import GatewayClient
from ..htmlkit.geometry import GeometryMap, parse_geometry
from ..htmlkit.snippets import snippet
from ..htmlkit.staging import stage_assets
from .records import (
    AnnotationRecord,
    CommentSet,
    RankingJudgment,
    RevisionRecord,
    SketchSet,
)


def pairs_from_ranking(judgment: RankingJudgment, store: CorpusStore) -> PreferencePair:
    winner = store.get_candidate(judgment.winner_candidate)
    loser = store.get_candidate(judgment.loser_candidate)
    if winner.screenshot_ref is None or loser.screenshot_ref is None:
        raise TransformError("ranking candidates must both have screenshots")
    return PreferencePair(
        description_id=judgment.description_id,
        chosen_ref=winner.screenshot_ref,
        rejected_ref=loser.screenshot_ref,
        provenance="ranking",
        annotator_id=judgment.annotator_id,
    )


class FeedbackTransformer:
    """Runs the four transforms against a store and a gateway.

    Transform jobs are idempotent: processed record ids are persisted, and
    re-running a completed transform is a no-op.
    """

    def __init__(self, store: CorpusStore, gateway: GatewayClient, workdir: str | Path | None = None):
        self.store = store
        self.gateway = gateway
        self.workdir = Path(workdir) if workdir else store.root / "staging"
        self._done = {rec["record_id"] for rec in store.records("transform_done")}

    # -- shared edit pipeline --

    def _render_revised(self, description_id: str, revised_html: str, tag: str) -> tuple[str, str]:
        """Persist revised html as a candidate, render it, return (candidate id, screenshot ref)."""
        batch = self.store.new_batch(description_id, sampler_seed=0)
        candidate = self.store.put_candidate(batch.id, revised_html)
        stage_dir = self.workdir / tag
        try:
            placeholders = self.gateway.placeholders_for(revised_html)
            manifest = stage_assets(revised_html, placeholders, stage_dir)
            result = self.gateway.render(manifest)
        except UiPrefError as exc:
            raise TransformError(f"edit pipeline failed for {tag}: {exc}") from exc
        finally:
            shutil.rmtree(stage_dir, ignore_errors=True)
        screenshot_ref = self.store.blobs.put(result.screenshot)
        geometry_ref = self.store.blobs.put(_geometry_bytes(result.geometry))
        self.store.update_candidate(
            candidate.id, screenshot_ref=screenshot_ref, geometry_ref=geometry_ref
        )
        return candidate.id, screenshot_ref

    def pairs_from_comments(self, comment_set: CommentSet, tag: str = "comment-edit") -> PreferencePair:
        original = self.store.get_candidate(comment_set.candidate_id)
        if original.screenshot_ref is None:
            raise TransformError("candidate has no rendered screenshot")
        html = self.store.candidate_html(original.id)
        try:
            revised = self.gateway.improve_with_comments(html, list(comment_set.comments))
        except UiPrefError as exc:
            raise TransformError(f"comment edit failed: {exc}") from exc
        _, screenshot_ref = self._render_revised(original.description_id, revised, tag)
        return PreferencePair(
            description_id=original.description_id,
            chosen_ref=screenshot_ref,
            rejected_ref=original.screenshot_ref,
            provenance="commenting",
            annotator_id=comment_set.annotator_id,
        )

    def pairs_from_sketch(
        self, sketch_set: SketchSet, geometry: GeometryMap | None = None, tag: str = "sketch-edit"
    ) -> PreferencePair:
        from ..htmlkit.geometry import match_annotation

        original = self.store.get_candidate(sketch_set.candidate_id)
        if original.screenshot_ref is None:
            raise TransformError("candidate has no rendered screenshot")
        if geometry is None:
            if original.geometry_ref is None:
                raise TransformError("candidate has no geometry for grounding")
            geometry = parse_geometry(self.store.blobs.get(original.geometry_ref).decode())
        html = self.store.candidate_html(original.id)

        grounded = []
        for region, comment in sketch_set.items:
            element = match_annotation(region, geometry)
            grounded.append((comment, snippet(element.element_path, html)))
        try:
            revised = self.gateway.improve_with_regions(html, grounded)
        except UiPrefError as exc:
            raise TransformError(f"region edit failed: {exc}") from exc
        _, screenshot_ref = self._render_revised(original.description_id, revised, tag)
        return PreferencePair(
            description_id=original.description_id,
            chosen_ref=screenshot_ref,
            rejected_ref=original.screenshot_ref,
            provenance="sketching",
            annotator_id=sketch_set.annotator_id,
        )

    def pairs_from_revision(self, revision: RevisionRecord) -> PreferencePair:
        original = self.store.get_candidate(revision.candidate_id)
        try:
            before = self.gateway.preview(self.store.blobs.get(revision.original_sketch_ref))
            after = self.gateway.preview(self.store.blobs.get(revision.revised_sketch_ref))
        except UiPrefError as exc:
            raise TransformError(f"sketch preview failed: {exc}") from exc
        return PreferencePair(
            description_id=original.description_id,
            chosen_ref=self.store.blobs.put(after),
            rejected_ref=self.store.blobs.put(before),
            provenance="revising",
            annotator_id=revision.annotator_id,
        )

    # -- batch driver --

    def transform(self, record: AnnotationRecord) -> PreferencePair:
        payload = record.payload
        if isinstance(payload, RankingJudgment):
            return pairs_from_ranking(payload, self.store)
        if isinstance(payload, CommentSet):
            return self.pairs_from_comments(payload, tag=record.record_id)
        if isinstance(payload, SketchSet):
            return self.pairs_from_sketch(payload, tag=record.record_id)
        if isinstance(payload, RevisionRecord):
            return self.pairs_from_revision(payload)
        raise ValidationError(f"unknown payload type {type(payload).__name__}")

    def run_batch(self, records: list[AnnotationRecord]) -> dict:
        """Transform every unprocessed record; returns counts by outcome."""
        done = skipped = failed = 0
        for record in records:
            if record.record_id in self._done:
                skipped += 1
                continue
            try:
                pair = self.transform(record)
            except TransformError:
                failed += 1
                continue
            self.store.add_pair(pair)
            self.store.append_record("transform_done", {"record_id": record.record_id})
            self._done.add(record.record_id)
            done += 1
        return {"transformed": done, "skipped": skipped, "failed": failed}


def _geometry_bytes(geometry: GeometryMap) -> bytes:
    from ..htmlkit.geometry import serialize_geometry

    return serialize_geometry(geometry).encode()
