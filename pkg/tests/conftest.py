"""Shared fixtures: seeded stores, gateways, and the study-count fixture.

The study fixture reconstructs a record set with the published interface
counts (ranking 1063, sketching 181, commenting 152, revising 64) and
elapsed/length distributions that reproduce the published per-interface
statistics exactly at their printed precision.
"""

from __future__ import annotations

import numpy as np
import pytest

from uipref.corpus import CorpusStore
from uipref.feedback.records import (
    AnnotationRecord,
    CommentSet,
    RankingJudgment,
    RevisionRecord,
    SketchSet,
)
from uipref.gateway import BackendProfile, GatewayClient
from uipref.htmlkit.geometry import Region
from uipref.service.jobs import JobRunner, JobSpec


@pytest.fixture
def store(tmp_path) -> CorpusStore:
    return CorpusStore(tmp_path / "store")


@pytest.fixture
def gateway() -> GatewayClient:
    return GatewayClient(BackendProfile(seed=1234))


@pytest.fixture
def runner(store, gateway) -> JobRunner:
    return JobRunner(store, gateway)


@pytest.fixture
def small_pipeline(store, gateway, runner):
    """2 descriptions x 4 candidates, rendered and top-2 filtered."""
    runner.run(JobSpec(kind="gen-descriptions", parameters={"target_n": 2}, seed=5))
    runner.run(JobSpec(kind="gen-candidates", parameters={"n": 4}, seed=5))
    runner.run(JobSpec(kind="render", parameters={}, seed=5))
    runner.run(JobSpec(kind="filter", parameters={"k": 2}, seed=5))
    return store


def _padded_text(base: str, length: int) -> str:
    text = (base + " ") * (length // (len(base) + 1) + 2)
    return text[:length]


def _spread(total_items: int, groups: int, low: int) -> list[int]:
    """Per-group item counts, each >= low, summing to total_items."""
    counts = [low] * groups
    extra = total_items - low * groups
    assert extra >= 0
    for i in range(extra):
        counts[i % groups] += 1
    return sorted(counts, reverse=True)


def _lengths(total_chars: int, n_texts: int) -> list[int]:
    base = total_chars // n_texts
    remainder = total_chars - base * n_texts
    return [base + 1] * remainder + [base] * (n_texts - remainder)


def build_study_records() -> list[AnnotationRecord]:
    """1460 records matching the published study totals and statistics.

    ranking:    1063 records at 12.5 s each -> 4.8 per minute
    revising:   64 records at 207 s each -> 3.45 minutes each
    commenting: 152 records, 289 comments (mean 1.9), 25172 chars (mean 87.1)
    sketching:  181 records, 489 items (mean 2.7), 20636 chars (mean 42.2)
    """
    records: list[AnnotationRecord] = []

    for i in range(1063):
        records.append(
            AnnotationRecord(
                record_id=f"rank-{i:04d}",
                interface="ranking",
                payload=RankingJudgment(
                    description_id=f"d-{i % 200:04d}",
                    left_candidate=f"c-{2 * i}",
                    right_candidate=f"c-{2 * i + 1}",
                    winner="left" if i % 2 == 0 else "right",
                    annotator_id=f"p{i % 21:02d}",
                    elapsed_s=12.5,
                ),
                elapsed_s=12.5,
            )
        )

    comment_counts = _spread(289, 152, 1)
    comment_lengths = iter(_lengths(25172, 289))
    for i, count in enumerate(comment_counts):
        comments = tuple(
            _padded_text("the information hierarchy needs work", next(comment_lengths))
            for _ in range(count)
        )
        records.append(
            AnnotationRecord(
                record_id=f"comm-{i:04d}",
                interface="commenting",
                payload=CommentSet(
                    candidate_id=f"c-{i}", comments=comments, annotator_id=f"p{i % 21:02d}"
                ),
                elapsed_s=90.0,
            )
        )

    sketch_counts = _spread(489, 181, 2)
    sketch_lengths = iter(_lengths(20636, 489))
    for i, count in enumerate(sketch_counts):
        items = tuple(
            (
                Region.box(10.0 + 3 * j, 20.0 + 5 * j, 40.0, 30.0),
                _padded_text("make this text larger", next(sketch_lengths)),
            )
            for j in range(count)
        )
        records.append(
            AnnotationRecord(
                record_id=f"sketch-{i:04d}",
                interface="sketching",
                payload=SketchSet(
                    candidate_id=f"c-{i}", items=items, annotator_id=f"p{i % 21:02d}"
                ),
                elapsed_s=60.0,
            )
        )

    for i in range(64):
        records.append(
            AnnotationRecord(
                record_id=f"rev-{i:04d}",
                interface="revising",
                payload=RevisionRecord(
                    candidate_id=f"c-{i}",
                    original_sketch_ref=f"sk-orig-{i}",
                    revised_sketch_ref=f"sk-rev-{i}",
                    annotator_id=f"p{i % 21:02d}",
                ),
                elapsed_s=207.0,
            )
        )

    return records


def random_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
