"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL line
per criterion.
"""

from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import build_study_records
from uipref.arena import AgreementRecord, Battle, RatingConfig, agreement, bootstrap_ratings, elo_sequence
from uipref.corpus import CorpusStore, GenerationBatch
from uipref.feedback import AnnotationRecord, CommentSet, RankingJudgment, RevisionRecord, SketchSet
from uipref.feedback.records import record_to_dict
from uipref.feedback.stats import study_stats
from uipref.gateway import BackendProfile, GatewayClient
from uipref.gateway.templates import (
    comment_edit_prompt,
    empty_prompt,
    generation_prompt,
    negative_prompt,
    positive_prompt,
    region_edit_prompt,
)
from uipref.htmlkit.geometry import Region, parse_geometry
from uipref.pairgen import read_orpo
from uipref.reward import (
    PromptEmbeddingSet,
    RewardHead,
    TrainerConfig,
    TrainingPair,
    batch_loss_and_grad,
    combine,
    pairwise_accuracy,
    topk_filter,
    train,
)
from uipref.service import JobRunner, JobSpec

from test_arena import oracle_elo, random_battles
from test_htmlkit import oracle_match, random_geometry, random_region


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


# -- 1. margin-loss trainer ------------------------------------------------------


def test_margin_loss_trainer_criterion():
    with criterion("margin-loss trainer: >=0.95 held-out accuracy, grad check < 1e-5, < 10 s"):
        started = time.monotonic()
        dim = 512
        rng = np.random.default_rng(20240817)
        u = unit(rng.standard_normal(dim))
        target = rng.standard_normal(dim)
        target -= (target @ u) * u  # orthogonal so the untrained head is at chance
        target = unit(target)

        def cluster_pairs(n):
            pairs = []
            for _ in range(n):
                chosen = unit(u + 0.2 * rng.standard_normal(dim))
                rejected = unit(-u + 0.2 * rng.standard_normal(dim))
                pairs.append(TrainingPair(chosen=chosen, rejected=rejected, target=target))
            return pairs

        train_pairs = cluster_pairs(500)
        held_out = cluster_pairs(200)
        # stock training defaults: steps 100, batch 32, lr 1e-3, decay 0.2,
        # margin 1e-2. aug_prob applies to pipeline batches; this synthetic
        # set has no candidate pool to augment from, so augmentation is off.
        cfg = TrainerConfig(aug_prob=0.0, rng_seed=7)
        assert (cfg.max_steps, cfg.batch_size) == (100, 32)
        assert (cfg.learning_rate, cfg.weight_decay, cfg.margin) == (1e-3, 0.2, 1e-2)

        head = RewardHead.identity(dim)
        result = train(head, train_pairs, [], cfg)
        accuracy = pairwise_accuracy(result.head, held_out)
        assert accuracy >= 0.95, f"held-out accuracy {accuracy}"
        assert len(result.trace) == 100

        # analytic vs central-difference gradient, away from the hinge
        small = 8
        grad_rng = np.random.default_rng(5)
        weight = np.eye(small) + 0.2 * grad_rng.standard_normal((small, small))
        pairs = [
            TrainingPair(
                chosen=unit(grad_rng.standard_normal(small)),
                rejected=unit(grad_rng.standard_normal(small)),
                target=grad_rng.standard_normal(small),
            )
            for _ in range(6)
        ]
        margin = 500.0  # all pairs strictly active
        _, grad = batch_loss_and_grad(weight, pairs, 100.0, margin)
        eps = 1e-6
        numeric = np.zeros_like(weight)
        for i in range(small):
            for j in range(small):
                bumped = weight.copy()
                bumped[i, j] += eps
                up, _ = batch_loss_and_grad(bumped, pairs, 100.0, margin)
                bumped[i, j] -= 2 * eps
                down, _ = batch_loss_and_grad(bumped, pairs, 100.0, margin)
                numeric[i, j] = (up - down) / (2 * eps)
        relative = np.abs(numeric - grad).max() / np.abs(numeric).max()
        assert relative < 1e-5, f"gradient relative error {relative}"

        elapsed = time.monotonic() - started
        assert elapsed < 10.0, f"trainer criterion took {elapsed:.1f} s"


# -- 2. embedding combination ------------------------------------------------------


def test_combine_criterion():
    with criterion("embedding combination matches elementwise oracle to 1e-12 on 1000 triples"):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            dim = int(rng.integers(2, 96))
            prompts = PromptEmbeddingSet.from_raw(
                rng.standard_normal(dim), rng.standard_normal(dim), rng.standard_normal(dim)
            )
            combined = combine(prompts)
            for i in range(dim):
                expected = prompts.v_pos[i] - 0.5 * (
                    0.9 * prompts.v_neg[i] + 0.1 * prompts.v_empty[i]
                )
                assert abs(combined[i] - expected) < 1e-12


# -- 3. top-k filtering --------------------------------------------------------------


def test_topk_criterion():
    with criterion("topk_filter equals full-sort oracle on 10,000 random 32-candidate batches"):
        from uipref.reward.filtering import DEFAULT_TOP_K

        assert DEFAULT_TOP_K == 8
        rng = np.random.default_rng(123)
        batch = GenerationBatch(
            id="b", description_id="d", sampler_seed=0, candidate_ids=[f"c-{i}" for i in range(32)]
        )
        for _ in range(10_000):
            if rng.random() < 0.5:
                scores = [float(rng.integers(0, 5)) for _ in range(32)]  # heavy ties
            else:
                scores = [float(x) for x in rng.standard_normal(32)]
            k = int(rng.integers(1, 33))
            retained = topk_filter(batch, scores, k)
            oracle = [
                batch.candidate_ids[i]
                for i in sorted(range(32), key=lambda i: (-scores[i], i))[:k]
            ]
            assert retained == oracle


# -- 4. IoU grounding -----------------------------------------------------------------


def test_iou_grounding_criterion():
    with criterion("match_annotation equals brute-force search on 1000 random geometries"):
        rng = np.random.default_rng(31415)
        from uipref.htmlkit import match_annotation

        point_fallbacks = zero_iou_boxes = 0
        for _ in range(1000):
            geometry = random_geometry(rng, max_elements=50)
            region = random_region(rng)
            assert match_annotation(region, geometry) == oracle_match(region, geometry)
            if region.kind == "point":
                point_fallbacks += 1
            elif all(
                (region.bbox[0] + region.bbox[2] <= b.bbox[0])
                or (b.bbox[0] + b.bbox[2] <= region.bbox[0])
                or (region.bbox[1] + region.bbox[3] <= b.bbox[1])
                or (b.bbox[1] + b.bbox[3] <= region.bbox[1])
                for b in geometry.boxes
            ):
                zero_iou_boxes += 1
        assert point_fallbacks > 100, "fixture must exercise the point path"
        assert zero_iou_boxes > 30, "fixture must exercise the zero-IoU fallback path"


# -- 5. Elo ----------------------------------------------------------------------------


def test_elo_criterion():
    with criterion("elo_sequence matches step-by-step oracle on 100 random 50-battle logs"):
        rng = np.random.default_rng(2718)
        cfg = RatingConfig()
        for _ in range(100):
            battles = random_battles(rng, 50)
            ours = elo_sequence(battles, cfg)
            oracle = oracle_elo(battles)
            assert ours == oracle

        # conservation, battle by battle
        battles = random_battles(rng, 50)
        models = ("m1", "m2", "m3", "m4")
        for i in range(1, len(battles) + 1):
            ratings = elo_sequence(battles[:i], cfg, models=models)
            assert sum(ratings.values()) == pytest.approx(4000.0, abs=1e-8)

        single = elo_sequence(
            [Battle(model_a="A", model_b="B", description_id="d", winner="a")],
            RatingConfig(k_factor=4.0),
        )
        assert single == {"A": 1002.0, "B": 998.0}


# -- 6. bootstrap -------------------------------------------------------------------------


def test_bootstrap_criterion():
    with criterion("bootstrap: dominant model's 95% CI disjoint above; seeded runs identical"):
        battles = []
        for opponent in ("B", "C"):
            for i in range(100):
                battles.append(
                    Battle(model_a="A", model_b=opponent, description_id=f"d-{i}", winner="a")
                )
        cfg = RatingConfig(bootstrap_rounds=1000, rng_seed=77)
        report = bootstrap_ratings(battles, cfg)
        for other in ("B", "C"):
            assert report["A"].ci_low > report[other].ci_high
            assert report["A"].median > report[other].median
        again = bootstrap_ratings(battles, cfg)
        assert report == again  # byte-identical per-model medians and CIs


# -- 7. agreement ----------------------------------------------------------------------------


def test_agreement_criterion():
    with criterion("agreement: 429/695 -> 61.7%; strata 76.1/63.6/57.3/49.2 to one decimal"):
        def records(stratum, agree, total):
            return [
                AgreementRecord(pair_ref=f"{stratum}{i}", stratum=stratum, rater_choice="chosen")
                for i in range(agree)
            ] + [
                AgreementRecord(pair_ref=f"{stratum}d{i}", stratum=stratum, rater_choice="rejected")
                for i in range(total - agree)
            ]

        fixture = (
            records("revising", 137, 180)
            + records("ranking", 89, 181)
            + records("sketching", 117, 184)
            + records("commenting", 86, 150)
        )
        assert len(fixture) == 695
        assert sum(r.rater_choice == "chosen" for r in fixture) == 429
        report = agreement(fixture)
        assert report.overall_percent == pytest.approx(61.7, abs=0.05)
        assert report.per_stratum["revising"] == 76.1
        assert report.per_stratum["sketching"] == 63.6
        assert report.per_stratum["commenting"] == 57.3
        assert report.per_stratum["ranking"] == 49.2


# -- 8. prompt fidelity ------------------------------------------------------------------------

GENERATION_PREFIX = (
    "provide the complete HTML code for a web page implemented with only tailwind CSS and font "
    "awesome icons. do not use any templating languages like jinja. the result should resemble "
    "an award-winning iOS app. include realistic and complete placeholder data. do not treat "
    "this as the starting point for an app - it should be the mockup of a final complete UI. "
    "remember to include alt text for all images. do not use javascript. do not use SVGs. "
    "here is a description of the webpage: "
)

EDIT_HEADER = "i have implemented a website using only html, tailwind css, and font awesome icons."

EDIT_FOOTER = (
    "incorporate this feedback into the website code. you must respond with the entire code "
    "implementation. do not use comments that are placeholders for the original code."
)


def expected_comment_prompt(code: str, comments: str) -> str:
    return (
        EDIT_HEADER
        + "\n\n```html\n"
        + code
        + "\n```\n\na designer has wrote some notes and feedback:\n\""
        + comments
        + "\"\n\n"
        + EDIT_FOOTER
    )


def expected_region_prompt(code: str, items: str) -> str:
    return (
        EDIT_HEADER
        + "\n\n```html\n"
        + code
        + "\n```\n\na designer has wrote some notes and feedback for several regions of the HTML:\n\""
        + items
        + "\"\n\n"
        + EDIT_FOOTER
    )


def test_prompt_fidelity_criterion():
    with criterion("all six prompt templates byte-equal frozen fixtures on 3 inputs each"):
        descriptions = (
            "a login screen",
            "a recipe discovery feed with a bottom tab bar",
            "a podcast player showing the now-playing view",
        )
        for description in descriptions:
            assert generation_prompt(description) == GENERATION_PREFIX + description
            assert positive_prompt(description) == "ui screenshot. well-designed. " + description
            assert negative_prompt(description) == "ui screenshot. poor design. " + description
            assert empty_prompt(description) == "ui screenshot. poor design. empty screen"

        comment_cases = [
            ("<div>x</div>", ["move the cta higher"], "move the cta higher"),
            (
                "<html><body><p>hi</p></body></html>",
                ["fix contrast", "align the cards"],
                "fix contrast\nalign the cards",
            ),
            ("<section>\n<p>multi</p>\n</section>", ["a", "b", "c"], "a\nb\nc"),
        ]
        for code, comments, joined in comment_cases:
            assert comment_edit_prompt(code, comments) == expected_comment_prompt(code, joined)

        region_cases = [
            (
                "<div><button>go</button></div>",
                [("make it bigger", "<button>go</button>")],
                "make it bigger:\n<button>go</button>",
            ),
            (
                "<main><h1>t</h1><p>b</p></main>",
                [("bolder", "<h1>t</h1>"), ("smaller", "<p>b</p>")],
                "bolder:\n<h1>t</h1>\n\nsmaller:\n<p>b</p>",
            ),
            (
                "<ul><li>one</li></ul>",
                [("indent", "<li>one</li>")],
                "indent:\n<li>one</li>",
            ),
        ]
        for code, pairs, joined in region_cases:
            assert region_edit_prompt(code, pairs) == expected_region_prompt(code, joined)


# -- 9. end-to-end pipeline ----------------------------------------------------------------------


def run_stub_pipeline(root) -> dict:
    """2 descriptions x 32 candidates through annotations to an ORPO export."""
    store = CorpusStore(root)
    gateway = GatewayClient(BackendProfile(seed=2024))
    runner = JobRunner(store, gateway)

    runner.run(JobSpec(kind="gen-descriptions", parameters={"target_n": 2}, seed=11))
    runner.run(JobSpec(kind="gen-candidates", parameters={"n": 32}, seed=11))
    runner.run(JobSpec(kind="render", parameters={}, seed=11))
    filter_report = runner.run(JobSpec(kind="filter", parameters={"k": 8}, seed=11))
    assert filter_report.counts["retained"] == [8, 8]

    batches = store.batches()
    first, second = batches[0], batches[1]
    cand_rank_a, cand_rank_b = first.retained_ids[:2]
    cand_comment = first.retained_ids[2]
    cand_sketch = second.retained_ids[0]
    cand_revise = second.retained_ids[1]

    sketch_cand = store.get_candidate(cand_sketch)
    geometry = parse_geometry(store.blobs.get(sketch_cand.geometry_ref).decode())
    target_box = next(b for b in geometry.boxes if b.element_path.endswith("h1[0]"))

    revise_cand = store.get_candidate(cand_revise)
    document = json.loads(store.blobs.get(revise_cand.sketch_ref).decode())
    document["layers"][0]["frame"][2] += 12
    revised_ref = store.blobs.put(json.dumps(document, separators=(",", ":")).encode())

    annotations = [
        AnnotationRecord(
            record_id="fx-rank",
            interface="ranking",
            payload=RankingJudgment(
                description_id=first.description_id,
                left_candidate=cand_rank_a,
                right_candidate=cand_rank_b,
                winner="left",
                annotator_id="p01",
                elapsed_s=12.5,
            ),
            elapsed_s=12.5,
        ),
        AnnotationRecord(
            record_id="fx-comment",
            interface="commenting",
            payload=CommentSet(
                candidate_id=cand_comment,
                comments=("give the header more contrast",),
                annotator_id="p02",
            ),
            elapsed_s=95.0,
        ),
        AnnotationRecord(
            record_id="fx-sketch",
            interface="sketching",
            payload=SketchSet(
                candidate_id=cand_sketch,
                items=((Region.box(*target_box.bbox), "tighten this headline"),),
                annotator_id="p03",
            ),
            elapsed_s=60.0,
        ),
        AnnotationRecord(
            record_id="fx-revise",
            interface="revising",
            payload=RevisionRecord(
                candidate_id=cand_revise,
                original_sketch_ref=revise_cand.sketch_ref,
                revised_sketch_ref=revised_ref,
                annotator_id="p04",
            ),
            elapsed_s=207.0,
        ),
    ]
    for record in annotations:
        store.append_record("annotation", {"record": record_to_dict(record)})

    transform_report = runner.run(JobSpec(kind="transform-feedback", parameters={}, seed=11))
    assert transform_report.counts == {"transformed": 4, "skipped": 0, "failed": 0}
    assert {p.provenance for p in store.pairs()} == {
        "ranking",
        "commenting",
        "sketching",
        "revising",
    }
    assert len(store.pairs()) == 4

    train_report = runner.run(JobSpec(kind="train-reward", parameters={}, seed=11))
    assert train_report.counts["steps"] == 100

    runner.run(
        JobSpec(
            kind="build-pairs",
            parameters={"head_path": train_report.artifacts["head"]},
            seed=11,
        )
    )
    export_path = store.root / "orpo.jsonl"
    export_report = runner.run(
        JobSpec(kind="export-orpo", parameters={"destination": str(export_path)}, seed=11)
    )
    assert export_report.counts["records"] == 2

    records = read_orpo(export_path)
    assert len(records) == 2
    for record in records:
        assert record["prompt"].startswith(GENERATION_PREFIX)
        assert record["chosen"] != record["rejected"]
        assert {"prompt", "chosen", "rejected", "description_id"} <= set(record)

    digest = {
        "orpo": hashlib.sha256(export_path.read_bytes()).hexdigest(),
        "head": hashlib.sha256((store.root / "heads" / "reward-head.json").read_bytes()).hexdigest(),
        "blobs": hashlib.sha256("".join(sorted(p.name for p in store.blobs.root.iterdir())).encode()).hexdigest(),
        "pairs": hashlib.sha256(
            json.dumps(
                [
                    (p.description_id, p.chosen_ref, p.rejected_ref, p.provenance)
                    for p in store.pairs()
                ]
            ).encode()
        ).hexdigest(),
    }
    store.close()
    return digest


def test_pipeline_end_to_end_criterion(tmp_path):
    with criterion("stub pipeline end-to-end: 4 pairs, 2 ORPO records, < 60 s, bit-identical"):
        started = time.monotonic()
        first = run_stub_pipeline(tmp_path / "run-a")
        elapsed = time.monotonic() - started
        assert elapsed < 60.0, f"pipeline took {elapsed:.1f} s"
        second = run_stub_pipeline(tmp_path / "run-b")
        assert first == second


# -- 10. study stats -----------------------------------------------------------------------------


def test_study_stats_criterion():
    with criterion("study fixture: 1063/181/152/64 (sum 1460) and printed-precision stats"):
        report = study_stats(build_study_records())
        assert report.total == 1460
        per = report.per_interface
        assert (per["ranking"].count, per["sketching"].count) == (1063, 181)
        assert (per["commenting"].count, per["revising"].count) == (152, 64)
        assert per["ranking"].annotations_per_minute == pytest.approx(4.8, abs=0.05)
        assert per["revising"].minutes_per_annotation == pytest.approx(3.45, abs=0.005)
        assert per["commenting"].mean_text_length == pytest.approx(87.1, abs=0.05)
        assert per["sketching"].mean_text_length == pytest.approx(42.2, abs=0.05)
        assert per["commenting"].mean_items_per_ui == pytest.approx(1.9, abs=0.05)
        assert per["sketching"].mean_items_per_ui == pytest.approx(2.7, abs=0.05)
