#!/usr/bin/env python3
"""Run the whole stub pipeline end to end and print what happened.

Descriptions are synthesized, 32 candidate pages are sampled per description,
rendered, filtered to the top 8, annotated with one fixture record per
feedback interface, transformed into preference pairs, used to train the
reward head, and finally exported as ORPO alignment pairs.

    python scripts/run_pipeline.py --workdir ./pipeline-run --seed 11
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from uipref.corpus import CorpusStore
from uipref.feedback import AnnotationRecord, CommentSet, RankingJudgment, RevisionRecord, SketchSet
from uipref.feedback.records import record_to_dict
from uipref.gateway import BackendProfile, GatewayClient
from uipref.htmlkit.geometry import Region, parse_geometry
from uipref.service import JobRunner, JobSpec


def fixture_annotations(store: CorpusStore) -> list[AnnotationRecord]:
    first, second = store.batches()[:2]
    rank_a, rank_b = first.retained_ids[:2]
    comment_target = first.retained_ids[2]
    sketch_target = second.retained_ids[0]
    revise_target = second.retained_ids[1]

    sketch_cand = store.get_candidate(sketch_target)
    geometry = parse_geometry(store.blobs.get(sketch_cand.geometry_ref).decode())
    header = next(b for b in geometry.boxes if b.element_path.endswith("h1[0]"))

    revise_cand = store.get_candidate(revise_target)
    document = json.loads(store.blobs.get(revise_cand.sketch_ref).decode())
    document["layers"][0]["frame"][2] += 12
    revised_ref = store.blobs.put(json.dumps(document, separators=(",", ":")).encode())

    return [
        AnnotationRecord(
            record_id="demo-rank",
            interface="ranking",
            payload=RankingJudgment(
                description_id=first.description_id,
                left_candidate=rank_a,
                right_candidate=rank_b,
                winner="left",
                annotator_id="demo",
                elapsed_s=12.5,
            ),
            elapsed_s=12.5,
        ),
        AnnotationRecord(
            record_id="demo-comment",
            interface="commenting",
            payload=CommentSet(
                candidate_id=comment_target,
                comments=("increase the contrast of the header",),
                annotator_id="demo",
            ),
            elapsed_s=80.0,
        ),
        AnnotationRecord(
            record_id="demo-sketch",
            interface="sketching",
            payload=SketchSet(
                candidate_id=sketch_target,
                items=((Region.box(*header.bbox), "this headline is too loose"),),
                annotator_id="demo",
            ),
            elapsed_s=55.0,
        ),
        AnnotationRecord(
            record_id="demo-revise",
            interface="revising",
            payload=RevisionRecord(
                candidate_id=revise_target,
                original_sketch_ref=revise_cand.sketch_ref,
                revised_sketch_ref=revised_ref,
                annotator_id="demo",
            ),
            elapsed_s=207.0,
        ),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default="pipeline-run")
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--descriptions", type=int, default=2)
    parser.add_argument("--candidates", type=int, default=32)
    args = parser.parse_args()

    root = Path(args.workdir)
    store = CorpusStore(root / "store")
    gateway = GatewayClient(BackendProfile(seed=args.seed))
    runner = JobRunner(store, gateway)

    def run(kind, **parameters):
        report = runner.run(JobSpec(kind=kind, parameters=parameters, seed=args.seed))
        print(f"{kind:20s} {report.counts}")
        return report

    run("gen-descriptions", target_n=args.descriptions)
    run("gen-candidates", n=args.candidates)
    run("render")
    run("filter", k=8)

    for record in fixture_annotations(store):
        store.append_record("annotation", {"record": record_to_dict(record)})
    run("transform-feedback")

    trained = run("train-reward")
    run("build-pairs", head_path=trained.artifacts["head"])
    export = run("export-orpo", destination=str(root / "orpo.jsonl"))

    print()
    print(f"store:      {store.root}")
    print(f"reward head:{trained.artifacts['head']}")
    print(f"orpo export:{export.artifacts['dataset']} ({export.counts['records']} records)")


if __name__ == "__main__":
    main()
