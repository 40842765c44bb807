"""Batch jobs binding the pipeline together.

Each JobSpec kind maps to one pipeline stage. Reports echo the parameters
and seeds actually used, so a report is sufficient to re-execute the job
bit-identically. Transform jobs are idempotent through the transformer's
processed-record log.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

import numpy as np

from ..corpus.store import CorpusStore
from ..errors import ValidationError
from ..feedback.records import record_from_dict
from ..feedback.transforms import FeedbackTransformer
from ..gateway.client import GatewayClient
from ..pairgen.builder import AlignmentPair, build_alignment_pairs
from ..pairgen.export import export_orpo
from ..pairgen.scoring import ScoredBatch, ensure_rendered, score_batch
from ..reward.dataset import build_synthetic_pool, pairs_to_training
from ..reward.filtering import topk_filter
from ..reward.scoring import RewardHead
from ..reward.trainer import TrainerConfig, train
from .. import arena

JOB_KINDS = (
    "gen-descriptions",
    "gen-candidates",
    "render",
    "filter",
    "transform-feedback",
    "train-reward",
    "score",
    "build-pairs",
    "export-orpo",
    "ratings",
)


@dataclass(frozen=True)
class JobSpec:
    kind: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in JOB_KINDS:
            raise ValidationError(f"unknown job kind {self.kind!r}")


@dataclass
class JobReport:
    job_id: str
    kind: str
    status: str
    seed: int
    parameters: dict
    counts: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)
    duration_s: float = 0.0
    error: str = ""

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "kind": self.kind,
            "status": self.status,
            "seed": self.seed,
            "parameters": self.parameters,
            "counts": self.counts,
            "artifacts": self.artifacts,
            "duration_s": self.duration_s,
            "error": self.error,
        }


def _derived_seed(seed: int, *parts: str) -> int:
    h = hashlib.sha256(str(seed).encode())
    for part in parts:
        h.update(b"\x1f")
        h.update(part.encode())
    return int.from_bytes(h.digest()[:8], "big")


class JobRunner:
    def __init__(self, store: CorpusStore, gateway: GatewayClient):
        self.store = store
        self.gateway = gateway
        self._job_counter = len(store.records("job"))

    def _head(self, parameters: dict) -> RewardHead:
        path = parameters.get("head_path")
        if path:
            return RewardHead.load(path)
        return RewardHead.identity(self.gateway.profile.embedding_dim)

    def _descriptions(self, parameters: dict) -> list:
        ids = parameters.get("description_ids")
        if ids:
            return [self.store.get_description(i) for i in ids]
        return self.store.descriptions(split=parameters.get("split"))

    def run(self, spec: JobSpec) -> JobReport:
        self._job_counter += 1
        report = JobReport(
            job_id=f"job-{self._job_counter:06d}",
            kind=spec.kind,
            status="running",
            seed=spec.seed,
            parameters=dict(spec.parameters),
        )
        started = time.monotonic()
        try:
            handler = {
                "gen-descriptions": self._run_gen_descriptions,
                "gen-candidates": self._run_gen_candidates,
                "render": self._run_render,
                "filter": self._run_filter,
                "transform-feedback": self._run_transform,
                "train-reward": self._run_train,
                "score": self._run_score,
                "build-pairs": self._run_build_pairs,
                "export-orpo": self._run_export,
                "ratings": self._run_ratings,
            }[spec.kind]
            handler(spec, report)
            report.status = "done"
        except Exception as exc:
            report.status = "failed"
            report.error = f"{type(exc).__name__}: {exc}"
            raise
        finally:
            report.duration_s = time.monotonic() - started
            self.store.append_record("job", report.to_dict())
        return report

    # -- handlers --

    def _run_gen_descriptions(self, spec: JobSpec, report: JobReport) -> None:
        params = spec.parameters
        target_n = int(params["target_n"])
        seed_examples = list(params.get("seed_examples") or ["a login screen for a banking app"])
        texts = self.gateway.generate_descriptions(
            target_n, seed_examples, rng_seed=_derived_seed(spec.seed, "descriptions")
        )
        added = self.store.add_descriptions(texts, split=params.get("split", "train"))
        report.counts = {"requested": target_n, "generated": len(texts), "added": len(added)}

    def _run_gen_candidates(self, spec: JobSpec, report: JobReport) -> None:
        params = spec.parameters
        n = int(params.get("n", 32))
        model = params.get("model", "")
        descriptions = self._descriptions(params)
        made = 0
        for description in descriptions:
            batch = self.store.new_batch(description.id, sampler_seed=spec.seed)
            candidates = self.gateway.generate_candidates(
                description.text, n, rng_seed=_derived_seed(spec.seed, "candidates", description.id)
            )
            for html in candidates:
                candidate = self.store.put_candidate(batch.id, html)
                made += 1
                if model:
                    self.store.append_record(
                        "model_output",
                        {
                            "model": model,
                            "description_id": description.id,
                            "candidate_id": candidate.id,
                        },
                    )
        report.counts = {"descriptions": len(descriptions), "candidates": made}

    def _run_render(self, spec: JobSpec, report: JobReport) -> None:
        rendered = skipped = 0
        sketched = 0
        for candidate in self.store.candidates():
            if candidate.screenshot_ref is not None:
                skipped += 1
                continue
            ensure_rendered(candidate.id, self.store, self.gateway)
            rendered += 1
            refreshed = self.store.get_candidate(candidate.id)
            if refreshed.sketch_ref is None and refreshed.geometry_ref is not None:
                from ..htmlkit.geometry import parse_geometry

                geometry = parse_geometry(self.store.blobs.get(refreshed.geometry_ref).decode())
                html = self.store.candidate_html(candidate.id)
                sketch_doc = self.gateway.to_sketch(html, geometry)
                self.store.update_candidate(candidate.id, sketch_ref=self.store.blobs.put(sketch_doc))
                sketched += 1
        report.counts = {"rendered": rendered, "skipped": skipped, "sketched": sketched}

    def _run_filter(self, spec: JobSpec, report: JobReport) -> None:
        k = int(spec.parameters.get("k", 8))
        head = self._head(spec.parameters)
        retained_counts = []
        for batch in self.store.batches():
            if not batch.candidate_ids or batch.retained_ids:
                continue
            scored = score_batch(batch.id, head, self.store, self.gateway)
            by_id = dict(scored.scores)
            scores = [by_id[cid] for cid in batch.candidate_ids]
            retained = topk_filter(batch, scores, k)
            self.store.set_retained(batch.id, retained)
            for cid in batch.candidate_ids:
                if np.isfinite(by_id[cid]):
                    self.store.update_candidate(cid, score=by_id[cid])
            retained_counts.append(len(retained))
        report.counts = {"batches": len(retained_counts), "retained": retained_counts, "k": k}

    def _run_transform(self, spec: JobSpec, report: JobReport) -> None:
        scale = float(spec.parameters.get("scale_factor", 1.0))
        records = [
            record_from_dict(rec["record"], scale_factor=scale)
            for rec in self.store.records("annotation")
        ]
        transformer = FeedbackTransformer(self.store, self.gateway)
        report.counts = transformer.run_batch(records)

    def _run_train(self, spec: JobSpec, report: JobReport) -> None:
        params = spec.parameters
        cfg = TrainerConfig(
            max_steps=int(params.get("max_steps", 100)),
            batch_size=int(params.get("batch_size", 32)),
            weight_decay=float(params.get("weight_decay", 0.2)),
            learning_rate=float(params.get("learning_rate", 1e-3)),
            margin=float(params.get("margin", 1e-2)),
            aug_prob=float(params.get("aug_prob", 0.5)),
            rng_seed=spec.seed,
        )
        provenance = params.get("provenance")
        pairs = self.store.pairs(provenance=provenance)
        if not pairs:
            raise ValidationError("no preference pairs to train on")
        designer = pairs_to_training(pairs, self.store, self.gateway)
        head = self._head(params)
        pool = []
        if cfg.aug_prob > 0:
            pool = build_synthetic_pool(
                self.store,
                self.gateway,
                np.random.default_rng(_derived_seed(spec.seed, "synthetic-pool")),
                pairs_per_batch=int(params.get("synthetic_pairs_per_batch", 16)),
            )
        result = train(head, designer, pool, cfg)

        heads_dir = self.store.root / "heads"
        heads_dir.mkdir(exist_ok=True)
        head_path = heads_dir / params.get("head_out", "reward-head.json")
        result.head.save(head_path)
        trace_path = head_path.with_suffix(".trace.csv")
        result.write_trace(trace_path)

        report.counts = {
            "designer_pairs": len(designer),
            "synthetic_pool": len(pool),
            "steps": cfg.max_steps,
            "batch": cfg.batch_size,
            "lr": cfg.learning_rate,
            "decay": cfg.weight_decay,
            "margin": cfg.margin,
            "aug": cfg.aug_prob,
            "final_loss": result.trace[-1].mean_loss if result.trace else None,
        }
        report.artifacts = {"head": str(head_path), "trace": str(trace_path)}

    def _score_all(self, spec: JobSpec) -> list[ScoredBatch]:
        head = self._head(spec.parameters)
        out = []
        for batch in self.store.batches():
            if batch.candidate_ids:
                out.append(score_batch(batch.id, head, self.store, self.gateway))
        return out

    def _run_score(self, spec: JobSpec, report: JobReport) -> None:
        scored = self._score_all(spec)
        finite = 0
        for batch in scored:
            for cid, value in batch.scores:
                if np.isfinite(value):
                    self.store.update_candidate(cid, score=value)
                    finite += 1
        report.counts = {
            "batches": len(scored),
            "scored": finite,
            "failed": sum(len(b.failed) for b in scored),
        }

    def _run_build_pairs(self, spec: JobSpec, report: JobReport) -> None:
        scored = self._score_all(spec)
        rng = np.random.default_rng(_derived_seed(spec.seed, "build-pairs"))
        pairs, skipped = build_alignment_pairs(
            scored,
            self.store,
            rng,
            pairs_per_description=int(spec.parameters.get("pairs_per_description", 1)),
        )
        for pair in pairs:
            self.store.append_record(
                "alignment_pair",
                {
                    "prompt": pair.prompt,
                    "chosen": pair.chosen,
                    "rejected": pair.rejected,
                    "description_id": pair.description_id,
                    "chosen_score": pair.chosen_score,
                    "rejected_score": pair.rejected_score,
                },
            )
        report.counts = {"pairs": len(pairs), "skipped_batches": skipped}

    def _run_export(self, spec: JobSpec, report: JobReport) -> None:
        destination = spec.parameters.get("destination")
        if not destination:
            raise ValidationError("export-orpo requires a destination")
        pairs = [
            AlignmentPair(
                prompt=rec["prompt"],
                chosen=rec["chosen"],
                rejected=rec["rejected"],
                description_id=rec.get("description_id", ""),
                chosen_score=rec.get("chosen_score", 0.0),
                rejected_score=rec.get("rejected_score", 0.0),
            )
            for rec in self.store.records("alignment_pair")
        ]
        result = export_orpo(
            pairs, destination, max_tokens=int(spec.parameters.get("max_tokens", 4096))
        )
        report.counts = {"records": result.records, "truncated": result.truncated}
        report.artifacts = {"dataset": str(destination)}

    def _run_ratings(self, spec: JobSpec, report: JobReport) -> None:
        battles = [
            arena.Battle(
                model_a=rec["model_a"],
                model_b=rec["model_b"],
                description_id=rec["description_id"],
                winner=rec["winner"],
                judge_id=rec.get("judge_id", ""),
                timestamp=rec.get("timestamp", 0.0),
            )
            for rec in self.store.records("battle")
        ]
        if not battles:
            raise ValidationError("no battles recorded")
        cfg = arena.RatingConfig(
            k_factor=float(spec.parameters.get("k_factor", 4.0)),
            bootstrap_rounds=int(spec.parameters.get("bootstrap_rounds", 1000)),
            rng_seed=spec.seed,
        )
        rating = arena.rating_report(battles, cfg)
        reports_dir = self.store.root / "reports"
        reports_dir.mkdir(exist_ok=True)
        ratings_csv = reports_dir / "ratings.csv"
        matrix_csv = reports_dir / "win-rates.csv"
        rating.write_ratings_csv(ratings_csv)
        rating.write_matrix_csv(matrix_csv)
        report.counts = {"battles": len(battles), "models": len(rating.ratings)}
        report.artifacts = {"ratings": str(ratings_csv), "matrix": str(matrix_csv)}
