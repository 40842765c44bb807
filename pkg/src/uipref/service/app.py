"""HTTP API over the store, scheduler, transforms, arena, and jobs.

Endpoints (all JSON unless noted):

    GET  /tasks/next?interface=&annotator=   one annotation task, blind
    POST /annotations                        ingest one annotation record
    GET  /arena/match                        one blind arena comparison
    POST /arena/judgments                    resolve a match to a battle
    POST /agreement-records                  ingest one quality-check rating
    GET  /reports/ratings                    Elo medians + CIs + win rates
    GET  /reports/agreement                  agreement percentages
    GET  /reports/study-stats                per-interface study statistics
    POST /jobs                               enqueue a background job
    GET  /jobs/{job_id}                      poll a job report
    GET  /blobs/{ref}                        raw blob bytes (screenshots etc.)
    POST /blobs                              store a blob (revised documents)

Every mutation is validated against module invariants and durably appended
to the store manifest before the response is sent. Task and judge payloads
never contain generator identities or provenance hints.
"""

from __future__ import annotations

import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .. import arena
from ..corpus.store import CorpusStore
from ..errors import (
    ConfigurationError,
    IntegrityError,
    NotFoundError,
    PoolExhaustedError,
    UiPrefError,
    ValidationError,
)
from ..feedback.records import record_from_dict, record_to_dict
from ..feedback.stats import study_stats
from ..feedback.tasks import TaskScheduler
from ..gateway.client import GatewayClient
from ..gateway.profile import BackendProfile
from .config import ServiceConfig
from .jobs import JobRunner, JobSpec

_STATUS_FOR = {
    ValidationError: 400,
    ConfigurationError: 400,
    NotFoundError: 404,
    PoolExhaustedError: 409,
    IntegrityError: 409,
}


class ServiceState:
    def __init__(self, config: ServiceConfig, gateway: GatewayClient | None = None):
        self.config = config
        self.store = CorpusStore(config.store_root, fsync=config.fsync)
        self.gateway = gateway or GatewayClient(
            BackendProfile(
                seed=config.seed,
                viewport=config.viewport,
                embedding_dim=config.embedding_dim,
                max_output_tokens=config.max_output_tokens,
            )
        )
        self.scheduler = TaskScheduler(self.store, rng=np.random.default_rng(config.seed))
        self.runner = JobRunner(self.store, self.gateway)
        self.match_rng = np.random.default_rng(config.seed + 1)
        self.jobs: dict[str, dict] = {}
        self.jobs_lock = threading.Lock()
        self.executor = ThreadPoolExecutor(max_workers=1)

    def battles(self) -> list[arena.Battle]:
        return [
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

    def model_outputs(self) -> dict[str, dict[str, str]]:
        """model -> description_id -> screenshot ref (rendered outputs only)."""
        outputs: dict[str, dict[str, str]] = {}
        for rec in self.store.records("model_output"):
            candidate = self.store.get_candidate(rec["candidate_id"])
            if candidate.screenshot_ref is not None:
                outputs.setdefault(rec["model"], {})[rec["description_id"]] = candidate.screenshot_ref
        return outputs


def create_app(config: ServiceConfig | None = None, gateway: GatewayClient | None = None) -> FastAPI:
    state = ServiceState(config or ServiceConfig(), gateway)
    app = FastAPI(title="uipref", version="0.1.0")
    app.state.service = state
    # the browser studio is served separately; same-host cross-origin is fine
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(UiPrefError)
    async def uipref_error_handler(_request: Request, exc: UiPrefError):
        status = next(
            (code for cls, code in _STATUS_FOR.items() if isinstance(exc, cls)), 500
        )
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    # -- annotation tasks --

    @app.get("/tasks/next")
    def next_task(interface: str, annotator: str):
        task = state.scheduler.next_task(interface, annotator)
        return {
            "interface": task.interface,
            "description_id": task.description_id,
            "description": task.description_text,
            "candidate_ids": list(task.candidate_ids),
            "screenshot_refs": list(task.screenshot_refs),
            "sketch_refs": list(task.sketch_refs),
        }

    @app.post("/annotations")
    async def post_annotation(request: Request):
        body = await request.json()
        if "record_id" not in body:
            body["record_id"] = f"ann-{uuid.uuid4().hex[:12]}"
        try:
            record = record_from_dict(body, scale_factor=state.config.scale_factor)
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed annotation record: missing {exc}") from exc
        # Existing record id: idempotent replay from a retrying client.
        known = {rec["record"]["record_id"] for rec in state.store.records("annotation")}
        if record.record_id not in known:
            state.store.append_record("annotation", {"record": record_to_dict(record)})
        return {"record_id": record.record_id, "interface": record.interface}

    # -- arena --

    @app.get("/arena/match")
    def arena_match():
        outputs = state.model_outputs()
        models = sorted(outputs)
        if len(models) < 2:
            raise ConfigurationError("arena needs rendered outputs from at least two models")
        shared: dict[tuple[str, str], list[str]] = {}
        for i, a in enumerate(models):
            for b in models[i + 1 :]:
                common = sorted(set(outputs[a]) & set(outputs[b]))
                if common:
                    shared[(a, b)] = common
        if not shared:
            raise ConfigurationError("no description is covered by two models")
        pairs = sorted(shared)
        pair = pairs[int(state.match_rng.integers(len(pairs)))]
        description_id = shared[pair][int(state.match_rng.integers(len(shared[pair])))]
        left, right = pair if state.match_rng.random() < 0.5 else (pair[1], pair[0])
        match_id = f"match-{uuid.uuid4().hex[:12]}"
        state.store.append_record(
            "match",
            {
                "match_id": match_id,
                "left_model": left,
                "right_model": right,
                "description_id": description_id,
            },
        )
        description = state.store.get_description(description_id)
        return {
            "match_id": match_id,
            "description": description.text,
            "left_ref": outputs[left][description_id],
            "right_ref": outputs[right][description_id],
        }

    @app.post("/arena/judgments")
    async def post_judgment(request: Request):
        body = await request.json()
        match_id = body.get("match_id")
        winner = body.get("winner")
        if winner not in ("left", "right"):
            raise ValidationError("winner must be 'left' or 'right'")
        match = next(
            (rec for rec in state.store.records("match") if rec["match_id"] == match_id), None
        )
        if match is None:
            raise NotFoundError(f"match {match_id} not found")
        battle = arena.Battle(
            model_a=match["left_model"],
            model_b=match["right_model"],
            description_id=match["description_id"],
            winner="a" if winner == "left" else "b",
            judge_id=body.get("judge_id", ""),
            timestamp=time.time(),
        )
        state.store.append_record(
            "battle",
            {
                "model_a": battle.model_a,
                "model_b": battle.model_b,
                "description_id": battle.description_id,
                "winner": battle.winner,
                "judge_id": battle.judge_id,
                "timestamp": battle.timestamp,
            },
        )
        return {"recorded": True, "battles": len(state.store.records("battle"))}

    @app.post("/agreement-records")
    async def post_agreement(request: Request):
        body = await request.json()
        record = arena.AgreementRecord(
            pair_ref=body["pair_ref"], stratum=body["stratum"], rater_choice=body["rater_choice"]
        )
        state.store.append_record(
            "agreement",
            {"pair_ref": record.pair_ref, "stratum": record.stratum, "rater_choice": record.rater_choice},
        )
        return {"recorded": True}

    # -- reports --

    @app.get("/reports/ratings")
    def ratings_report(k_factor: float = 4.0, rounds: int = 1000, seed: int = 0):
        battles = state.battles()
        if not battles:
            raise NotFoundError("no battles recorded")
        cfg = arena.RatingConfig(k_factor=k_factor, bootstrap_rounds=rounds, rng_seed=seed)
        report = arena.rating_report(battles, cfg)
        return {
            "battles": len(battles),
            "ratings": {
                m: {"median": r.median, "ci_low": r.ci_low, "ci_high": r.ci_high}
                for m, r in report.ratings.items()
            },
            "win_rates": {f"{a}|{b}": rate for (a, b), rate in report.win_rates.items()},
            "average_win_rate": report.average_win_rate,
        }

    @app.get("/reports/agreement")
    def agreement_report():
        records = [
            arena.AgreementRecord(
                pair_ref=rec["pair_ref"], stratum=rec["stratum"], rater_choice=rec["rater_choice"]
            )
            for rec in state.store.records("agreement")
        ]
        if not records:
            raise NotFoundError("no agreement records")
        report = arena.agreement(records)
        return {
            "overall_percent": report.overall_percent,
            "total": report.total,
            "per_stratum": report.per_stratum,
            "stratum_totals": report.stratum_totals,
        }

    @app.get("/reports/study-stats")
    def study_stats_report():
        records = [
            record_from_dict(rec["record"], scale_factor=state.config.scale_factor)
            for rec in state.store.records("annotation")
        ]
        report = study_stats(records)
        return {
            "total": report.total,
            "per_interface": {
                name: {
                    "count": s.count,
                    "annotations_per_minute": s.annotations_per_minute,
                    "minutes_per_annotation": s.minutes_per_annotation,
                    "mean_text_length": s.mean_text_length,
                    "mean_items_per_ui": s.mean_items_per_ui,
                }
                for name, s in report.per_interface.items()
            },
        }

    # -- jobs --

    @app.post("/jobs")
    async def post_job(request: Request):
        body = await request.json()
        spec = JobSpec(
            kind=body.get("kind", ""),
            parameters=body.get("parameters", {}),
            seed=int(body.get("seed", state.config.seed)),
        )
        job_id = f"job-{uuid.uuid4().hex[:12]}"
        with state.jobs_lock:
            state.jobs[job_id] = {"status": "pending", "kind": spec.kind}

        def execute():
            try:
                report = state.runner.run(spec)
                with state.jobs_lock:
                    state.jobs[job_id] = report.to_dict() | {"job_id": job_id}
            except Exception as exc:
                with state.jobs_lock:
                    state.jobs[job_id] = {
                        "job_id": job_id,
                        "kind": spec.kind,
                        "status": "failed",
                        "error": f"{type(exc).__name__}: {exc}",
                    }

        state.executor.submit(execute)
        return {"job_id": job_id, "status": "pending"}

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        with state.jobs_lock:
            if job_id not in state.jobs:
                raise NotFoundError(f"job {job_id} not found")
            return dict(state.jobs[job_id])

    # -- blobs --

    @app.get("/blobs/{ref}")
    def get_blob(ref: str):
        data = state.store.blobs.get(ref)
        media = "image/png" if data[:8] == b"\x89PNG\r\n\x1a\n" else "application/octet-stream"
        return Response(content=data, media_type=media)

    @app.post("/blobs")
    async def put_blob(request: Request):
        data = await request.body()
        if not data:
            raise ValidationError("empty blob")
        return {"ref": state.store.blobs.put(data)}

    return app
