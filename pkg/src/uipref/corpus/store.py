"""File-backed persistence: content-addressed blobs plus an append-only manifest.

Layout under the store root:

    blobs/<sha256>        one file per distinct content
    manifest.jsonl        one JSON record per line, kind-tagged, append-only

Mutations are serialized through a single writer lock; readers work off
in-memory indexes that are rebuilt by replaying the manifest on open.
Records are never rewritten: updates (render refs, scores, retained ids)
are appended as new records and merged during replay, which keeps pipeline
runs auditable.

Identifiers are opaque strings derived from (content hash, creation counter),
so a store populated by a seeded pipeline run is byte-reproducible.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path
from typing import Any, Iterator

from ..errors import IntegrityError, NotFoundError, ValidationError
from .model import (
    GenerationBatch,
    PreferencePair,
    UiCandidate,
    UiDescription,
    normalize_text,
)


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class BlobStore:
    """Content-addressed blob directory; one file per distinct content."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def put(self, data: bytes) -> str:
        ref = content_hash(data)
        path = self.root / ref
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, path)
        return ref

    def get(self, ref: str) -> bytes:
        path = self.root / ref
        if not path.exists():
            raise NotFoundError(f"blob {ref} not found")
        return path.read_bytes()

    def has(self, ref: str) -> bool:
        return (self.root / ref).exists()

    def __len__(self) -> int:
        return sum(1 for p in self.root.iterdir() if not p.name.endswith(".tmp"))


class CorpusStore:
    """Canonical store for descriptions, candidates, batches, and pairs.

    Also keeps kind-tagged generic records (annotations, battles, job
    reports, ...) for the modules layered on top; those modules own their
    record schemas, the store owns durability and replay.
    """

    def __init__(self, root: str | Path, fsync: bool = False):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.blobs = BlobStore(self.root / "blobs")
        self._manifest_path = self.root / "manifest.jsonl"
        self._lock = threading.RLock()
        self._fsync = fsync
        self._counter = 0

        self._descriptions: dict[str, UiDescription] = {}
        self._desc_by_norm: dict[str, str] = {}
        self._candidates: dict[str, UiCandidate] = {}
        self._batches: dict[str, GenerationBatch] = {}
        self._pairs: list[PreferencePair] = []
        self._generic: dict[str, list[dict]] = {}

        self._manifest_file = open(self._manifest_path, "a", encoding="utf-8")
        self._replay()

    # -- manifest plumbing --

    def _replay(self) -> None:
        if not self._manifest_path.exists():
            return
        with open(self._manifest_path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    self._apply(json.loads(line))

    def _append(self, record: dict) -> None:
        self._counter += 1
        record = {"seq": self._counter, **record}
        self._manifest_file.write(json.dumps(record, ensure_ascii=False) + "\n")
        self._manifest_file.flush()
        if self._fsync:
            os.fsync(self._manifest_file.fileno())
        self._apply(record)

    def _apply(self, record: dict) -> None:
        self._counter = max(self._counter, int(record.get("seq", 0)))
        kind = record["kind"]
        if kind == "description":
            d = UiDescription(id=record["id"], text=record["text"], split=record["split"])
            self._descriptions[d.id] = d
            self._desc_by_norm[normalize_text(d.text)] = d.id
        elif kind == "batch":
            b = GenerationBatch(
                id=record["id"],
                description_id=record["description_id"],
                sampler_seed=record["sampler_seed"],
            )
            self._batches[b.id] = b
        elif kind == "candidate":
            c = UiCandidate(
                id=record["id"],
                description_id=record["description_id"],
                batch_index=record["batch_index"],
                html_ref=record["html_ref"],
            )
            self._candidates[c.id] = c
            self._batches[record["batch_id"]].candidate_ids.append(c.id)
        elif kind == "candidate_update":
            old = self._candidates[record["id"]]
            self._candidates[record["id"]] = UiCandidate(
                id=old.id,
                description_id=old.description_id,
                batch_index=old.batch_index,
                html_ref=old.html_ref,
                screenshot_ref=record.get("screenshot_ref", old.screenshot_ref),
                geometry_ref=record.get("geometry_ref", old.geometry_ref),
                sketch_ref=record.get("sketch_ref", old.sketch_ref),
                score=record.get("score", old.score),
            )
        elif kind == "batch_retained":
            batch = self._batches[record["id"]]
            batch.retained_ids = list(record["retained_ids"])
            batch.validate()
        elif kind == "pair":
            self._pairs.append(
                PreferencePair(
                    description_id=record["description_id"],
                    chosen_ref=record["chosen_ref"],
                    rejected_ref=record["rejected_ref"],
                    provenance=record["provenance"],
                    annotator_id=record.get("annotator_id", ""),
                )
            )
        else:
            self._generic.setdefault(kind, []).append(record)

    def _next_id(self, prefix: str, data: bytes) -> str:
        return f"{prefix}-{self._counter + 1:06d}-{content_hash(data)[:8]}"

    def close(self) -> None:
        self._manifest_file.close()

    # -- descriptions --

    def add_description(self, text: str, split: str = "train") -> UiDescription:
        with self._lock:
            key = normalize_text(text)
            if not key:
                raise ValidationError("description text is empty")
            if key in self._desc_by_norm:
                raise ValidationError(f"duplicate description: {text!r}")
            desc_id = self._next_id("d", text.encode())
            desc = UiDescription(id=desc_id, text=text, split=split)
            self._append({"kind": "description", "id": desc.id, "text": desc.text, "split": desc.split})
            return desc

    def add_descriptions(self, texts: list[str], split: str = "train") -> list[UiDescription]:
        """Add texts that are new under normalization; duplicates are skipped."""
        added = []
        with self._lock:
            for text in texts:
                key = normalize_text(text)
                if key and key not in self._desc_by_norm:
                    added.append(self.add_description(text, split))
        return added

    def get_description(self, desc_id: str) -> UiDescription:
        try:
            return self._descriptions[desc_id]
        except KeyError:
            raise NotFoundError(f"description {desc_id} not found") from None

    def descriptions(self, split: str | None = None) -> list[UiDescription]:
        out = list(self._descriptions.values())
        if split is not None:
            out = [d for d in out if d.split == split]
        return out

    # -- batches and candidates --

    def new_batch(self, description_id: str, sampler_seed: int = 0) -> GenerationBatch:
        with self._lock:
            self.get_description(description_id)
            batch_id = self._next_id("b", f"{description_id}:{sampler_seed}".encode())
            self._append(
                {
                    "kind": "batch",
                    "id": batch_id,
                    "description_id": description_id,
                    "sampler_seed": sampler_seed,
                }
            )
            return self._batches[batch_id]

    def put_candidate(self, batch_id: str, html: str) -> UiCandidate:
        """Persist one candidate; the html blob is stored once per distinct content."""
        with self._lock:
            if batch_id not in self._batches:
                raise NotFoundError(f"batch {batch_id} not found")
            if not html.strip():
                raise ValidationError("candidate html is empty")
            batch = self._batches[batch_id]
            self.get_description(batch.description_id)
            html_ref = self.blobs.put(html.encode())
            cand_id = self._next_id("c", html.encode())
            self._append(
                {
                    "kind": "candidate",
                    "id": cand_id,
                    "batch_id": batch_id,
                    "description_id": batch.description_id,
                    "batch_index": len(batch.candidate_ids),
                    "html_ref": html_ref,
                }
            )
            return self._candidates[cand_id]

    def get_candidate(self, cand_id: str) -> UiCandidate:
        try:
            return self._candidates[cand_id]
        except KeyError:
            raise NotFoundError(f"candidate {cand_id} not found") from None

    def get_batch(self, batch_id: str) -> GenerationBatch:
        try:
            return self._batches[batch_id]
        except KeyError:
            raise NotFoundError(f"batch {batch_id} not found") from None

    def batches(self, description_id: str | None = None) -> list[GenerationBatch]:
        out = list(self._batches.values())
        if description_id is not None:
            out = [b for b in out if b.description_id == description_id]
        return out

    def candidates(self) -> list[UiCandidate]:
        return list(self._candidates.values())

    def update_candidate(self, cand_id: str, **fields: Any) -> UiCandidate:
        allowed = {"screenshot_ref", "geometry_ref", "sketch_ref", "score"}
        unknown = set(fields) - allowed
        if unknown:
            raise ValidationError(f"cannot update candidate fields {sorted(unknown)}")
        with self._lock:
            self.get_candidate(cand_id)
            self._append({"kind": "candidate_update", "id": cand_id, **fields})
            return self._candidates[cand_id]

    def set_retained(self, batch_id: str, retained_ids: list[str]) -> None:
        with self._lock:
            batch = self.get_batch(batch_id)
            if not set(retained_ids) <= set(batch.candidate_ids):
                raise ValidationError("retained_ids must be a subset of candidate_ids")
            self._append({"kind": "batch_retained", "id": batch_id, "retained_ids": retained_ids})

    def candidate_html(self, cand_id: str) -> str:
        return self.blobs.get(self.get_candidate(cand_id).html_ref).decode()

    # -- preference pairs --

    def add_pair(self, pair: PreferencePair) -> None:
        with self._lock:
            self.get_description(pair.description_id)
            for ref in (pair.chosen_ref, pair.rejected_ref):
                if not self.blobs.has(ref):
                    raise IntegrityError(
                        f"pair for {pair.description_id}: reference {ref} does not resolve"
                    )
            self._append(
                {
                    "kind": "pair",
                    "description_id": pair.description_id,
                    "chosen_ref": pair.chosen_ref,
                    "rejected_ref": pair.rejected_ref,
                    "provenance": pair.provenance,
                    "annotator_id": pair.annotator_id,
                }
            )

    def pairs(self, provenance: str | None = None) -> list[PreferencePair]:
        out = list(self._pairs)
        if provenance is not None:
            out = [p for p in out if p.provenance == provenance]
        return out

    # -- generic kind-tagged records --

    def append_record(self, kind: str, payload: dict) -> None:
        if kind in {"description", "batch", "candidate", "candidate_update", "batch_retained", "pair"}:
            raise ValidationError(f"kind {kind!r} is reserved for typed records")
        with self._lock:
            self._append({"kind": kind, **payload})

    def records(self, kind: str) -> list[dict]:
        return list(self._generic.get(kind, []))

    def iter_records(self) -> Iterator[dict]:
        for kind in self._generic:
            yield from self._generic[kind]
