"""Canonical records for the four feedback interactions.

Annotations arrive as line-delimited JSON, one record per line, tagged by
interface kind. Region coordinates are screenshot pixels with the origin at
top left; they are converted to CSS pixels through the render scale factor
before any IoU matching.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from ..errors import ValidationError
from ..htmlkit.geometry import Region

INTERFACES = ("ranking", "commenting", "sketching", "revising")

# Interface kind -> the provenance its pairs carry.
PROVENANCE_FOR = {
    "ranking": "ranking",
    "commenting": "commenting",
    "sketching": "sketching",
    "revising": "revising",
}


@dataclass(frozen=True)
class RankingJudgment:
    description_id: str
    left_candidate: str
    right_candidate: str
    winner: str
    annotator_id: str
    elapsed_s: float = 0.0

    def __post_init__(self):
        if self.left_candidate == self.right_candidate:
            raise ValidationError("ranking candidates must differ")
        if self.winner not in ("left", "right"):
            raise ValidationError(f"winner must be left or right, got {self.winner!r}")

    @property
    def winner_candidate(self) -> str:
        return self.left_candidate if self.winner == "left" else self.right_candidate

    @property
    def loser_candidate(self) -> str:
        return self.right_candidate if self.winner == "left" else self.left_candidate


@dataclass(frozen=True)
class CommentSet:
    candidate_id: str
    comments: tuple[str, ...]
    annotator_id: str

    def __post_init__(self):
        if not self.comments:
            raise ValidationError("comment list must be non-empty")
        if any(not c.strip() for c in self.comments):
            raise ValidationError("comments must be non-empty")


@dataclass(frozen=True)
class SketchSet:
    candidate_id: str
    items: tuple[tuple[Region, str], ...]
    annotator_id: str

    def __post_init__(self):
        if not self.items:
            raise ValidationError("sketch items must be non-empty")
        if any(not comment.strip() for _, comment in self.items):
            raise ValidationError("sketch item comments must be non-empty")


@dataclass(frozen=True)
class RevisionRecord:
    candidate_id: str
    original_sketch_ref: str
    revised_sketch_ref: str
    annotator_id: str

    def __post_init__(self):
        if self.original_sketch_ref == self.revised_sketch_ref:
            raise ValidationError("revised document must differ from the original")


Payload = RankingJudgment | CommentSet | SketchSet | RevisionRecord


@dataclass(frozen=True)
class AnnotationRecord:
    """Envelope for one annotation: one UI plus everything said about it."""

    record_id: str
    interface: str
    payload: Payload
    elapsed_s: float = 0.0

    def __post_init__(self):
        if self.interface not in INTERFACES:
            raise ValidationError(f"unknown interface {self.interface!r}")
        expected = {
            "ranking": RankingJudgment,
            "commenting": CommentSet,
            "sketching": SketchSet,
            "revising": RevisionRecord,
        }[self.interface]
        if not isinstance(self.payload, expected):
            raise ValidationError(
                f"interface {self.interface} expects {expected.__name__} payload"
            )

    @property
    def annotator_id(self) -> str:
        return self.payload.annotator_id


def _region_to_dict(region: Region) -> dict:
    if region.kind == "box":
        return {"kind": "box", "bbox": list(region.bbox)}  # type: ignore[arg-type]
    return {"kind": "point", "point": list(region.point)}  # type: ignore[arg-type]


def _region_from_dict(data: dict) -> Region:
    if data["kind"] == "box":
        return Region.box(*data["bbox"])
    return Region.at_point(*data["point"])


def record_to_dict(record: AnnotationRecord) -> dict:
    p = record.payload
    base = {"record_id": record.record_id, "interface": record.interface, "elapsed_s": record.elapsed_s}
    if isinstance(p, RankingJudgment):
        base["payload"] = {
            "description_id": p.description_id,
            "left_candidate": p.left_candidate,
            "right_candidate": p.right_candidate,
            "winner": p.winner,
            "annotator_id": p.annotator_id,
            "elapsed_s": p.elapsed_s,
        }
    elif isinstance(p, CommentSet):
        base["payload"] = {
            "candidate_id": p.candidate_id,
            "comments": list(p.comments),
            "annotator_id": p.annotator_id,
        }
    elif isinstance(p, SketchSet):
        base["payload"] = {
            "candidate_id": p.candidate_id,
            "items": [{"region": _region_to_dict(r), "comment": c} for r, c in p.items],
            "annotator_id": p.annotator_id,
        }
    else:
        base["payload"] = {
            "candidate_id": p.candidate_id,
            "original_sketch_ref": p.original_sketch_ref,
            "revised_sketch_ref": p.revised_sketch_ref,
            "annotator_id": p.annotator_id,
        }
    return base


def record_from_dict(data: dict, scale_factor: float = 1.0) -> AnnotationRecord:
    """Parse one ingestion record; sketch regions are rescaled to CSS pixels."""
    interface = data["interface"]
    p = data["payload"]
    payload: Payload
    if interface == "ranking":
        payload = RankingJudgment(
            description_id=p["description_id"],
            left_candidate=p["left_candidate"],
            right_candidate=p["right_candidate"],
            winner=p["winner"],
            annotator_id=p["annotator_id"],
            elapsed_s=p.get("elapsed_s", data.get("elapsed_s", 0.0)),
        )
    elif interface == "commenting":
        payload = CommentSet(
            candidate_id=p["candidate_id"],
            comments=tuple(p["comments"]),
            annotator_id=p["annotator_id"],
        )
    elif interface == "sketching":
        payload = SketchSet(
            candidate_id=p["candidate_id"],
            items=tuple(
                (_region_from_dict(item["region"]).scaled(scale_factor), item["comment"])
                for item in p["items"]
            ),
            annotator_id=p["annotator_id"],
        )
    elif interface == "revising":
        payload = RevisionRecord(
            candidate_id=p["candidate_id"],
            original_sketch_ref=p["original_sketch_ref"],
            revised_sketch_ref=p["revised_sketch_ref"],
            annotator_id=p["annotator_id"],
        )
    else:
        raise ValidationError(f"unknown interface {interface!r}")
    return AnnotationRecord(
        record_id=data["record_id"],
        interface=interface,
        payload=payload,
        elapsed_s=data.get("elapsed_s", 0.0),
    )


def write_records(records: Iterable[AnnotationRecord], destination) -> int:
    lines = [json.dumps(record_to_dict(r), ensure_ascii=False) for r in records]
    with open(destination, "w", encoding="utf-8") as f:
        f.write("".join(line + "\n" for line in lines))
    return len(lines)


def read_records(source, scale_factor: float = 1.0) -> list[AnnotationRecord]:
    out = []
    with open(source, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(record_from_dict(json.loads(line), scale_factor))
    return out
