"""Descriptive statistics over a set of annotation records."""

from __future__ import annotations

from dataclasses import dataclass

from .records import AnnotationRecord, CommentSet, SketchSet


@dataclass(frozen=True)
class InterfaceStats:
    count: int
    annotations_per_minute: float | None
    minutes_per_annotation: float | None
    mean_text_length: float | None
    mean_items_per_ui: float | None


@dataclass(frozen=True)
class StudyReport:
    total: int
    per_interface: dict[str, InterfaceStats]


def study_stats(records: list[AnnotationRecord]) -> StudyReport:
    """Counts, rates, and text/item means, partitioned by interface.

    Rates come from the recorded elapsed times; interfaces without text or
    item lists report None for those fields.
    """
    groups: dict[str, list[AnnotationRecord]] = {}
    for record in records:
        groups.setdefault(record.interface, []).append(record)

    per_interface: dict[str, InterfaceStats] = {}
    for interface, group in groups.items():
        count = len(group)
        elapsed_min = sum(r.elapsed_s for r in group) / 60.0

        texts: list[str] = []
        item_counts: list[int] = []
        for record in group:
            payload = record.payload
            if isinstance(payload, CommentSet):
                texts.extend(payload.comments)
                item_counts.append(len(payload.comments))
            elif isinstance(payload, SketchSet):
                texts.extend(comment for _, comment in payload.items)
                item_counts.append(len(payload.items))

        per_interface[interface] = InterfaceStats(
            count=count,
            annotations_per_minute=count / elapsed_min if elapsed_min > 0 else None,
            minutes_per_annotation=elapsed_min / count if elapsed_min > 0 else None,
            mean_text_length=(sum(len(t) for t in texts) / len(texts)) if texts else None,
            mean_items_per_ui=(sum(item_counts) / len(item_counts)) if item_counts else None,
        )

    return StudyReport(total=len(records), per_interface=per_interface)
