"""Line-delimited import/export of preference datasets.

One self-contained JSON record per line, UTF-8. Besides the triple itself the
records carry description_id and annotator_id so that import(export(D)) == D.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import IntegrityError, NotFoundError
from .model import PreferenceDataset, PreferencePair
from .store import CorpusStore


def export_preferences(dataset: PreferenceDataset, store: CorpusStore, destination: str | Path) -> int:
    """Write one record per pair; returns the record count.

    Raises IntegrityError naming the offending pair if any reference fails
    to resolve against the store.
    """
    dataset.validate()
    lines = []
    for i, pair in enumerate(dataset.pairs):
        try:
            description = store.get_description(pair.description_id)
        except NotFoundError:
            raise IntegrityError(
                f"pair {i} ({pair.provenance}): description {pair.description_id} does not resolve"
            ) from None
        for ref in (pair.chosen_ref, pair.rejected_ref):
            if not store.blobs.has(ref):
                raise IntegrityError(f"pair {i} ({pair.provenance}): reference {ref} does not resolve")
        lines.append(
            json.dumps(
                {
                    "description": description.text,
                    "description_id": pair.description_id,
                    "chosen_ref": pair.chosen_ref,
                    "rejected_ref": pair.rejected_ref,
                    "provenance": pair.provenance,
                    "annotator_id": pair.annotator_id,
                },
                ensure_ascii=False,
            )
        )
    Path(destination).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return len(lines)


def import_preferences(source: str | Path) -> PreferenceDataset:
    pairs = []
    with open(source, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            pairs.append(
                PreferencePair(
                    description_id=rec["description_id"],
                    chosen_ref=rec["chosen_ref"],
                    rejected_ref=rec["rejected_ref"],
                    provenance=rec["provenance"],
                    annotator_id=rec.get("annotator_id", ""),
                )
            )
    return PreferenceDataset.from_pairs(pairs)
