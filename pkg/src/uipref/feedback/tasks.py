"""Task scheduling for annotators.

Tasks sample uniformly from the retained (top-k filtered) candidate pool.
A (candidate, annotator, interface) triple is never served twice; ranking
tasks consume two candidates of one description at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus.store import CorpusStore
from ..errors import PoolExhaustedError
from .records import INTERFACES


@dataclass(frozen=True)
class Task:
    interface: str
    description_id: str
    description_text: str
    candidate_ids: tuple[str, ...]
    screenshot_refs: tuple[str, ...]
    sketch_refs: tuple[str, ...] = ()


class TaskScheduler:
    def __init__(self, store: CorpusStore, rng: np.random.Generator | None = None):
        self.store = store
        self.rng = rng or np.random.default_rng(0)
        self._served: set[tuple[str, str, str]] = set()
        for rec in store.records("task_served"):
            self._served.add((rec["candidate_id"], rec["annotator_id"], rec["interface"]))

    def _eligible(self, interface: str, annotator_id: str) -> list:
        pool = []
        for batch in self.store.batches():
            for cand_id in batch.retained_ids:
                cand = self.store.get_candidate(cand_id)
                if cand.screenshot_ref is None:
                    continue
                if interface == "revising" and cand.sketch_ref is None:
                    continue
                if (cand_id, annotator_id, interface) in self._served:
                    continue
                pool.append(cand)
        return pool

    def _mark(self, candidate_id: str, annotator_id: str, interface: str) -> None:
        self._served.add((candidate_id, annotator_id, interface))
        self.store.append_record(
            "task_served",
            {"candidate_id": candidate_id, "annotator_id": annotator_id, "interface": interface},
        )

    def next_task(self, interface: str, annotator_id: str) -> Task:
        if interface not in INTERFACES:
            raise PoolExhaustedError(f"unknown interface {interface!r}")
        pool = self._eligible(interface, annotator_id)
        if interface == "ranking":
            by_description: dict[str, list] = {}
            for cand in pool:
                by_description.setdefault(cand.description_id, []).append(cand)
            eligible_descs = sorted(d for d, cands in by_description.items() if len(cands) >= 2)
            if not eligible_descs:
                raise PoolExhaustedError(f"no ranking task left for {annotator_id}")
            desc_id = eligible_descs[int(self.rng.integers(len(eligible_descs)))]
            cands = sorted(by_description[desc_id], key=lambda c: c.id)
            picks = self.rng.choice(len(cands), size=2, replace=False)
            chosen = [cands[int(i)] for i in picks]
            for cand in chosen:
                self._mark(cand.id, annotator_id, interface)
            description = self.store.get_description(desc_id)
            return Task(
                interface=interface,
                description_id=desc_id,
                description_text=description.text,
                candidate_ids=tuple(c.id for c in chosen),
                screenshot_refs=tuple(c.screenshot_ref for c in chosen),
            )

        if not pool:
            raise PoolExhaustedError(f"no {interface} task left for {annotator_id}")
        pool = sorted(pool, key=lambda c: c.id)
        cand = pool[int(self.rng.integers(len(pool)))]
        self._mark(cand.id, annotator_id, interface)
        description = self.store.get_description(cand.description_id)
        return Task(
            interface=interface,
            description_id=cand.description_id,
            description_text=description.text,
            candidate_ids=(cand.id,),
            screenshot_refs=(cand.screenshot_ref,),
            sketch_refs=(cand.sketch_ref,) if cand.sketch_ref else (),
        )
