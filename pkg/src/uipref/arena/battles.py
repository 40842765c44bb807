"""Battle records and blind match scheduling.

The battle log is line-delimited JSON {model_a, model_b, description_id,
winner, judge_id, timestamp}. Scheduling draws a uniform random unordered
model pair and description; the payload served to judges carries only the
two screenshots (side order randomized) and never the model identities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from ..errors import ConfigurationError, ValidationError


@dataclass(frozen=True)
class Battle:
    model_a: str
    model_b: str
    description_id: str
    winner: str
    judge_id: str = ""
    timestamp: float = 0.0

    def __post_init__(self):
        if self.model_a == self.model_b:
            raise ValidationError("battle models must differ")
        if self.winner not in ("a", "b"):
            raise ValidationError(f"winner must be 'a' or 'b', got {self.winner!r}")

    @property
    def winner_model(self) -> str:
        return self.model_a if self.winner == "a" else self.model_b

    @property
    def loser_model(self) -> str:
        return self.model_b if self.winner == "a" else self.model_a


def write_battles(battles: Iterable[Battle], destination: str | Path) -> int:
    lines = [
        json.dumps(
            {
                "model_a": b.model_a,
                "model_b": b.model_b,
                "description_id": b.description_id,
                "winner": b.winner,
                "judge_id": b.judge_id,
                "timestamp": b.timestamp,
            },
            ensure_ascii=False,
        )
        for b in battles
    ]
    Path(destination).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return len(lines)


def read_battles(source: str | Path) -> list[Battle]:
    out = []
    with open(source, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                rec = json.loads(line)
                out.append(
                    Battle(
                        model_a=rec["model_a"],
                        model_b=rec["model_b"],
                        description_id=rec["description_id"],
                        winner=rec["winner"],
                        judge_id=rec.get("judge_id", ""),
                        timestamp=rec.get("timestamp", 0.0),
                    )
                )
    return out


@dataclass(frozen=True)
class ScheduledMatch:
    """One scheduled comparison; the model assignment stays server-side."""

    left_model: str
    right_model: str
    description_id: str

    def judge_payload(self, description_text: str, left_ref: str, right_ref: str) -> dict:
        """What a judge may see: description and two screenshots, no identities."""
        return {
            "description": description_text,
            "left_ref": left_ref,
            "right_ref": right_ref,
        }

    def to_battle(self, winner_side: str, judge_id: str = "", timestamp: float = 0.0) -> Battle:
        if winner_side not in ("left", "right"):
            raise ValidationError("winner side must be 'left' or 'right'")
        return Battle(
            model_a=self.left_model,
            model_b=self.right_model,
            description_id=self.description_id,
            winner="a" if winner_side == "left" else "b",
            judge_id=judge_id,
            timestamp=timestamp,
        )


def schedule_match(
    models: list[str],
    descriptions: list[str],
    rng: np.random.Generator,
    history: list[Battle] | None = None,
    balance_coverage: bool = False,
) -> ScheduledMatch:
    """Draw a model pair and description; presentation side is randomized.

    Uniform random by default. With balance_coverage the least-battled
    pairing in history is preferred, for small judging budgets.
    """
    if len(models) < 2:
        raise ConfigurationError("scheduling needs at least two models")
    if not descriptions:
        raise ConfigurationError("scheduling needs at least one description")

    models = sorted(models)
    pairings = [(a, b) for i, a in enumerate(models) for b in models[i + 1 :]]
    if balance_coverage and history:
        played: dict[tuple[str, str], int] = {p: 0 for p in pairings}
        for battle in history:
            key = tuple(sorted((battle.model_a, battle.model_b)))
            if key in played:
                played[key] += 1
        fewest = min(played.values())
        pairings = [p for p in pairings if played[p] == fewest]

    pair = pairings[int(rng.integers(len(pairings)))]
    description = descriptions[int(rng.integers(len(descriptions)))]
    left, right = pair if rng.random() < 0.5 else (pair[1], pair[0])
    return ScheduledMatch(left_model=left, right_model=right, description_id=description)
