"""Elo ratings with bootstrap confidence intervals and win-rate matrices.

The rating is the standard online Elo update run in battle order:

    E_a = 1 / (1 + base^((r_b - r_a) / scale));   r_a += k * (S_a - E_a)

with every model starting at the initial rating. Because the online update
is order-sensitive, the bootstrap resamples battles with replacement AND
shuffles their order each round; the reported median absorbs the order
noise. Per-round generators are derived from the master seed, so reports
are byte-reproducible.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..errors import ValidationError
from .battles import Battle


@dataclass(frozen=True)
class RatingConfig:
    initial_rating: float = 1000.0
    scale: float = 400.0
    base: float = 10.0
    k_factor: float = 4.0
    bootstrap_rounds: int = 1000
    rng_seed: int = 0

    def __post_init__(self):
        if min(self.initial_rating, self.scale, self.base, self.k_factor) <= 0:
            raise ValidationError("rating parameters must be positive")
        if self.bootstrap_rounds < 1:
            raise ValidationError("bootstrap rounds must be at least 1")


@dataclass(frozen=True)
class ModelRating:
    median: float
    ci_low: float
    ci_high: float


@dataclass
class RatingReport:
    ratings: dict[str, ModelRating]
    win_rates: dict[tuple[str, str], float] = field(default_factory=dict)
    average_win_rate: dict[str, float] = field(default_factory=dict)

    def write_ratings_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["model", "median", "ci_low", "ci_high"])
            for model in sorted(self.ratings, key=lambda m: -self.ratings[m].median):
                r = self.ratings[model]
                writer.writerow([model, f"{r.median:.2f}", f"{r.ci_low:.2f}", f"{r.ci_high:.2f}"])

    def write_matrix_csv(self, path: str | Path) -> None:
        models = sorted({m for pair in self.win_rates for m in pair} | set(self.average_win_rate))
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["model"] + models + ["average"])
            for row_model in models:
                row: list[str] = [row_model]
                for col_model in models:
                    value = self.win_rates.get((row_model, col_model))
                    row.append("" if value is None else f"{value:.4f}")
                avg = self.average_win_rate.get(row_model)
                row.append("" if avg is None else f"{avg:.4f}")
                writer.writerow(row)


def elo_sequence(
    battles: Sequence[Battle],
    cfg: RatingConfig | None = None,
    models: Iterable[str] | None = None,
) -> dict[str, float]:
    """Final ratings after the online update over battles in order.

    ``models`` seeds the rating table (all at the initial rating) so models
    without battles still appear.
    """
    cfg = cfg or RatingConfig()
    ratings: dict[str, float] = {m: cfg.initial_rating for m in models or ()}
    for battle in battles:
        for model in (battle.model_a, battle.model_b):
            ratings.setdefault(model, cfg.initial_rating)
        r_a = ratings[battle.model_a]
        r_b = ratings[battle.model_b]
        expected_a = 1.0 / (1.0 + cfg.base ** ((r_b - r_a) / cfg.scale))
        expected_b = 1.0 / (1.0 + cfg.base ** ((r_a - r_b) / cfg.scale))
        s_a = 1.0 if battle.winner == "a" else 0.0
        ratings[battle.model_a] = r_a + cfg.k_factor * (s_a - expected_a)
        ratings[battle.model_b] = r_b + cfg.k_factor * ((1.0 - s_a) - expected_b)
    return ratings


def bootstrap_ratings(
    battles: Sequence[Battle],
    cfg: RatingConfig | None = None,
) -> dict[str, ModelRating]:
    """Per-model median rating and 2.5/97.5 percentile interval.

    Each round resamples len(battles) battles with replacement, shuffles the
    order, and reruns the online update.
    """
    cfg = cfg or RatingConfig()
    if not battles:
        raise ValidationError("bootstrap needs at least one battle")
    models = sorted({m for b in battles for m in (b.model_a, b.model_b)})
    samples = np.empty((cfg.bootstrap_rounds, len(models)))
    seeds = np.random.SeedSequence(cfg.rng_seed).spawn(cfg.bootstrap_rounds)
    for round_index in range(cfg.bootstrap_rounds):
        rng = np.random.default_rng(seeds[round_index])
        picks = rng.integers(len(battles), size=len(battles))
        rng.shuffle(picks)
        resampled = [battles[int(i)] for i in picks]
        ratings = elo_sequence(resampled, cfg, models=models)
        samples[round_index] = [ratings[m] for m in models]

    out = {}
    for j, model in enumerate(models):
        column = samples[:, j]
        out[model] = ModelRating(
            median=float(np.median(column)),
            ci_low=float(np.percentile(column, 2.5)),
            ci_high=float(np.percentile(column, 97.5)),
        )
    return out


def win_rate_matrix(
    battles: Sequence[Battle],
) -> tuple[dict[tuple[str, str], float], dict[str, float]]:
    """w(i, j) over pairings with at least one battle, plus per-model averages.

    Absent pairings are absent cells, excluded from the averages.
    """
    wins: dict[tuple[str, str], int] = {}
    totals: dict[tuple[str, str], int] = {}
    models: set[str] = set()
    for battle in battles:
        models.update((battle.model_a, battle.model_b))
        for i, j in ((battle.model_a, battle.model_b), (battle.model_b, battle.model_a)):
            totals[(i, j)] = totals.get((i, j), 0) + 1
            wins.setdefault((i, j), 0)
        wins[(battle.winner_model, battle.loser_model)] += 1

    rates = {pair: wins[pair] / totals[pair] for pair in totals}
    averages: dict[str, float] = {}
    for model in sorted(models):
        cells = [rates[(model, other)] for other in sorted(models) if (model, other) in rates]
        if cells:
            averages[model] = sum(cells) / len(cells)
    return rates, averages


def rating_report(battles: Sequence[Battle], cfg: RatingConfig | None = None) -> RatingReport:
    ratings = bootstrap_ratings(battles, cfg)
    rates, averages = win_rate_matrix(battles)
    return RatingReport(ratings=ratings, win_rates=rates, average_win_rate=averages)
