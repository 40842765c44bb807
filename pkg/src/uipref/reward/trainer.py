"""Margin-loss training of the reward head on preference pairs.

Plain stochastic gradient descent with decoupled weight decay; only the
head's weight matrix updates, the backend embeddings are frozen inputs by
construction. Batches mix designer-labeled pairs with synthetically labeled
pairs drawn from the full candidate distribution, each slot independently
synthetic with probability aug_prob. Synthetic labels are fixed once, from
the head as passed in, before the first step.

Everything is deterministic given (inputs, config, seed).
"""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, NumericError, ValidationError
from .scoring import RewardHead, score


@dataclass(frozen=True)
class TrainerConfig:
    max_steps: int = 100
    batch_size: int = 32
    weight_decay: float = 0.2
    learning_rate: float = 1e-3
    margin: float = 1e-2
    aug_prob: float = 0.5
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.aug_prob <= 1.0:
            raise ValidationError("aug_prob must lie in [0, 1]")
        if self.margin < 0:
            raise ValidationError("margin must be non-negative")
        if self.learning_rate <= 0 or self.batch_size <= 0 or self.max_steps < 0:
            raise ValidationError("rates and sizes must be positive")
        if self.weight_decay < 0:
            raise ValidationError("weight decay must be non-negative")


@dataclass(frozen=True)
class TrainingPair:
    """Embeddings of one labeled pair: chosen and rejected screenshots plus
    the combined target embedding of their description."""

    chosen: np.ndarray
    rejected: np.ndarray
    target: np.ndarray
    synthetic: bool = False


@dataclass(frozen=True)
class UnlabeledPair:
    """Two candidate embeddings awaiting scorer-based orientation."""

    emb_a: np.ndarray
    emb_b: np.ndarray
    target: np.ndarray


@dataclass
class TraceRow:
    step: int
    mean_loss: float
    synthetic_fraction: float


@dataclass
class TrainResult:
    head: RewardHead
    trace: list[TraceRow] = field(default_factory=list)

    def write_trace(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["step", "mean_loss", "synthetic_fraction"])
            for row in self.trace:
                writer.writerow([row.step, f"{row.mean_loss:.8g}", f"{row.synthetic_fraction:.4f}"])


def orient_pairs(pool: list[UnlabeledPair], head: RewardHead) -> list[TrainingPair]:
    """Label each pair by the scorer's ordering (higher score = chosen)."""
    labeled = []
    for pair in pool:
        s_a = score(pair.emb_a, pair.target, head)
        s_b = score(pair.emb_b, pair.target, head)
        chosen, rejected = (pair.emb_a, pair.emb_b) if s_a >= s_b else (pair.emb_b, pair.emb_a)
        labeled.append(TrainingPair(chosen=chosen, rejected=rejected, target=pair.target, synthetic=True))
    return labeled


def sample_training_batch(
    designer_pairs: list[TrainingPair],
    synthetic_pool: list[TrainingPair],
    cfg: TrainerConfig,
    rng: np.random.Generator,
) -> list[TrainingPair]:
    """Each slot is independently synthetic with probability aug_prob."""
    if not designer_pairs:
        raise ConfigurationError("designer pair set is empty")
    if cfg.aug_prob > 0 and not synthetic_pool:
        raise ConfigurationError("aug_prob > 0 requires a synthetic pool")
    batch = []
    for _ in range(cfg.batch_size):
        if cfg.aug_prob > 0 and rng.random() < cfg.aug_prob:
            batch.append(synthetic_pool[int(rng.integers(len(synthetic_pool)))])
        else:
            batch.append(designer_pairs[int(rng.integers(len(designer_pairs)))])
    return batch


def _stack(batch: list[TrainingPair]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    chosen = np.stack([p.chosen for p in batch])
    rejected = np.stack([p.rejected for p in batch])
    target = np.stack([p.target for p in batch])
    return chosen, rejected, target


def batch_loss_and_grad(
    weight: np.ndarray,
    batch: list[TrainingPair],
    logit_scale: float,
    margin: float,
) -> tuple[float, np.ndarray]:
    """Mean hinge loss over the batch and its gradient w.r.t. the weight.

    For an active pair the subgradient of the score w.r.t. W through the
    normalized map u = Wx is  tau/|u| * (t_hat - u_hat (u_hat . t_hat)) x^T.
    """
    chosen, rejected, target = _stack(batch)
    n = len(batch)
    t_hat = target / np.linalg.norm(target, axis=1, keepdims=True)

    def forward(x):
        u = x @ weight.T
        norms = np.linalg.norm(u, axis=1, keepdims=True)
        u_hat = u / norms
        scores = logit_scale * np.sum(u_hat * t_hat, axis=1)
        return u_hat, norms[:, 0], scores

    u_hat_c, norm_c, s_c = forward(chosen)
    u_hat_r, norm_r, s_r = forward(rejected)

    losses = np.maximum(0.0, s_r - s_c + margin)
    active = losses > 0.0

    # coefficient rows: d score / d u, already divided by |u|
    cos_c = np.sum(u_hat_c * t_hat, axis=1, keepdims=True)
    cos_r = np.sum(u_hat_r * t_hat, axis=1, keepdims=True)
    coef_c = (t_hat - u_hat_c * cos_c) / norm_c[:, None]
    coef_r = (t_hat - u_hat_r * cos_r) / norm_r[:, None]

    scale = (logit_scale / n) * active.astype(float)
    grad = (coef_r * scale[:, None]).T @ rejected - (coef_c * scale[:, None]).T @ chosen
    return float(losses.mean()), grad


def train(
    head: RewardHead,
    designer_pairs: list[TrainingPair],
    synthetic_pool: list[UnlabeledPair] | list[TrainingPair],
    cfg: TrainerConfig,
) -> TrainResult:
    """Exactly cfg.max_steps SGD steps; returns the trained head and loss trace."""
    rng = np.random.default_rng(cfg.rng_seed)
    if synthetic_pool and isinstance(synthetic_pool[0], UnlabeledPair):
        labeled_pool = orient_pairs(synthetic_pool, head)  # type: ignore[arg-type]
    else:
        labeled_pool = list(synthetic_pool)  # type: ignore[arg-type]

    weight = head.weight.copy()
    trace: list[TraceRow] = []
    for step in range(cfg.max_steps):
        batch = sample_training_batch(designer_pairs, labeled_pool, cfg, rng)
        loss, grad = batch_loss_and_grad(weight, batch, head.logit_scale, cfg.margin)
        if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
            raise NumericError(f"non-finite loss at step {step}")
        weight = weight - cfg.learning_rate * grad - cfg.learning_rate * cfg.weight_decay * weight
        trace.append(
            TraceRow(
                step=step,
                mean_loss=loss,
                synthetic_fraction=sum(p.synthetic for p in batch) / len(batch),
            )
        )
    if cfg.max_steps == 0:
        return TrainResult(head=head.copy(), trace=trace)
    trained = RewardHead(
        weight=weight,
        logit_scale=head.logit_scale,
        trained_steps=head.trained_steps + cfg.max_steps,
        config_echo=asdict(cfg),
    )
    return TrainResult(head=trained, trace=trace)


def pairwise_accuracy(head: RewardHead, pairs: list[TrainingPair]) -> float:
    """Fraction of pairs whose chosen sample outscores its rejected sample."""
    if not pairs:
        raise ValidationError("no pairs to evaluate")
    wins = sum(
        score(p.chosen, p.target, head) > score(p.rejected, p.target, head) for p in pairs
    )
    return wins / len(pairs)
