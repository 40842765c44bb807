"""Quality scoring: combined prompt embeddings, linear head, margin loss.

A description is represented by three prompt embeddings (well-designed,
poorly-designed, empty-screen variants) combined into one target vector

    v* = v_pos - 0.5 * (0.9 * v_neg + 0.1 * v_empty)

which is deliberately NOT re-normalized; normalization happens inside the
score, for both operands. The score of a screenshot embedding e against v*
through head W is

    s = tau * <normalize(W e), normalize(v*)>

With W = identity this reproduces the raw backend scorer, so an untrained
head is already usable for filtering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, NumericError, ValidationError
from ..gateway import templates

DEFAULT_LOGIT_SCALE = 100.0


def build_prompts(description: str) -> tuple[str, str, str]:
    """(positive, negative, empty) scoring prompts for one description."""
    if not description.strip():
        raise ValidationError("description must be non-empty")
    return (
        templates.positive_prompt(description),
        templates.negative_prompt(description),
        templates.empty_prompt(),
    )


@dataclass(frozen=True)
class PromptEmbeddingSet:
    """Embeddings of the three scoring prompts, unit-normalized at ingestion."""

    v_pos: np.ndarray
    v_neg: np.ndarray
    v_empty: np.ndarray

    def __post_init__(self):
        dims = {self.v_pos.shape, self.v_neg.shape, self.v_empty.shape}
        if len(dims) != 1 or self.v_pos.ndim != 1:
            raise ConfigurationError(f"prompt embeddings disagree on shape: {dims}")
        for name, v in (("v_pos", self.v_pos), ("v_neg", self.v_neg), ("v_empty", self.v_empty)):
            norm = np.linalg.norm(v)
            if not np.isfinite(norm) or abs(norm - 1.0) > 1e-6:
                raise ValidationError(f"{name} must be unit-normalized (norm {norm})")

    @classmethod
    def from_raw(cls, v_pos, v_neg, v_empty) -> "PromptEmbeddingSet":
        def unit(v):
            v = np.asarray(v, dtype=float)
            return v / np.linalg.norm(v)

        return cls(v_pos=unit(v_pos), v_neg=unit(v_neg), v_empty=unit(v_empty))


def combine(prompts: PromptEmbeddingSet) -> np.ndarray:
    """The combined target embedding; exact arithmetic, no re-normalization."""
    return prompts.v_pos - 0.5 * (0.9 * prompts.v_neg + 0.1 * prompts.v_empty)


@dataclass
class RewardHead:
    """Trainable square linear map on image embeddings, with a logit scale.

    config_echo preserves the trainer configuration that produced the head,
    so a serialized head is self-describing.
    """

    weight: np.ndarray
    logit_scale: float = DEFAULT_LOGIT_SCALE
    trained_steps: int = 0
    config_echo: dict | None = None

    def __post_init__(self):
        self.weight = np.asarray(self.weight, dtype=float)
        if self.weight.ndim != 2 or self.weight.shape[0] != self.weight.shape[1]:
            raise ConfigurationError(f"head weight must be square, got {self.weight.shape}")
        if not np.all(np.isfinite(self.weight)):
            raise NumericError("head weight contains non-finite values")
        if self.logit_scale <= 0:
            raise ConfigurationError("logit scale must be positive")

    @property
    def dim(self) -> int:
        return self.weight.shape[0]

    @classmethod
    def identity(cls, dim: int, logit_scale: float = DEFAULT_LOGIT_SCALE) -> "RewardHead":
        return cls(weight=np.eye(dim), logit_scale=logit_scale)

    def copy(self) -> "RewardHead":
        return RewardHead(
            weight=self.weight.copy(),
            logit_scale=self.logit_scale,
            trained_steps=self.trained_steps,
            config_echo=dict(self.config_echo) if self.config_echo else None,
        )

    def save(self, path: str | Path) -> None:
        payload = {
            "dimension": self.dim,
            "logit_scale": self.logit_scale,
            "trained_steps": self.trained_steps,
            "config": self.config_echo,
            "weights_row_major": self.weight.reshape(-1).tolist(),
        }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RewardHead":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        dim = payload["dimension"]
        return cls(
            weight=np.asarray(payload["weights_row_major"], dtype=float).reshape(dim, dim),
            logit_scale=payload["logit_scale"],
            trained_steps=payload.get("trained_steps", 0),
            config_echo=payload.get("config"),
        )


def score(image_emb: np.ndarray, target_emb: np.ndarray, head: RewardHead) -> float:
    """Scaled cosine between the head-mapped image embedding and the target."""
    image_emb = np.asarray(image_emb, dtype=float)
    target_emb = np.asarray(target_emb, dtype=float)
    if image_emb.shape != (head.dim,) or target_emb.shape != (head.dim,):
        raise ConfigurationError(
            f"embedding dims {image_emb.shape}/{target_emb.shape} do not match head dim {head.dim}"
        )
    if not (np.all(np.isfinite(image_emb)) and np.all(np.isfinite(target_emb))):
        raise NumericError("non-finite embedding input")
    mapped = head.weight @ image_emb
    denom = np.linalg.norm(mapped) * np.linalg.norm(target_emb)
    if denom == 0:
        raise NumericError("zero-norm operand in score")
    return float(head.logit_scale * (mapped @ target_emb) / denom)


def margin_loss(s_plus: float, s_minus: float, margin: float, printed_form: bool = False) -> float:
    """Hinge loss on a score pair: zero once s+ clears s- by the margin.

    printed_form flips the roles of the two scores for replication
    experiments against sources that state the objective with the opposite
    sign convention; it rewards the non-preferred sample and is not used in
    training here.
    """
    if margin < 0:
        raise ValidationError("margin must be non-negative")
    if printed_form:
        return max(0.0, s_plus - s_minus + margin)
    return max(0.0, s_minus - s_plus + margin)
