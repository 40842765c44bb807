from .dataset import build_synthetic_pool, pairs_to_training, target_embedding
from .filtering import DEFAULT_TOP_K, topk_filter
from .scoring import (
    DEFAULT_LOGIT_SCALE,
    PromptEmbeddingSet,
    RewardHead,
    build_prompts,
    combine,
    margin_loss,
    score,
)
from .trainer import (
    TraceRow,
    TrainerConfig,
    TrainingPair,
    TrainResult,
    UnlabeledPair,
    batch_loss_and_grad,
    orient_pairs,
    pairwise_accuracy,
    sample_training_batch,
    train,
)

__all__ = [
    "DEFAULT_LOGIT_SCALE",
    "DEFAULT_TOP_K",
    "PromptEmbeddingSet",
    "RewardHead",
    "TraceRow",
    "TrainerConfig",
    "TrainingPair",
    "TrainResult",
    "UnlabeledPair",
    "batch_loss_and_grad",
    "build_prompts",
    "build_synthetic_pool",
    "combine",
    "margin_loss",
    "orient_pairs",
    "pairs_to_training",
    "pairwise_accuracy",
    "sample_training_batch",
    "score",
    "target_embedding",
    "topk_filter",
    "train",
]
