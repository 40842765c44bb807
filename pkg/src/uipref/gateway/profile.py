"""Backend configuration shared by all gateway clients."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError

DEFAULT_VIEWPORT = (390, 844)
DEFAULT_EMBEDDING_DIM = 512
DEFAULT_MAX_OUTPUT_TOKENS = 4096


@dataclass(frozen=True)
class BackendProfile:
    """Endpoints and budgets for the external capabilities.

    With no endpoints configured, the gateway runs entirely on the built-in
    deterministic stubs, which is what the test and acceptance suites use.
    """

    renderer_endpoint: str = ""
    llm_endpoint: str = ""
    llm_model: str = "stub-coder"
    image_endpoint: str = ""
    sketch_converter_cmd: str = ""
    embedding_endpoint: str = ""
    timeout_s: float = 60.0
    retry_budget: int = 2
    max_inflight: int = 8
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    embedding_dim: int = DEFAULT_EMBEDDING_DIM
    viewport: tuple[int, int] = DEFAULT_VIEWPORT
    description_temperature: float = 1.0
    candidate_temperature: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise ValidationError("timeout must be positive")
        if self.retry_budget < 0:
            raise ValidationError("retry budget must be non-negative")
        if self.max_inflight < 1:
            raise ValidationError("max_inflight must be at least 1")
        if self.viewport[0] <= 0 or self.viewport[1] <= 0:
            raise ValidationError("viewport dimensions must be positive")
        if self.embedding_dim < 1:
            raise ValidationError("embedding dimension must be at least 1")
