from .client import (
    GatewayClient,
    PlaceholderImage,
    RenderResult,
    call_with_retries,
    extract_markup,
)
from .http_backends import build_client
from .profile import (
    DEFAULT_EMBEDDING_DIM,
    DEFAULT_MAX_OUTPUT_TOKENS,
    DEFAULT_VIEWPORT,
    BackendProfile,
)
from .stubs import StubEmbedding, StubImageSynth, StubLlm, StubRenderer, StubSketchConverter
from .templates import (
    comment_edit_prompt,
    description_prompt,
    empty_prompt,
    generation_prompt,
    negative_prompt,
    positive_prompt,
    region_edit_prompt,
    template_text,
)

__all__ = [
    "BackendProfile",
    "DEFAULT_EMBEDDING_DIM",
    "DEFAULT_MAX_OUTPUT_TOKENS",
    "DEFAULT_VIEWPORT",
    "GatewayClient",
    "PlaceholderImage",
    "RenderResult",
    "StubEmbedding",
    "StubImageSynth",
    "StubLlm",
    "StubRenderer",
    "StubSketchConverter",
    "build_client",
    "call_with_retries",
    "comment_edit_prompt",
    "description_prompt",
    "empty_prompt",
    "extract_markup",
    "generation_prompt",
    "negative_prompt",
    "positive_prompt",
    "region_edit_prompt",
    "template_text",
]
