"""The gateway facade: every external capability behind one client object.

All outbound prompts come from the frozen template functions. Calls are
retried against transient failures up to the profile's retry budget, and
in-flight requests per gateway are bounded by a semaphore. With default
construction everything runs on the deterministic stubs.
"""

from __future__ import annotations

import io
import logging
import re
import threading
from dataclasses import dataclass
from typing import Callable, Protocol, TypeVar

import numpy as np
from PIL import Image

from ..corpus.model import dedup_merge
from ..errors import (
    BackendError,
    MalformedEditError,
    PartialResultError,
    RenderError,
    TransientError,
    ValidationError,
)
from ..htmlkit.dom import parse_document
from ..htmlkit.geometry import GeometryMap, parse_geometry
from ..htmlkit.staging import StagingManifest
from . import templates
from .profile import BackendProfile
from .stubs import StubEmbedding, StubImageSynth, StubLlm, StubRenderer, StubSketchConverter

logger = logging.getLogger(__name__)

T = TypeVar("T")

# Consecutive zero-new-description calls tolerated before giving up.
STALL_LIMIT = 50


class LlmBackend(Protocol):
    def complete(self, prompt: str, temperature: float = ..., max_tokens: int = ...) -> str: ...


class RendererBackend(Protocol):
    def render(self, staging_root, entry: str, viewport: tuple[int, int]) -> tuple[bytes, str]: ...


class ImageBackend(Protocol):
    def synthesize(self, prompt: str) -> bytes: ...


class SketchBackend(Protocol):
    def convert(self, html: str, geometry: GeometryMap) -> bytes: ...
    def preview(self, document: bytes) -> bytes: ...


class EmbeddingBackend(Protocol):
    def embed(self, kind: str, payload: bytes) -> np.ndarray: ...


@dataclass(frozen=True)
class RenderResult:
    screenshot: bytes
    geometry: GeometryMap
    truncated: bool


@dataclass(frozen=True)
class PlaceholderImage:
    data: bytes
    fallback: bool = False


def call_with_retries(fn: Callable[[], T], budget: int) -> T:
    """Run fn, retrying TransientError up to ``budget`` extra attempts."""
    failures = 0
    while True:
        try:
            return fn()
        except TransientError:
            failures += 1
            if failures > budget:
                raise
            logger.debug("transient backend failure %d/%d, retrying", failures, budget)


def extract_markup(response: str) -> str:
    """The markup payload of an LLM response: first fenced block, else all of it."""
    m = re.search(r"```[a-zA-Z]*\n(.*?)\n?```", response, re.DOTALL)
    return m.group(1) if m else response


def _require_complete_document(markup: str) -> str:
    doc = parse_document(markup)
    if not doc.roots:
        raise MalformedEditError("edit response contains no elements")
    lowered = markup.lower()
    for tag in ("html", "body"):
        if f"<{tag}" in lowered and f"</{tag}>" not in lowered:
            raise MalformedEditError(f"edit response has an unterminated <{tag}> document")
    return markup


class GatewayClient:
    def __init__(
        self,
        profile: BackendProfile | None = None,
        llm: LlmBackend | None = None,
        renderer: RendererBackend | None = None,
        image_synth: ImageBackend | None = None,
        sketch: SketchBackend | None = None,
        embedder: EmbeddingBackend | None = None,
    ):
        self.profile = profile or BackendProfile()
        seed = self.profile.seed
        self.llm = llm or StubLlm(seed=seed)
        self.renderer = renderer or StubRenderer(seed=seed)
        self.image_synth = image_synth or StubImageSynth(seed=seed)
        self.sketch = sketch or StubSketchConverter()
        self.embedder = embedder or StubEmbedding(dim=self.profile.embedding_dim, seed=seed)
        self._inflight = threading.BoundedSemaphore(self.profile.max_inflight)
        self.last_candidate_failures = 0

    def _call(self, fn: Callable[[], T]) -> T:
        with self._inflight:
            return call_with_retries(fn, self.profile.retry_budget)

    # -- text generation --

    def generate_descriptions(
        self,
        target_n: int,
        seed_examples: list[str],
        temperature: float | None = None,
        rng_seed: int | None = None,
    ) -> list[str]:
        """Prompt for batches of 10 descriptions and dedup-merge until target_n.

        Production corpora run this at targets around 100k; that is purely a
        configuration choice, the loop is the same at any scale.
        """
        if target_n <= 0:
            raise ValidationError("target_n must be positive")
        if not seed_examples:
            raise ValidationError("seed_examples must be non-empty")
        if rng_seed is not None and hasattr(self.llm, "reseed"):
            self.llm.reseed(rng_seed)
        temperature = self.profile.description_temperature if temperature is None else temperature
        prompt = templates.description_prompt(seed_examples)

        collected: list[str] = []
        stalled = 0
        while len(collected) < target_n:
            try:
                response = self._call(
                    lambda: self.llm.complete(
                        prompt, temperature=temperature, max_tokens=self.profile.max_output_tokens
                    )
                )
            except BackendError as exc:
                raise PartialResultError(
                    f"description backend failed with {len(collected)} collected", collected
                ) from exc
            batch = [line.strip() for line in response.splitlines() if line.strip()]
            result = dedup_merge(collected, batch)
            collected = result.merged
            stalled = stalled + 1 if result.accepted == 0 else 0
            if stalled >= STALL_LIMIT:
                raise PartialResultError(
                    f"description source stalled at {len(collected)} distinct texts", collected
                )
        return collected[:target_n]

    def generate_candidates(
        self,
        description: str,
        n: int,
        temperature: float | None = None,
        rng_seed: int | None = None,
    ) -> list[str]:
        """n independent completions of the generation prompt, markup extracted.

        Per-candidate failures are recorded (last_candidate_failures) and the
        call succeeds as long as at least one candidate was obtained.
        """
        if n < 1:
            raise ValidationError("candidate count must be at least 1")
        if rng_seed is not None and hasattr(self.llm, "reseed"):
            self.llm.reseed(rng_seed)
        temperature = self.profile.candidate_temperature if temperature is None else temperature
        prompt = templates.generation_prompt(description)

        candidates: list[str] = []
        failures = 0
        for i in range(n):
            try:
                response = self._call(
                    lambda: self.llm.complete(
                        prompt, temperature=temperature, max_tokens=self.profile.max_output_tokens
                    )
                )
                candidates.append(extract_markup(response))
            except BackendError:
                failures += 1
                logger.warning("candidate %d/%d failed", i + 1, n)
        self.last_candidate_failures = failures
        if not candidates:
            raise BackendError(f"all {n} candidate generations failed")
        return candidates

    def improve_with_comments(self, html: str, comments: list[str]) -> str:
        if not comments:
            raise ValidationError("comment list must be non-empty")
        prompt = templates.comment_edit_prompt(html, comments)
        response = self._call(
            lambda: self.llm.complete(prompt, max_tokens=self.profile.max_output_tokens)
        )
        return _require_complete_document(extract_markup(response))

    def improve_with_regions(self, html: str, grounded: list[tuple[str, str]]) -> str:
        if not grounded:
            raise ValidationError("grounded feedback list must be non-empty")
        prompt = templates.region_edit_prompt(html, grounded)
        response = self._call(
            lambda: self.llm.complete(prompt, max_tokens=self.profile.max_output_tokens)
        )
        return _require_complete_document(extract_markup(response))

    # -- rendering and media --

    def render(self, manifest: StagingManifest, viewport: tuple[int, int] | None = None) -> RenderResult:
        viewport = viewport or self.profile.viewport
        try:
            screenshot, geometry_text = self._call(
                lambda: self.renderer.render(manifest.root, manifest.entry, viewport)
            )
        except BackendError as exc:
            raise RenderError(f"render of {manifest.entry} failed", log_excerpt=str(exc)) from exc
        geometry = parse_geometry(geometry_text)
        with Image.open(io.BytesIO(screenshot)) as img:
            if img.size != tuple(viewport):
                raise RenderError(
                    f"screenshot size {img.size} does not match viewport {viewport}"
                )
        truncated = any(b.bbox[1] + b.bbox[3] > viewport[1] for b in geometry.boxes)
        return RenderResult(screenshot=screenshot, geometry=geometry, truncated=truncated)

    def synthesize_placeholder(self, prompt: str) -> PlaceholderImage:
        if not prompt.strip():
            raise ValidationError("placeholder prompt must be non-empty")
        try:
            return PlaceholderImage(data=self._call(lambda: self.image_synth.synthesize(prompt)))
        except BackendError:
            logger.warning("image backend failed; substituting stub placeholder for %r", prompt)
            return PlaceholderImage(data=StubImageSynth(seed=self.profile.seed).synthesize(prompt), fallback=True)

    def placeholders_for(self, html: str) -> dict[str, bytes]:
        """Placeholder images for every image prompt in the markup."""
        from ..htmlkit.images import extract_images

        return {
            ref.placeholder_prompt: self.synthesize_placeholder(ref.placeholder_prompt).data
            for ref in extract_images(html)
            if ref.placeholder_prompt
        }

    def to_sketch(self, html: str, geometry: GeometryMap) -> bytes:
        return self._call(lambda: self.sketch.convert(html, geometry))

    def preview(self, document: bytes) -> bytes:
        return self._call(lambda: self.sketch.preview(document))

    def embed(self, kind: str, payload: bytes | str) -> np.ndarray:
        if kind not in ("image", "text"):
            raise ValidationError(f"unknown embedding kind {kind!r}")
        data = payload.encode() if isinstance(payload, str) else payload
        if not data:
            raise ValidationError("embedding payload must be non-empty")
        return self._call(lambda: self.embedder.embed(kind, data))

    def embed_text(self, text: str) -> np.ndarray:
        return self.embed("text", text)

    def embed_image(self, data: bytes) -> np.ndarray:
        return self.embed("image", data)
