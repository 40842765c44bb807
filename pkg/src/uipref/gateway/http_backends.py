"""Thin HTTP clients for real backends, drop-in replacements for the stubs.

Wire formats:
    LLM        POST {endpoint}  {model, prompt, temperature, max_tokens} -> {text}
    renderer   POST {endpoint}  {staging_root, entry, viewport: [w, h]}
               -> {screenshot_b64, geometry}
    image      POST {endpoint}  {prompt} -> png bytes
    embedding  POST {endpoint}  {kind, payload_b64} -> {vector}

Connection errors, timeouts, and 5xx responses surface as TransientError so
the gateway's retry budget applies.
"""

from __future__ import annotations

import base64

import httpx
import numpy as np

from ..errors import BackendError, TransientError
from ..htmlkit.geometry import GeometryMap, serialize_geometry
from .profile import BackendProfile


def _post(endpoint: str, payload: dict, timeout: float) -> httpx.Response:
    try:
        response = httpx.post(endpoint, json=payload, timeout=timeout)
    except httpx.TransportError as exc:
        raise TransientError(f"transport failure calling {endpoint}: {exc}") from exc
    if response.status_code >= 500:
        raise TransientError(f"{endpoint} returned {response.status_code}")
    if response.status_code >= 400:
        raise BackendError(f"{endpoint} returned {response.status_code}: {response.text[:200]}")
    return response


class HttpLlm:
    def __init__(self, profile: BackendProfile):
        self.endpoint = profile.llm_endpoint
        self.model = profile.llm_model
        self.timeout = profile.timeout_s

    def complete(self, prompt: str, temperature: float = 1.0, max_tokens: int = 4096) -> str:
        payload = {
            "model": self.model,
            "prompt": prompt,
            "temperature": temperature,
            "max_tokens": max_tokens,
        }
        return _post(self.endpoint, payload, self.timeout).json()["text"]


class HttpRenderer:
    def __init__(self, profile: BackendProfile):
        self.endpoint = profile.renderer_endpoint
        self.timeout = profile.timeout_s

    def render(self, staging_root, entry: str, viewport: tuple[int, int]) -> tuple[bytes, str]:
        payload = {"staging_root": str(staging_root), "entry": entry, "viewport": list(viewport)}
        body = _post(self.endpoint, payload, self.timeout).json()
        return base64.b64decode(body["screenshot_b64"]), body["geometry"]


class HttpImageSynth:
    def __init__(self, profile: BackendProfile):
        self.endpoint = profile.image_endpoint
        self.timeout = profile.timeout_s

    def synthesize(self, prompt: str) -> bytes:
        return _post(self.endpoint, {"prompt": prompt}, self.timeout).content


class HttpEmbedding:
    def __init__(self, profile: BackendProfile):
        self.endpoint = profile.embedding_endpoint
        self.timeout = profile.timeout_s

    def embed(self, kind: str, payload: bytes) -> np.ndarray:
        body = {"kind": kind, "payload_b64": base64.b64encode(payload).decode()}
        vector = np.asarray(_post(self.endpoint, body, self.timeout).json()["vector"], dtype=float)
        return vector / np.linalg.norm(vector)


class SubprocessSketchConverter:
    """Runs an external converter command; html on stdin, document on stdout."""

    def __init__(self, profile: BackendProfile):
        self.cmd = profile.sketch_converter_cmd
        self.timeout = profile.timeout_s

    def convert(self, html: str, geometry: GeometryMap) -> bytes:
        import subprocess

        blob = html + "\x00" + serialize_geometry(geometry)
        try:
            proc = subprocess.run(
                self.cmd.split(),
                input=blob.encode(),
                capture_output=True,
                timeout=self.timeout,
                check=True,
            )
        except (subprocess.TimeoutExpired, subprocess.CalledProcessError) as exc:
            raise TransientError(f"sketch converter failed: {exc}") from exc
        return proc.stdout

    def preview(self, document: bytes) -> bytes:
        import subprocess

        try:
            proc = subprocess.run(
                self.cmd.split() + ["--preview"],
                input=document,
                capture_output=True,
                timeout=self.timeout,
                check=True,
            )
        except (subprocess.TimeoutExpired, subprocess.CalledProcessError) as exc:
            raise TransientError(f"sketch preview failed: {exc}") from exc
        return proc.stdout


def build_client(profile: BackendProfile) -> "GatewayClient":
    """A gateway wired to real backends where endpoints are set, stubs elsewhere."""
    from .client import GatewayClient

    return GatewayClient(
        profile=profile,
        llm=HttpLlm(profile) if profile.llm_endpoint else None,
        renderer=HttpRenderer(profile) if profile.renderer_endpoint else None,
        image_synth=HttpImageSynth(profile) if profile.image_endpoint else None,
        sketch=SubprocessSketchConverter(profile) if profile.sketch_converter_cmd else None,
        embedder=HttpEmbedding(profile) if profile.embedding_endpoint else None,
    )
