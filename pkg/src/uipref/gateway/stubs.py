"""Deterministic stub backends.

Every external capability has a stub that is a pure function of (seed, call
sequence), so a full pipeline run on stubs is reproducible bit-for-bit and
the whole suite runs without network access. Stubs route on the byte-frozen
prompt templates they receive, which doubles as a check that callers really
use the template functions.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
import re

import numpy as np
from PIL import Image, ImageDraw

from ..errors import StaleGeometryError, ValidationError
from ..htmlkit.dom import NON_VISUAL_TAGS, DomNode, parse_document
from ..htmlkit.geometry import ElementBox, GeometryMap, serialize_geometry

_THEMES = (
    "a recipe discovery feed",
    "a personal finance dashboard",
    "a meditation timer",
    "a flight booking checkout",
    "a podcast player",
    "a plant care tracker",
    "a language flashcard drill",
    "a grocery delivery cart",
    "a fitness class scheduler",
    "a photo journal",
)

_LAYOUTS = (
    "a card grid and a bottom tab bar",
    "a hero header above a two-column list",
    "a segmented control over stacked tiles",
    "a search bar with filter chips",
    "a carousel above detail rows",
)


def _digest_int(*parts: bytes) -> int:
    h = hashlib.sha256()
    for part in parts:
        h.update(part)
        h.update(b"\x1f")
    return int.from_bytes(h.digest()[:8], "big")


class StubLlm:
    """Routes on the frozen prompt templates and answers deterministically.

    duplicate_rate and distinct_capacity shape the description stream so the
    dedup-merge loop can be exercised against a duplicate-heavy source.
    """

    def __init__(self, seed: int = 0, duplicate_rate: float = 0.0, distinct_capacity: int | None = None):
        self.seed = seed
        self.duplicate_rate = duplicate_rate
        self.distinct_capacity = distinct_capacity
        self.requests: list[str] = []
        self._prompt_counts: dict[str, int] = {}
        self._distinct_emitted = 0

    def reseed(self, seed: int) -> None:
        self.seed = seed
        self._prompt_counts.clear()
        self._distinct_emitted = 0

    def complete(self, prompt: str, temperature: float = 1.0, max_tokens: int = 4096) -> str:
        self.requests.append(prompt)
        key = hashlib.sha256(prompt.encode()).hexdigest()
        call_index = self._prompt_counts.get(key, 0)
        self._prompt_counts[key] = call_index + 1

        if prompt.startswith("here are some example descriptions"):
            return self._descriptions(call_index)
        if prompt.startswith("provide the complete HTML code"):
            description = prompt.rsplit("here is a description of the webpage: ", 1)[-1]
            return self._page(description, call_index)
        if "notes and feedback for several regions" in prompt:
            return self._region_edit(prompt)
        if "a designer has wrote some notes and feedback" in prompt:
            return self._comment_edit(prompt, call_index)
        return "ok"

    # -- description sampling --

    def _description_text(self, n: int) -> str:
        theme = _THEMES[n % len(_THEMES)]
        layout = _LAYOUTS[(n // len(_THEMES)) % len(_LAYOUTS)]
        return f"{theme} with {layout} (concept {n:05d})"

    def _descriptions(self, call_index: int) -> str:
        rng = np.random.default_rng(_digest_int(str(self.seed).encode(), b"desc", str(call_index).encode()))
        lines = []
        for _ in range(10):
            exhausted = (
                self.distinct_capacity is not None
                and self._distinct_emitted >= self.distinct_capacity
            )
            if self._distinct_emitted > 0 and (exhausted or rng.random() < self.duplicate_rate):
                lines.append(self._description_text(int(rng.integers(self._distinct_emitted))))
            else:
                lines.append(self._description_text(self._distinct_emitted))
                self._distinct_emitted += 1
        return "\n".join(lines)

    # -- page generation --

    def _page(self, description: str, variant: int) -> str:
        token = _digest_int(str(self.seed).encode(), description.encode(), str(variant).encode())
        hue = token % 360
        sections = []
        for i in range(1 + (token >> 8) % 4):
            sections.append(
                f'    <section class="p-4 rounded-xl shadow"><h2 class="text-lg">Section {i + 1}</h2>'
                f"<p>Sample {variant}-{i} content for {description}.</p></section>"
            )
        body = "\n".join(sections)
        page = f"""<!DOCTYPE html>
<html>
<head>
<title>{description}</title>
<script src="https://cdn.tailwindcss.com"></script>
<link rel="stylesheet" href="https://cdnjs.cloudflare.com/ajax/libs/font-awesome/6.5.1/css/all.min.css">
</head>
<body class="bg-gray-50" data-hue="{hue}">
  <header class="p-6"><h1 class="text-2xl font-bold">{description}</h1></header>
  <main class="p-4 space-y-4">
{body}
    <img alt="hero illustration for {description}" src="hero-{variant}.png">
  </main>
  <footer class="p-4 text-sm">variant {variant}</footer>
</body>
</html>"""
        return f"```html\n{page}\n```"

    # -- edits --

    @staticmethod
    def _extract_fenced(prompt: str) -> str:
        m = re.search(r"```html\n(.*?)\n```", prompt, re.DOTALL)
        if not m:
            raise ValidationError("edit prompt carries no fenced original code")
        return m.group(1)

    @staticmethod
    def _extract_quoted(prompt: str) -> str:
        m = re.search(r':\n"(.*)"\n\nincorporate this feedback', prompt, re.DOTALL)
        if not m:
            raise ValidationError("edit prompt carries no quoted feedback")
        return m.group(1)

    def _comment_edit(self, prompt: str, call_index: int) -> str:
        html = self._extract_fenced(prompt)
        comments = self._extract_quoted(prompt).splitlines()
        note = f'  <section data-stub-edit="{len(comments)}"><p>applied: {"; ".join(comments)}</p></section>\n'
        if "</body>" in html:
            revised = html.replace("</body>", note + "</body>", 1)
        else:
            revised = html + "\n" + note
        return f"```html\n{revised}\n```"

    def _region_edit(self, prompt: str) -> str:
        html = self._extract_fenced(prompt)
        items = self._extract_quoted(prompt).split("\n\n")
        revised = html
        for n, item in enumerate(items):
            _, _, snippet_text = item.partition(":\n")
            if snippet_text and snippet_text in revised:
                revised = revised.replace(
                    snippet_text, _mark_first_tag(snippet_text, f'data-revised="{n}"'), 1
                )
        return f"```html\n{revised}\n```"


def _mark_first_tag(snippet_text: str, marker: str) -> str:
    m = re.match(r"<[a-zA-Z][a-zA-Z0-9-]*", snippet_text)
    if not m:
        return snippet_text
    return snippet_text[: m.end()] + " " + marker + snippet_text[m.end() :]


class StubRenderer:
    """Flow-layout renderer: one box per visual element, deterministic pixels.

    Block layout only: children stack vertically inside their parent with a
    fixed padding and gap; text height follows a fixed character metric. Not
    CSS, but stable geometry that nests the way real pages do.
    """

    PAD = 8
    GAP = 4
    LINE_H = 20
    CHAR_W = 8

    def __init__(self, seed: int = 0):
        self.seed = seed

    def render(self, staging_root, entry: str, viewport: tuple[int, int]) -> tuple[bytes, str]:
        html = (staging_root / entry).read_text(encoding="utf-8")
        doc = parse_document(html)
        boxes: list[ElementBox] = []
        width, height = viewport

        cursor = 0.0
        for root in doc.roots:
            cursor += self._place(root, 0.0, cursor, float(width), boxes)

        geometry = GeometryMap(viewport=(float(width), float(height)), boxes=tuple(boxes))
        return self._draw(doc.source, geometry), serialize_geometry(geometry)

    def _place(self, node: DomNode, x: float, y: float, w: float, boxes: list[ElementBox]) -> float:
        if node.tag in NON_VISUAL_TAGS:
            return 0.0
        if node.tag == "img":
            boxes.append(ElementBox(element_path=node.path, bbox=(x, y, w, 80.0)))
            return 80.0
        if node.tag in ("br", "hr"):
            boxes.append(ElementBox(element_path=node.path, bbox=(x, y, w, 8.0)))
            return 8.0

        content_x = x + self.PAD
        content_w = max(w - 2 * self.PAD, 1.0)
        cursor = y + self.PAD

        text = " ".join(node.own_text.split())
        if text:
            chars_per_line = max(8, int(content_w // self.CHAR_W))
            cursor += self.LINE_H * math.ceil(len(text) / chars_per_line)

        placed_index = len(boxes)
        boxes.append(ElementBox(element_path=node.path, bbox=(x, y, w, 0.0)))
        for child in node.children:
            used = self._place(child, content_x, cursor, content_w, boxes)
            if used > 0:
                cursor += used + self.GAP
        inner = cursor - y
        height = max(inner + self.PAD, 24.0)
        boxes[placed_index] = ElementBox(element_path=node.path, bbox=(x, y, w, height))
        return height

    def _draw(self, source: str, geometry: GeometryMap) -> bytes:
        width, height = int(geometry.viewport[0]), int(geometry.viewport[1])
        image = Image.new("RGB", (width, height), (255, 255, 255))
        draw = ImageDraw.Draw(image)
        src_tag = hashlib.sha256(source.encode()).digest()[:4]
        for box in geometry.boxes:
            x, y, w, h = box.bbox
            token = hashlib.sha256(src_tag + box.element_path.encode()).digest()
            fill = tuple(140 + b % 100 for b in token[:3])
            line = tuple(b % 140 for b in token[3:6])
            draw.rectangle((x, y, x + max(w - 1, 0), y + max(h - 1, 0)), fill=fill, outline=line)
        out = io.BytesIO()
        image.save(out, format="PNG")
        return out.getvalue()


class StubImageSynth:
    """Solid-color placeholder keyed by the prompt hash.

    The digest is also written into the first pixel rows, so distinct prompts
    produce distinct bytes unless sha256 itself collides.
    """

    SIZE = (64, 64)

    def __init__(self, seed: int = 0):
        self.seed = seed

    def synthesize(self, prompt: str) -> bytes:
        digest = hashlib.sha256(f"{self.seed}:{prompt}".encode()).digest()
        color = tuple(digest[:3])
        image = Image.new("RGB", self.SIZE, color)
        pixels = image.load()
        for i in range(0, 30, 3):
            pixels[i // 3, 0] = (digest[i], digest[i + 1], digest[i + 2])
        out = io.BytesIO()
        image.save(out, format="PNG")
        return out.getvalue()


class StubSketchConverter:
    """Layer-per-element sketch-like document plus a rectangle preview."""

    def convert(self, html: str, geometry: GeometryMap) -> bytes:
        doc = parse_document(html)
        layers = []
        for box in geometry.boxes:
            if doc.find(box.element_path) is None:
                raise StaleGeometryError(
                    f"geometry path {box.element_path!r} does not resolve in document"
                )
            layers.append({"name": box.element_path, "frame": list(box.bbox)})
        payload = {
            "format": "uipref-sketch",
            "version": 1,
            "viewport": list(geometry.viewport),
            "layers": layers,
        }
        return json.dumps(payload, separators=(",", ":")).encode()

    def preview(self, document: bytes) -> bytes:
        payload = json.loads(document.decode())
        width, height = (int(v) for v in payload["viewport"])
        image = Image.new("RGB", (width, height), (250, 250, 250))
        draw = ImageDraw.Draw(image)
        for layer in payload["layers"]:
            x, y, w, h = layer["frame"]
            token = hashlib.sha256(json.dumps(layer, separators=(",", ":")).encode()).digest()
            fill = tuple(130 + b % 110 for b in token[:3])
            draw.rectangle((x, y, x + max(w - 1, 0), y + max(h - 1, 0)), fill=fill, outline=(60, 60, 60))
        out = io.BytesIO()
        image.save(out, format="PNG")
        return out.getvalue()


class StubEmbedding:
    """Unit vector drawn from a generator seeded by a payload hash."""

    def __init__(self, dim: int = 512, seed: int = 0):
        self.dim = dim
        self.seed = seed

    def embed(self, kind: str, payload: bytes) -> np.ndarray:
        rng = np.random.default_rng(_digest_int(str(self.seed).encode(), kind.encode(), payload))
        v = rng.standard_normal(self.dim)
        return v / np.linalg.norm(v)
