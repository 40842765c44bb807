"""Image reference extraction: one entry per <img>, with the placeholder prompt.

The prompt for a placeholder image is the alt text; when alt is missing or
empty the src attribute value is used instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dom import parse_document


@dataclass(frozen=True)
class ImageRef:
    element_index: int
    alt_text: str | None
    src: str
    placeholder_prompt: str


def extract_images(html: str) -> list[ImageRef]:
    """All <img> elements in document order with their placeholder prompts."""
    doc = parse_document(html)
    refs = []
    for node in doc.iter_elements():
        if node.tag != "img":
            continue
        alt = node.get("alt")
        src = node.get("src") or ""
        prompt = alt if alt else src
        refs.append(
            ImageRef(
                element_index=len(refs),
                alt_text=alt,
                src=src,
                placeholder_prompt=prompt,
            )
        )
    return refs
