"""Snippet extraction: the exact outer markup of one element by path."""

from __future__ import annotations

from ..errors import StaleGeometryError
from .dom import parse_document


def snippet(element_path: str, html: str) -> str:
    """Outer markup of the element at ``element_path``, byte-identical to source.

    Raises StaleGeometryError when the path does not resolve, which happens
    when geometry from an older render is applied to edited markup.
    """
    doc = parse_document(html)
    node = doc.find(element_path)
    if node is None:
        raise StaleGeometryError(f"element path {element_path!r} does not resolve in document")
    return doc.outer_html(node)
