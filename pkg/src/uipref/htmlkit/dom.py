"""Error-tolerant HTML tree with source spans and structural element paths.

Built on html.parser rather than a layout engine: we only need element
structure, attribute values, and the exact source span of each element so
snippets can be returned byte-identical to the input. Malformed input is
tolerated the way browsers tolerate it (stray end tags ignored, open
elements closed at end of input) and counted as warnings.

Element identity is a structural selector path: ``tag[i]`` segments joined
by ``/``, where ``i`` is the element's index among its parent's element
children. The path survives re-parsing of the identical document.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Iterator

VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)

NON_VISUAL_TAGS = frozenset("head meta link script style title base noscript".split())

_SEGMENT = re.compile(r"^([a-zA-Z][a-zA-Z0-9-]*)\[(\d+)\]$")


@dataclass
class DomNode:
    tag: str
    attrs: list[tuple[str, str | None]]
    parent: "DomNode | None" = None
    children: list["DomNode"] = field(default_factory=list)
    text_parts: list[str] = field(default_factory=list)
    index: int = 0
    start: int = 0
    start_tag_end: int = 0
    end: int = 0

    def get(self, name: str) -> str | None:
        for key, value in self.attrs:
            if key == name:
                return value
        return None

    @property
    def path(self) -> str:
        segments = []
        node: DomNode | None = self
        while node is not None:
            segments.append(f"{node.tag}[{node.index}]")
            node = node.parent
        return "/".join(reversed(segments))

    @property
    def own_text(self) -> str:
        return "".join(self.text_parts)

    def iter_subtree(self) -> Iterator["DomNode"]:
        yield self
        for child in self.children:
            yield from child.iter_subtree()


@dataclass
class Document:
    source: str
    roots: list[DomNode]
    warnings: int = 0

    def iter_elements(self) -> Iterator[DomNode]:
        for root in self.roots:
            yield from root.iter_subtree()

    def find(self, path: str) -> DomNode | None:
        nodes = self.roots
        current: DomNode | None = None
        for segment in path.split("/"):
            m = _SEGMENT.match(segment)
            if not m:
                return None
            tag, idx = m.group(1), int(m.group(2))
            if idx >= len(nodes) or nodes[idx].tag != tag.lower():
                return None
            current = nodes[idx]
            nodes = current.children
        return current

    def outer_html(self, node: DomNode) -> str:
        return self.source[node.start : node.end]


def path_sort_key(path: str) -> tuple[int, ...]:
    """Document order of a structural path (ancestors before descendants)."""
    return tuple(int(m.group(2)) for m in map(_SEGMENT.match, path.split("/")) if m)


class _TreeBuilder(HTMLParser):
    def __init__(self, source: str):
        super().__init__(convert_charrefs=True)
        self.source = source
        self.line_starts = [0]
        for i, ch in enumerate(source):
            if ch == "\n":
                self.line_starts.append(i + 1)
        self.roots: list[DomNode] = []
        self.stack: list[DomNode] = []
        self.warnings = 0

    def _offset(self) -> int:
        line, col = self.getpos()
        return self.line_starts[line - 1] + col

    def _tag_end(self, start: int) -> int:
        gt = self.source.find(">", start)
        return len(self.source) if gt < 0 else gt + 1

    def _attach(self, node: DomNode) -> None:
        if self.stack:
            node.parent = self.stack[-1]
            node.index = len(self.stack[-1].children)
            self.stack[-1].children.append(node)
        else:
            node.index = len(self.roots)
            self.roots.append(node)

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        start = self._offset()
        raw = self.get_starttag_text() or ""
        node = DomNode(tag=tag, attrs=attrs, start=start, start_tag_end=start + len(raw))
        self._attach(node)
        if tag in VOID_TAGS:
            node.end = node.start_tag_end
        else:
            self.stack.append(node)

    def handle_startendtag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        start = self._offset()
        raw = self.get_starttag_text() or ""
        node = DomNode(tag=tag, attrs=attrs, start=start, start_tag_end=start + len(raw))
        node.end = node.start_tag_end
        self._attach(node)

    def handle_endtag(self, tag: str) -> None:
        if tag in VOID_TAGS:
            return
        if not any(n.tag == tag for n in self.stack):
            self.warnings += 1
            return
        close_at = self._offset()
        # Pop implicitly closed elements down to the matching tag.
        while self.stack:
            node = self.stack.pop()
            if node.tag == tag:
                node.end = self._tag_end(close_at)
                break
            node.end = close_at
            self.warnings += 1

    def handle_data(self, data: str) -> None:
        if self.stack:
            self.stack[-1].text_parts.append(data)

    def finish(self) -> None:
        while self.stack:
            node = self.stack.pop()
            node.end = len(self.source)
            self.warnings += 1


def parse_document(html: str) -> Document:
    builder = _TreeBuilder(html)
    builder.feed(html)
    builder.close()
    builder.finish()
    return Document(source=html, roots=builder.roots, warnings=builder.warnings)
