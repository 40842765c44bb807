"""Asset staging: make a page renderable offline under one directory.

Every image is replaced by a synthesized placeholder keyed by its prompt,
and every external library reference is rewritten to a pinned local copy,
so a render of the staged directory depends on nothing outside it. The
rewrite is a deterministic span edit on the original markup; untouched
markup stays byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import MissingPlaceholderError
from .dom import DomNode, parse_document
from .images import extract_images


@dataclass(frozen=True)
class LibraryPin:
    """One vendored library file; versions are configuration, not code."""

    name: str
    version: str
    filename: str
    url_tokens: tuple[str, ...]
    content: str


DEFAULT_LIBRARIES = (
    LibraryPin(
        name="tailwindcss",
        version="3.4.1",
        filename="lib/tailwind-3.4.1.js",
        url_tokens=("tailwind",),
        content="/* tailwindcss 3.4.1, vendored for reproducible renders */\n",
    ),
    LibraryPin(
        name="font-awesome",
        version="6.5.1",
        filename="lib/font-awesome-6.5.1.css",
        url_tokens=("font-awesome", "fontawesome"),
        content="/* font awesome 6.5.1, vendored for reproducible renders */\n",
    ),
)


@dataclass(frozen=True)
class StagingConfig:
    libraries: tuple[LibraryPin, ...] = DEFAULT_LIBRARIES
    entry_name: str = "index.html"


@dataclass
class StagingManifest:
    """What got staged where, relative to the staging root."""

    root: Path
    entry: str
    assets: list[str] = field(default_factory=list)
    libraries: list[str] = field(default_factory=list)

    @property
    def entry_path(self) -> Path:
        return self.root / self.entry

    def to_dict(self) -> dict:
        return {
            "root": str(self.root),
            "entry": self.entry,
            "assets": list(self.assets),
            "libraries": list(self.libraries),
        }

    def write_index(self) -> None:
        (self.root / "manifest.json").write_text(
            json.dumps(self.to_dict(), indent=2), encoding="utf-8"
        )


def _is_external(url: str) -> bool:
    url = url.strip().lower()
    return url.startswith(("http://", "https://", "//"))


def _escape_attr(value: str) -> str:
    return value.replace("&", "&amp;").replace('"', "&quot;")


def _set_attr(tag_text: str, name: str, value: str) -> str:
    pattern = re.compile(
        rf"(\b{re.escape(name)}\s*=\s*)(\"[^\"]*\"|'[^']*'|[^\s>]+)", re.IGNORECASE
    )
    replacement = f'\\g<1>"{_escape_attr(value)}"'
    new_text, n = pattern.subn(replacement, tag_text, count=1)
    if n:
        return new_text
    insert_at = len(tag_text) - (2 if tag_text.endswith("/>") else 1)
    return tag_text[:insert_at].rstrip() + f' {name}="{_escape_attr(value)}"' + tag_text[insert_at:]


def _drop_attr(tag_text: str, name: str) -> str:
    pattern = re.compile(
        rf"\s*\b{re.escape(name)}\s*=\s*(\"[^\"]*\"|'[^']*'|[^\s>]+)", re.IGNORECASE
    )
    return pattern.sub("", tag_text)


_STYLE_URL = re.compile(r"url\(\s*['\"]?(?:https?:)?//[^)]*\)", re.IGNORECASE)


def asset_filename(prompt: str) -> str:
    return f"assets/img_{hashlib.sha256(prompt.encode()).hexdigest()[:12]}.png"


def _library_for(url: str, config: StagingConfig) -> LibraryPin | None:
    lowered = url.lower()
    for pin in config.libraries:
        if any(token in lowered for token in pin.url_tokens):
            return pin
    return None


def stage_assets(
    html: str,
    placeholders: dict[str, bytes],
    root: str | Path,
    config: StagingConfig | None = None,
) -> StagingManifest:
    """Write the staged page under ``root`` and return its manifest.

    ``placeholders`` maps each image's placeholder prompt (alt text, or src
    when alt is missing) to image bytes; a missing prompt fails the whole
    staging with the missing list.
    """
    config = config or StagingConfig()
    root = Path(root)

    refs = extract_images(html)
    missing = sorted({r.placeholder_prompt for r in refs} - set(placeholders))
    if missing:
        raise MissingPlaceholderError(missing)

    doc = parse_document(html)
    edits: list[tuple[int, int, str]] = []
    assets: dict[str, bytes] = {}
    libraries: dict[str, str] = {}
    image_index = 0

    for node in doc.iter_elements():
        tag_text = doc.source[node.start : node.start_tag_end]
        new_text = tag_text

        if node.tag == "img":
            prompt = refs[image_index].placeholder_prompt
            image_index += 1
            filename = asset_filename(prompt)
            assets[filename] = placeholders[prompt]
            new_text = _set_attr(new_text, "src", filename)
            if node.get("srcset") is not None:
                new_text = _drop_attr(new_text, "srcset")
        else:
            new_text = _rewrite_references(node, new_text, config, libraries)

        style = node.get("style")
        if style and _STYLE_URL.search(style):
            new_text = _set_attr(new_text, "style", _STYLE_URL.sub("none", style))

        if new_text != tag_text:
            edits.append((node.start, node.start_tag_end, new_text))

    rewritten = _apply_edits(doc.source, edits)

    root.mkdir(parents=True, exist_ok=True)
    (root / "assets").mkdir(exist_ok=True)
    (root / "lib").mkdir(exist_ok=True)
    for filename, data in sorted(assets.items()):
        (root / filename).write_bytes(data)
    for filename, content in sorted(libraries.items()):
        (root / filename).write_text(content, encoding="utf-8")
    (root / config.entry_name).write_text(rewritten, encoding="utf-8")

    manifest = StagingManifest(
        root=root,
        entry=config.entry_name,
        assets=sorted(assets),
        libraries=sorted(libraries),
    )
    manifest.write_index()
    return manifest


def _rewrite_references(
    node: DomNode, tag_text: str, config: StagingConfig, libraries: dict[str, str]
) -> str:
    for attr in ("src", "href"):
        url = node.get(attr)
        if url is None or not _is_external(url):
            continue
        if node.tag in ("a", "area"):
            tag_text = _set_attr(tag_text, attr, "#")
            continue
        pin = _library_for(url, config)
        if pin is not None:
            libraries[pin.filename] = pin.content
            tag_text = _set_attr(tag_text, attr, pin.filename)
        else:
            suffix = ".js" if node.tag == "script" else ".css"
            filename = f"lib/blank_{hashlib.sha256(url.encode()).hexdigest()[:8]}{suffix}"
            libraries[filename] = f"/* pinned blank stand-in for {url} */\n"
            tag_text = _set_attr(tag_text, attr, filename)
    return tag_text


def _apply_edits(source: str, edits: list[tuple[int, int, str]]) -> str:
    out = []
    cursor = 0
    for start, end, text in sorted(edits):
        out.append(source[cursor:start])
        out.append(text)
        cursor = end
    out.append(source[cursor:])
    return "".join(out)
