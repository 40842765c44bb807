"""Outbound prompt construction from byte-frozen template fixtures.

Every prompt the gateway sends is produced here by substituting into a
template file shipped with the package; nothing is string-built ad hoc, so
prompt fidelity is testable byte-for-byte.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

_DESCRIPTION_SLOT = "<natural language description>"
_CODE_SLOT = "<original UI HTML code>"
_COMMENTS_SLOT = "<list of comments>"
_REGIONS_SLOT = "<list of comments paired with HTML snippets>"
_EXAMPLES_SLOT = "<example descriptions>"


@lru_cache(maxsize=None)
def template_text(name: str) -> str:
    return (resources.files(__package__) / "templates" / f"{name}.txt").read_text(
        encoding="utf-8"
    )


def generation_prompt(description: str) -> str:
    """Prompt asking the code model for a complete page for one description."""
    return template_text("generate_page").replace(_DESCRIPTION_SLOT, description)


def positive_prompt(description: str) -> str:
    return template_text("score_positive").replace(_DESCRIPTION_SLOT, description)


def negative_prompt(description: str) -> str:
    return template_text("score_negative").replace(_DESCRIPTION_SLOT, description)


def empty_prompt(_description: str = "") -> str:
    """Description-independent prompt standing in for empty or trivial screens."""
    return template_text("score_empty")


def comment_edit_prompt(html: str, comments: list[str]) -> str:
    body = template_text("edit_comments").replace(_CODE_SLOT, html)
    return body.replace(_COMMENTS_SLOT, "\n".join(comments))


def region_edit_prompt(html: str, grounded: list[tuple[str, str]]) -> str:
    """grounded is a list of (comment, element snippet) in annotation order."""
    items = "\n\n".join(f"{comment}:\n{snippet}" for comment, snippet in grounded)
    body = template_text("edit_regions").replace(_CODE_SLOT, html)
    return body.replace(_REGIONS_SLOT, items)


def description_prompt(seed_examples: list[str]) -> str:
    return template_text("generate_descriptions").replace(
        _EXAMPLES_SLOT, "\n".join(seed_examples)
    )
