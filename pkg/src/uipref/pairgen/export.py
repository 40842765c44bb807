"""ORPO-consumable export: one JSON record per line.

Records carry {prompt, chosen, rejected, description_id, chosen_score,
rejected_score}; the scores are included for audit. Markup longer than the
token cap is cut at a whitespace-token boundary, preserving the original
bytes of everything kept, and flagged in the returned count.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from ..errors import ValidationError
from .builder import AlignmentPair

DEFAULT_MAX_TOKENS = 4096

_TOKEN = re.compile(r"\S+")


def count_tokens(text: str) -> int:
    return len(_TOKEN.findall(text))


def truncate_tokens(text: str, max_tokens: int) -> tuple[str, bool]:
    """Cut after the max_tokens-th whitespace token; kept prefix is unchanged."""
    if max_tokens <= 0:
        raise ValidationError("max_tokens must be positive")
    last_end = 0
    for i, match in enumerate(_TOKEN.finditer(text)):
        if i >= max_tokens:
            return text[:last_end], True
        last_end = match.end()
    return text, False


@dataclass
class ExportReport:
    records: int
    truncated: int


def export_orpo(
    pairs: Iterable[AlignmentPair],
    destination: str | Path,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    token_counter: Callable[[str], int] | None = None,
) -> ExportReport:
    """Write pairs as line-delimited records; returns record and truncation counts.

    token_counter overrides the whitespace token count for cap *checks* when a
    tokenizer-faithful count is needed; truncation itself always cuts at
    whitespace boundaries.
    """
    counts = token_counter or count_tokens
    records = 0
    truncated = 0
    lines = []
    for pair in pairs:
        chosen, rejected = pair.chosen, pair.rejected
        was_cut = False
        if counts(chosen) > max_tokens:
            chosen, cut = truncate_tokens(chosen, max_tokens)
            was_cut = was_cut or cut
        if counts(rejected) > max_tokens:
            rejected, cut = truncate_tokens(rejected, max_tokens)
            was_cut = was_cut or cut
        truncated += int(was_cut)
        lines.append(
            json.dumps(
                {
                    "prompt": pair.prompt,
                    "chosen": chosen,
                    "rejected": rejected,
                    "description_id": pair.description_id,
                    "chosen_score": pair.chosen_score,
                    "rejected_score": pair.rejected_score,
                    "truncated": was_cut,
                },
                ensure_ascii=False,
            )
        )
        records += 1
    Path(destination).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return ExportReport(records=records, truncated=truncated)


def read_orpo(source: str | Path) -> list[dict]:
    out = []
    with open(source, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out
