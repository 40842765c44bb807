"""Agreement analysis between independent raters and the pair labels.

A rater re-judges a preference pair blind; agreement is the percentage of
ratings that pick the pair's chosen side, overall and per feedback
interface stratum.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from ..feedback.records import INTERFACES


@dataclass(frozen=True)
class AgreementRecord:
    pair_ref: str
    stratum: str
    rater_choice: str

    def __post_init__(self):
        if self.stratum not in INTERFACES:
            raise ValidationError(f"unknown stratum {self.stratum!r}")
        if self.rater_choice not in ("chosen", "rejected"):
            raise ValidationError("rater choice must be 'chosen' or 'rejected'")


@dataclass(frozen=True)
class AgreementReport:
    overall_percent: float
    total: int
    per_stratum: dict[str, float]
    stratum_totals: dict[str, int]


def agreement(records: list[AgreementRecord]) -> AgreementReport:
    """Percent of ratings agreeing with the pair label, to 0.1% precision.

    Strata with no records are absent from the report, not reported as zero.
    """
    if not records:
        raise ValidationError("no agreement records")
    agreed = sum(r.rater_choice == "chosen" for r in records)
    per_stratum: dict[str, float] = {}
    stratum_totals: dict[str, int] = {}
    for stratum in INTERFACES:
        group = [r for r in records if r.stratum == stratum]
        if not group:
            continue
        stratum_totals[stratum] = len(group)
        per_stratum[stratum] = round(
            100.0 * sum(r.rater_choice == "chosen" for r in group) / len(group), 1
        )
    return AgreementReport(
        overall_percent=round(100.0 * agreed / len(records), 1),
        total=len(records),
        per_stratum=per_stratum,
        stratum_totals=stratum_totals,
    )
