from .agreement import AgreementRecord, AgreementReport, agreement
from .battles import Battle, ScheduledMatch, read_battles, schedule_match, write_battles
from .ratings import (
    ModelRating,
    RatingConfig,
    RatingReport,
    bootstrap_ratings,
    elo_sequence,
    rating_report,
    win_rate_matrix,
)

__all__ = [
    "AgreementRecord",
    "AgreementReport",
    "Battle",
    "ModelRating",
    "RatingConfig",
    "RatingReport",
    "ScheduledMatch",
    "agreement",
    "bootstrap_ratings",
    "elo_sequence",
    "rating_report",
    "read_battles",
    "schedule_match",
    "win_rate_matrix",
    "write_battles",
]
