from .records import (
    INTERFACES,
    AnnotationRecord,
    CommentSet,
    RankingJudgment,
    RevisionRecord,
    SketchSet,
    read_records,
    record_from_dict,
    record_to_dict,
    write_records,
)
from .stats import InterfaceStats, StudyReport, study_stats
from .tasks import Task, TaskScheduler
from .transforms import FeedbackTransformer, pairs_from_ranking

__all__ = [
    "INTERFACES",
    "AnnotationRecord",
    "CommentSet",
    "FeedbackTransformer",
    "InterfaceStats",
    "RankingJudgment",
    "RevisionRecord",
    "SketchSet",
    "StudyReport",
    "Task",
    "TaskScheduler",
    "pairs_from_ranking",
    "read_records",
    "record_from_dict",
    "record_to_dict",
    "study_stats",
    "write_records",
]
