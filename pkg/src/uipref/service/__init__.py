from .app import ServiceState, create_app
from .config import ServiceConfig, load_config
from .jobs import JOB_KINDS, JobReport, JobRunner, JobSpec

__all__ = [
    "JOB_KINDS",
    "JobReport",
    "JobRunner",
    "JobSpec",
    "ServiceConfig",
    "ServiceState",
    "create_app",
    "load_config",
]
