"""Exception types shared across the package.

Every module raises subclasses of UiPrefError so callers (the HTTP service,
the CLI, batch jobs) can map failures to a response class without matching
on message strings.
"""

from __future__ import annotations


class UiPrefError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(UiPrefError):
    """Input violates a documented precondition or type invariant."""


class NotFoundError(UiPrefError):
    """A referenced record, blob, or resource does not exist."""


class IntegrityError(UiPrefError):
    """Stored data is internally inconsistent (e.g. a dangling reference)."""


class ConfigurationError(UiPrefError):
    """Mismatched or unusable configuration (dimensions, empty pools, ...)."""


class StaleGeometryError(UiPrefError):
    """A geometry map does not correspond to the document it is applied to."""


class MissingPlaceholderError(UiPrefError):
    """Asset staging could not find placeholder images for some prompts."""

    def __init__(self, missing: list[str]):
        super().__init__(f"missing placeholder images for prompts: {missing}")
        self.missing = list(missing)


class BackendError(UiPrefError):
    """A backend call failed after exhausting the retry budget."""


class TransientError(BackendError):
    """A retryable backend failure (timeout, connection reset, 5xx)."""


class RenderError(BackendError):
    """Rendering failed; carries an excerpt of the backend log."""

    def __init__(self, message: str, log_excerpt: str = ""):
        super().__init__(message)
        self.log_excerpt = log_excerpt


class MalformedEditError(BackendError):
    """An edit backend returned something other than a complete document."""


class PartialResultError(BackendError):
    """A looped backend operation failed midway; carries what was collected."""

    def __init__(self, message: str, collected: list):
        super().__init__(message)
        self.collected = collected


class TransformError(UiPrefError):
    """A feedback-to-pair transform failed; no partial pair was emitted."""


class PoolExhaustedError(UiPrefError):
    """No unserved task remains for this (annotator, interface)."""


class NumericError(UiPrefError):
    """A numeric computation received or produced non-finite values."""
