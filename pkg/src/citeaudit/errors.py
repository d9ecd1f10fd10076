"""Exception types shared across the engine.

Every rejection the pipeline can produce is a subclass of AuditError so the
CLI and HTTP gateway can map them onto exit codes / status codes uniformly.
"""

from __future__ import annotations


class AuditError(Exception):
    """Base class for all engine rejections."""


class PayloadError(AuditError):
    """Manuscript payload failed schema validation.

    ``field`` names the first failing field (dotted path into the payload).
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class DuplicateIdError(AuditError):
    """Identifiers that must be unique were repeated."""

    def __init__(self, kind: str, duplicates: list[str]):
        self.kind = kind
        self.duplicates = duplicates
        super().__init__(f"duplicate {kind}: {', '.join(duplicates)}")


class UnknownManuscriptError(AuditError):
    def __init__(self, manuscript_id: str):
        self.manuscript_id = manuscript_id
        super().__init__(f"unknown manuscript: {manuscript_id}")


class UnknownReferenceError(AuditError):
    def __init__(self, manuscript_id: str, reference_id: str):
        self.manuscript_id = manuscript_id
        self.reference_id = reference_id
        super().__init__(f"unknown reference {reference_id} in {manuscript_id}")


class StageOrderError(AuditError):
    """A stage was persisted or run before its predecessor finished."""

    def __init__(self, stage: str, missing: str):
        self.stage = stage
        self.missing = missing
        super().__init__(f"stage '{stage}' requires '{missing}' to be done first")


class StaleStageError(AuditError):
    """An operation needed completed stages that are stale or missing."""

    def __init__(self, stale: list[str]):
        self.stale = stale
        super().__init__(f"stale stages: {', '.join(stale)}")


class GoldLabelError(AuditError):
    """Gold-label file malformed or internally inconsistent."""


class ProviderError(AuditError):
    """A metadata/judgment provider failed for one request."""

    def __init__(self, provider: str, cause: str):
        self.provider = provider
        self.cause = cause
        super().__init__(f"provider '{provider}' failed: {cause}")


class NetworkDisabledError(AuditError):
    """A network fetch was attempted while stub mode forbids it."""

    def __init__(self, provider: str):
        self.provider = provider
        super().__init__(f"stub mode forbids network access (provider '{provider}')")


class ConfigError(AuditError):
    """Run configuration out of documented ranges."""
