"""Exception types shared across the extraction and curation pipeline."""

from __future__ import annotations


class SmecsError(Exception):
    """Base class for all errors raised by this package."""


class MalformedJson(SmecsError):
    """Input is not well-formed JSON (or not a JSON object where one is required)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class MissingName(SmecsError):
    """Export requested for a record without the required name field."""


class MalformedCff(SmecsError):
    """CITATION.cff content outside the supported YAML subset, annotated with a line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class MalformedVocabulary(SmecsError):
    """Vocabulary snapshot does not match the expected layout."""


class HarvestError(SmecsError):
    """Base class for failures while talking to a hosting platform."""


class UnsupportedUrl(SmecsError):
    """Repository URL is not an https URL with owner and name path segments."""


class UnsupportedHost(SmecsError):
    """Repository host rejected by a caller that restricts hosts (extension seam)."""


class AuthError(HarvestError):
    """Platform denied the request (HTTP 401/403). Never carries the token value."""


class NotFound(HarvestError):
    """Repository (or endpoint) does not exist (HTTP 404)."""


class RateLimited(HarvestError):
    """Platform rate limit hit; carries the advertised retry delay when present."""

    def __init__(self, message: str, retry_after: int | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class TransportError(HarvestError):
    """Network failure or unusable response below the API level."""


class DecodeError(HarvestError):
    """Repository file content could not be decoded (bad transfer encoding)."""


class UnknownSession(SmecsError):
    """No session with the given id (or it expired)."""


class UnknownField(SmecsError):
    """Field path does not name a schema field or person-list operation."""


class InvariantViolation(SmecsError):
    """Edit rejected because it would break a model invariant."""
