"""Harvesters: turn a repository URL plus token into raw per-source records.

Three sources are read: the hosting platform's REST API (GitHub-compatible),
a CITATION.cff file, and a codemeta.json file, both fetched from the
repository root on the default branch. Records hold the data exactly as the
source yielded it; crosswalking happens later. All network traffic goes
through an injected transport so the test suite replays recorded fixtures
and never opens a connection.
"""

from __future__ import annotations

import base64
import binascii
import enum
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Protocol
from urllib.parse import urlsplit

from . import cff
from .errors import (
    AuthError,
    DecodeError,
    HarvestError,
    MalformedCff,
    NotFound,
    RateLimited,
    TransportError,
    UnsupportedUrl,
)

logger = logging.getLogger(__name__)

CFF_FILENAME = "CITATION.cff"
CODEMETA_FILENAME = "codemeta.json"


class SourceKind(enum.Enum):
    GITHUB_API = "github-api"
    CFF_FILE = "cff-file"
    CODEMETA_FILE = "codemeta-file"


class TokenOrigin(enum.Enum):
    USER_PROVIDED = "user-provided"
    SERVER_DEFAULT = "server-default"
    NONE = "none"


@dataclass(frozen=True)
class RepoLocator:
    host: str
    owner: str
    name: str

    @property
    def api_base(self) -> str:
        return f"https://api.{self.host}"

    @property
    def repo_path(self) -> str:
        return f"/repos/{self.owner}/{self.name}"


@dataclass(frozen=True, repr=False)
class AuthToken:
    """Platform access token. The value never appears in repr, logs, or errors."""

    value: str
    origin: TokenOrigin

    def __repr__(self) -> str:
        return f"AuthToken(origin={self.origin.value}, value=<redacted>)"

    __str__ = __repr__

    @classmethod
    def none(cls) -> "AuthToken":
        return cls("", TokenOrigin.NONE)

    @classmethod
    def user(cls, value: str) -> "AuthToken":
        return cls(value, TokenOrigin.USER_PROVIDED)

    @classmethod
    def server_default(cls, value: str) -> "AuthToken":
        return cls(value, TokenOrigin.SERVER_DEFAULT)


@dataclass(frozen=True)
class SourceRecord:
    """Raw key-value metadata from one source, before any crosswalk."""

    source: SourceKind
    data: Any
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class HarvestOutcome:
    source: SourceKind
    outcome: str  # "ok" | "absent" | "error"
    detail: str | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"source": self.source.value, "outcome": self.outcome}
        if self.detail:
            out["detail"] = self.detail
        return out


# ---------------------------------------------------------------------------
# transports


@dataclass(frozen=True)
class TransportResponse:
    status: int
    headers: Mapping[str, str]
    body: bytes


class HttpTransport(Protocol):
    def get(self, url: str, headers: Mapping[str, str]) -> TransportResponse: ...


class RequestsTransport:
    """Real network client; safe for concurrent use."""

    def __init__(self, timeout: float = 30.0):
        import requests

        self._session = requests.Session()
        self._timeout = timeout

    def get(self, url: str, headers: Mapping[str, str]) -> TransportResponse:
        import requests

        try:
            response = self._session.get(url, headers=dict(headers), timeout=self._timeout)
        except requests.RequestException as exc:
            raise TransportError(f"network failure for {url}: {exc.__class__.__name__}") from exc
        return TransportResponse(
            status=response.status_code,
            headers={k.lower(): v for k, v in response.headers.items()},
            body=response.content,
        )


class FixtureTransport:
    """Replays recorded responses from a directory, for tests and demos.

    One file per request path, slashes flattened to double underscores:
    GET .../repos/acme/demo -> <dir>/repos__acme__demo.json. Each file holds
    {"status": int, "body": <json>} plus optional "headers". A missing file
    plays back as HTTP 404, matching how the platform reports absent
    repositories and files.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def get(self, url: str, headers: Mapping[str, str]) -> TransportResponse:
        path = urlsplit(url).path.lstrip("/")
        fixture = self.directory / (path.replace("/", "__") + ".json")
        if not fixture.is_file():
            return TransportResponse(404, {}, b'{"message": "Not Found"}')
        entry = json.loads(fixture.read_text(encoding="utf-8"))
        body = entry.get("body")
        raw = body.encode("utf-8") if isinstance(body, str) else json.dumps(body).encode("utf-8")
        response_headers = {k.lower(): str(v) for k, v in entry.get("headers", {}).items()}
        return TransportResponse(int(entry["status"]), response_headers, raw)


# ---------------------------------------------------------------------------
# operations


def parse_repo_url(url: str) -> RepoLocator:
    """Extract host/owner/name from an https repository URL.

    Accepts optional .git suffixes and trailing slashes; deeper paths (a file
    or tree page inside the repository) still resolve to the repository.
    """
    parts = urlsplit(url.strip())
    if parts.scheme != "https" or not parts.netloc:
        raise UnsupportedUrl(
            f"unsupported repository URL {url!r}: expected https://<host>/<owner>/<name>"
        )
    segments = [s for s in parts.path.split("/") if s]
    if len(segments) < 2:
        raise UnsupportedUrl(
            f"unsupported repository URL {url!r}: owner and repository name are required"
        )
    owner, name = segments[0], segments[1]
    if name.endswith(".git"):
        name = name[: -len(".git")]
    if not owner or not name:
        raise UnsupportedUrl(f"unsupported repository URL {url!r}")
    return RepoLocator(host=parts.netloc.lower(), owner=owner, name=name)


def _request_headers(token: AuthToken) -> dict[str, str]:
    headers = {"Accept": "application/vnd.github+json"}
    if token.origin is not TokenOrigin.NONE:
        headers["Authorization"] = f"Bearer {token.value}"
    return headers


def _auth_message(status: int, host: str, token: AuthToken) -> str:
    if token.origin is TokenOrigin.NONE:
        hint = "this repository may require a personal access token"
    else:
        hint = "check that the supplied access token is valid and has repo scope"
    return f"{host} denied the request (HTTP {status}); {hint}"


def _retry_after(headers: Mapping[str, str]) -> int | None:
    value = headers.get("retry-after")
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        return None


def _looks_rate_limited(headers: Mapping[str, str], body: bytes) -> bool:
    if headers.get("x-ratelimit-remaining") == "0":
        return True
    return b"rate limit" in body.lower()


def _get(
    transport: HttpTransport, url: str, token: AuthToken, locator: RepoLocator
) -> TransportResponse:
    response = transport.get(url, _request_headers(token))
    status = response.status
    if status in (200, 204):
        return response
    if status == 404:
        raise NotFound(f"{locator.owner}/{locator.name} not found on {locator.host}")
    if status == 403 and _looks_rate_limited(response.headers, response.body):
        raise RateLimited(
            f"{locator.host} rate limit exceeded; retry later or supply a token "
            "with a higher quota",
            retry_after=_retry_after(response.headers),
        )
    if status in (401, 403):
        raise AuthError(_auth_message(status, locator.host, token))
    if status == 429:
        raise RateLimited(
            f"{locator.host} rate limit exceeded (HTTP 429)",
            retry_after=_retry_after(response.headers),
        )
    raise TransportError(f"unexpected HTTP {status} from {url}")


def _get_json(
    transport: HttpTransport, url: str, token: AuthToken, locator: RepoLocator
) -> Any:
    response = _get(transport, url, token, locator)
    if response.status == 204 or not response.body:
        return None
    try:
        return json.loads(response.body)
    except json.JSONDecodeError as exc:
        raise TransportError(f"invalid JSON payload from {url}") from exc


def harvest_api(
    locator: RepoLocator, token: AuthToken, transport: HttpTransport
) -> SourceRecord:
    """Read the repository, languages, and contributors endpoints into one record."""
    base = locator.api_base + locator.repo_path
    repo = _get_json(transport, base, token, locator)
    languages = _get_json(transport, base + "/languages", token, locator)
    contributors = _get_json(transport, base + "/contributors", token, locator)
    logger.info("harvested API metadata for %s/%s", locator.owner, locator.name)
    return SourceRecord(
        source=SourceKind.GITHUB_API,
        data={
            "repo": repo if repo is not None else {},
            "languages": languages if languages is not None else {},
            "contributors": contributors if contributors is not None else [],
        },
    )


def fetch_repo_file(
    locator: RepoLocator, token: AuthToken, transport: HttpTransport, path: str
) -> str | None:
    """File content from the default branch, or None when the file does not exist."""
    url = f"{locator.api_base}{locator.repo_path}/contents/{path}"
    try:
        payload = _get_json(transport, url, token, locator)
    except NotFound:
        return None
    if not isinstance(payload, dict):
        raise DecodeError(f"{path} is not a file in {locator.owner}/{locator.name}")
    encoding = payload.get("encoding")
    if encoding != "base64":
        raise DecodeError(f"unsupported content encoding {encoding!r} for {path}")
    cleaned = "".join(str(payload.get("content", "")).split())
    try:
        raw = base64.b64decode(cleaned, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise DecodeError(f"invalid base64 content for {path}") from exc
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(f"{path} is not valid UTF-8") from exc


def parse_cff(text: str) -> SourceRecord:
    """Parse CITATION.cff content; the record mirrors the document unchanged."""
    data = cff.loads(text)
    if not isinstance(data, dict):
        raise MalformedCff("top-level CFF content must be a mapping", 1)
    warnings = () if "cff-version" in data else ("missing-cff-version",)
    return SourceRecord(source=SourceKind.CFF_FILE, data=data, warnings=warnings)


def harvest_all(
    locator: RepoLocator, token: AuthToken, transport: HttpTransport
) -> tuple[list[SourceRecord], list[HarvestOutcome]]:
    """Run all three harvesters.

    The API is the primary source: its failure aborts. File harvesters
    degrade per source — an absent or unreadable CITATION.cff / codemeta.json
    is recorded in the report and harvesting continues.
    """
    records: list[SourceRecord] = []
    report: list[HarvestOutcome] = []

    records.append(harvest_api(locator, token, transport))
    report.append(HarvestOutcome(SourceKind.GITHUB_API, "ok"))

    text = _soft_fetch(locator, token, transport, CFF_FILENAME, SourceKind.CFF_FILE, report)
    if text is not None:
        try:
            records.append(parse_cff(text))
            report.append(HarvestOutcome(SourceKind.CFF_FILE, "ok"))
        except MalformedCff as exc:
            logger.warning("ignoring unparseable %s: %s", CFF_FILENAME, exc)
            report.append(HarvestOutcome(SourceKind.CFF_FILE, "error", str(exc)))

    text = _soft_fetch(
        locator, token, transport, CODEMETA_FILENAME, SourceKind.CODEMETA_FILE, report
    )
    if text is not None:
        try:
            data = json.loads(text)
            if not isinstance(data, dict):
                raise ValueError("top-level value must be a JSON object")
            records.append(SourceRecord(source=SourceKind.CODEMETA_FILE, data=data))
            report.append(HarvestOutcome(SourceKind.CODEMETA_FILE, "ok"))
        except ValueError as exc:
            logger.warning("ignoring unparseable %s: %s", CODEMETA_FILENAME, exc)
            report.append(HarvestOutcome(SourceKind.CODEMETA_FILE, "error", str(exc)))

    return records, report


def _soft_fetch(
    locator: RepoLocator,
    token: AuthToken,
    transport: HttpTransport,
    path: str,
    source: SourceKind,
    report: list[HarvestOutcome],
) -> str | None:
    try:
        text = fetch_repo_file(locator, token, transport, path)
    except HarvestError as exc:
        logger.warning("could not fetch %s: %s", path, exc)
        report.append(HarvestOutcome(source, "error", str(exc)))
        return None
    if text is None:
        report.append(HarvestOutcome(source, "absent"))
        return None
    return text
