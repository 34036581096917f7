"""Session-oriented HTTP API: start -> extraction -> curation -> export.

A session holds one repository's merged record plus its provenance, curation
statuses, and harvest report. All curation state lives server-side; the web
UI is a stateless renderer of session views. Sessions live in memory with
optional write-through to a directory (one JSON file each) and expire after
an idle TTL. Tokens are request-scoped and never persisted.
"""

from __future__ import annotations

import json
import logging
import os
import secrets
import threading
import time
from dataclasses import dataclass, field as dataclass_field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import model
from .crosswalk import MappingRule, load_table_file
from .errors import (
    AuthError,
    HarvestError,
    InvariantViolation,
    MalformedJson,
    MissingName,
    NotFound,
    RateLimited,
    UnknownField,
    UnknownSession,
    UnsupportedUrl,
)
from .harvest import (
    AuthToken,
    FixtureTransport,
    HarvestOutcome,
    HttpTransport,
    RepoLocator,
    RequestsTransport,
    SourceKind,
    parse_repo_url,
)
from .merge import (
    DEFAULT_PRECEDENCE,
    DEFAULT_REVIEW_FIELDS,
    ProvenanceMap,
    classify_fields,
)
from .model import CodeMetaRecord, CurationStatus, Person, Role
from .pipeline import run_extraction
from .vocab import VocabularyKind, filter_vocabulary, load_default_vocabularies

logger = logging.getLogger(__name__)

DEFAULT_TOKEN_ENV = "SMECS_DEFAULT_TOKEN"
DEFAULT_SESSION_TTL = 24 * 3600.0


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    default_token: str | None = None
    precedence: tuple[SourceKind, ...] = DEFAULT_PRECEDENCE
    review_fields: frozenset[str] = DEFAULT_REVIEW_FIELDS
    session_dir: Path | None = None
    session_ttl_seconds: float = DEFAULT_SESSION_TTL
    fixtures_dir: Path | None = None
    static_dir: Path | None = None
    vocab_dir: Path | None = None
    crosswalk_github: Path | None = None
    crosswalk_cff: Path | None = None

    @classmethod
    def from_file(cls, path: str | Path, **overrides: Any) -> "ServiceConfig":
        """Read a JSON config file; keyword overrides win, env token wins over both."""
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        values: dict[str, Any] = {}
        if "host" in raw:
            values["host"] = str(raw["host"])
        if "port" in raw:
            values["port"] = int(raw["port"])
        if "default_token" in raw:
            values["default_token"] = raw["default_token"]
        if "precedence" in raw:
            values["precedence"] = tuple(SourceKind(v) for v in raw["precedence"])
        if "review_fields" in raw:
            values["review_fields"] = frozenset(raw["review_fields"])
        if "session_ttl_hours" in raw:
            values["session_ttl_seconds"] = float(raw["session_ttl_hours"]) * 3600.0
        for key in ("session_dir", "fixtures_dir", "static_dir", "vocab_dir",
                    "crosswalk_github", "crosswalk_cff"):
            if raw.get(key):
                values[key] = Path(raw[key])
        values.update({k: v for k, v in overrides.items() if v is not None})
        config = cls(**values)
        return config.with_env_token()

    def with_env_token(self) -> "ServiceConfig":
        env_token = os.environ.get(DEFAULT_TOKEN_ENV)
        if env_token:
            return replace(self, default_token=env_token)
        return self

    def resolve_token(self, user_token: str | None) -> AuthToken:
        if user_token:
            return AuthToken.user(user_token)
        if self.default_token:
            return AuthToken.server_default(self.default_token)
        return AuthToken.none()

    def crosswalk_tables(self) -> Mapping[SourceKind, list[MappingRule]] | None:
        if self.crosswalk_github is None and self.crosswalk_cff is None:
            return None
        from .crosswalk import builtin_tables

        tables = builtin_tables()
        if self.crosswalk_github is not None:
            tables[SourceKind.GITHUB_API] = load_table_file(self.crosswalk_github)
        if self.crosswalk_cff is not None:
            tables[SourceKind.CFF_FILE] = load_table_file(self.crosswalk_cff)
        return tables


# ---------------------------------------------------------------------------
# sessions


def _iso(epoch: float) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class Session:
    id: str
    locator: RepoLocator | None
    record: CodeMetaRecord
    provenance: ProvenanceMap
    statuses: dict[str, CurationStatus]
    report: list[HarvestOutcome]
    edits: set[str] = dataclass_field(default_factory=set)
    created_at: float = dataclass_field(default_factory=time.time)
    modified_at: float = dataclass_field(default_factory=time.time)

    def touch(self) -> None:
        self.modified_at = max(time.time(), self.modified_at)

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "locator": (
                {"host": self.locator.host, "owner": self.locator.owner, "name": self.locator.name}
                if self.locator
                else None
            ),
            "record": model.record_to_json(self.record),
            "provenance": self.provenance.to_json(),
            "statuses": {name: status.value for name, status in self.statuses.items()},
            "report": [entry.to_json() for entry in self.report],
            "edits": sorted(self.edits),
            "createdAt": self.created_at,
            "modifiedAt": self.modified_at,
        }

    @classmethod
    def from_json(cls, value: Mapping[str, Any]) -> "Session":
        locator = None
        if value.get("locator"):
            loc = value["locator"]
            locator = RepoLocator(host=loc["host"], owner=loc["owner"], name=loc["name"])
        return cls(
            id=value["id"],
            locator=locator,
            record=model.record_from_json(value["record"]),
            provenance=ProvenanceMap.from_json(value.get("provenance", {})),
            statuses={
                name: CurationStatus(status)
                for name, status in value.get("statuses", {}).items()
            },
            report=[
                HarvestOutcome(SourceKind(e["source"]), e["outcome"], e.get("detail"))
                for e in value.get("report", [])
            ],
            edits=set(value.get("edits", [])),
            created_at=float(value.get("createdAt", time.time())),
            modified_at=float(value.get("modifiedAt", time.time())),
        )


class SessionStore:
    """In-memory sessions with optional write-through files and idle expiry.

    Mutations are serialized per session; reads and distinct sessions may
    proceed concurrently.
    """

    def __init__(self, directory: Path | None = None, ttl_seconds: float = DEFAULT_SESSION_TTL):
        self._directory = directory
        self._ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()
        if directory is not None:
            directory.mkdir(parents=True, exist_ok=True)
            for path in sorted(directory.glob("*.json")):
                try:
                    session = Session.from_json(json.loads(path.read_text(encoding="utf-8")))
                except (ValueError, KeyError):
                    logger.warning("skipping unreadable session file %s", path)
                    continue
                self._sessions[session.id] = session
                self._locks[session.id] = threading.Lock()

    def _sweep(self) -> None:
        now = time.time()
        expired = [
            sid
            for sid, session in self._sessions.items()
            if now - session.modified_at > self._ttl
        ]
        for sid in expired:
            self._sessions.pop(sid, None)
            self._locks.pop(sid, None)
            if self._directory is not None:
                (self._directory / f"{sid}.json").unlink(missing_ok=True)

    def _persist(self, session: Session) -> None:
        if self._directory is None:
            return
        target = self._directory / f"{session.id}.json"
        tmp = target.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(session.to_json(), ensure_ascii=False), encoding="utf-8")
        tmp.replace(target)

    def add(self, session: Session) -> Session:
        with self._store_lock:
            self._sweep()
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
            self._persist(session)
        return session

    def get(self, session_id: str) -> Session:
        with self._store_lock:
            self._sweep()
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id!r} (it may have expired)")
        return session

    def mutate(self, session_id: str, fn: Any) -> Session:
        with self._store_lock:
            self._sweep()
            session = self._sessions.get(session_id)
            lock = self._locks.get(session_id)
        if session is None or lock is None:
            raise UnknownSession(f"no session {session_id!r} (it may have expired)")
        with lock:
            fn(session)
            session.touch()
            self._persist(session)
        return session

    @staticmethod
    def new_id() -> str:
        return secrets.token_urlsafe(16)


# ---------------------------------------------------------------------------
# field edits

_PERSON_EDIT_FIELDS = ("givenName", "familyName", "email", "id", "affiliation")


def _text_or_none(field_name: str, value: Any) -> str | None:
    if value is None:
        return None
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = str(value)
    if not isinstance(value, str):
        raise InvariantViolation(f"value for {field_name} must be text")
    return value if value.strip() else None


def _edit_scalar(record: CodeMetaRecord, field_name: str, value: Any) -> CodeMetaRecord:
    text = _text_or_none(field_name, value)
    if text is not None:
        if field_name == "license":
            text = model.normalize_spdx(text)
        elif field_name in model.DATE_FIELDS:
            text = model.truncate_date(text)
    return record.with_fields(**{field_name: text})


def _edit_list(record: CodeMetaRecord, field_name: str, value: Any) -> CodeMetaRecord:
    if value is None:
        return record.with_fields(**{field_name: ()})
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InvariantViolation(f"value for {field_name} must be a list of text entries")
    cleaned = model.dedupe(v.strip() for v in value if v.strip())
    return record.with_fields(**{field_name: cleaned})


def _require_person(record: CodeMetaRecord, index_text: str) -> int:
    try:
        index = int(index_text)
    except ValueError:
        raise UnknownField(f"invalid person index {index_text!r}") from None
    if not 0 <= index < len(record.persons):
        raise UnknownField(f"no person at index {index}")
    return index


def _checked_person(person: Person) -> Person:
    if not person.roles:
        raise InvariantViolation(
            "a person needs at least one role; deselecting both is not allowed"
        )
    if not person.is_identifiable():
        raise InvariantViolation("a person needs a family name, email, or id")
    return person


def _edit_persons(record: CodeMetaRecord, parts: list[str], value: Any) -> CodeMetaRecord:
    persons = list(record.persons)
    if parts == ["add"]:
        if not isinstance(value, Mapping):
            raise InvariantViolation("adding a person requires an object of person fields")
        payload = dict(value)
        payload.setdefault("roles", ["author"])
        try:
            person = model.person_from_json(payload)
        except ValueError as exc:
            raise InvariantViolation(f"unknown role in {payload.get('roles')!r}") from exc
        persons.append(_checked_person(person))
        return record.with_fields(persons=tuple(persons))

    if len(parts) != 2:
        raise UnknownField("person edits use persons/add, persons/<i>/<field>, "
                           "persons/<i>/roles, or persons/<i>/remove")
    index = _require_person(record, parts[0])
    op = parts[1]
    if op == "remove":
        del persons[index]
        return record.with_fields(persons=tuple(persons))
    if op == "roles":
        if not isinstance(value, list):
            raise InvariantViolation("roles must be a list of role names")
        try:
            roles = frozenset(Role(r) for r in value)
        except ValueError:
            raise InvariantViolation(f"unknown role in {value!r}") from None
        persons[index] = _checked_person(replace(persons[index], roles=roles))
        return record.with_fields(persons=tuple(persons))
    if op in _PERSON_EDIT_FIELDS:
        text = _text_or_none(op, value)
        persons[index] = _checked_person(replace(persons[index], **{op: text}))
        return record.with_fields(persons=tuple(persons))
    raise UnknownField(f"unknown person operation {op!r}")


def apply_field_edit(
    session: Session,
    path: str,
    value: Any,
    review_fields: frozenset[str] = DEFAULT_REVIEW_FIELDS,
) -> None:
    """Apply one curation edit, then re-derive statuses from the edit history."""
    parts = [p for p in path.split("/") if p]
    if not parts:
        raise UnknownField("empty field path")
    root = parts[0]
    if root == "persons":
        if len(parts) == 1:
            raise UnknownField("persons cannot be replaced wholesale; use persons/add etc.")
        session.record = _edit_persons(session.record, parts[1:], value)
    elif root in model.LIST_FIELDS and len(parts) == 1:
        session.record = _edit_list(session.record, root, value)
    elif root in model.SCALAR_FIELDS and len(parts) == 1:
        session.record = _edit_scalar(session.record, root, value)
    else:
        raise UnknownField(f"unknown field path {path!r}")
    session.edits.add(root)
    session.statuses = classify_fields(
        session.record, session.provenance, session.edits, review_fields
    )


# ---------------------------------------------------------------------------
# the app


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.detail = detail


_ERROR_MAP: tuple[tuple[type[Exception], int, str], ...] = (
    (UnsupportedUrl, 400, "unsupported-url"),
    (NotFound, 404, "not-found"),
    (AuthError, 401, "auth-required"),
    (RateLimited, 429, "rate-limited"),
    (UnknownSession, 404, "unknown-session"),
    (UnknownField, 400, "unknown-field"),
    (InvariantViolation, 409, "invariant-violation"),
    (MalformedJson, 400, "malformed-json"),
    (MissingName, 409, "missing-name"),
    (HarvestError, 502, "transport-error"),
)


def _to_api_error(exc: Exception) -> ApiError:
    for exc_type, status, code in _ERROR_MAP:
        if isinstance(exc, exc_type):
            return ApiError(status, code, str(exc))
    raise exc


class CreateSessionBody(BaseModel):
    url: str
    token: str | None = None


class PatchFieldBody(BaseModel):
    path: str
    value: Any = None


def create_app(
    config: ServiceConfig | None = None, transport: HttpTransport | None = None
) -> FastAPI:
    config = (config or ServiceConfig()).with_env_token()
    vocabs = load_default_vocabularies(config.vocab_dir)
    tables = config.crosswalk_tables()
    store = SessionStore(config.session_dir, config.session_ttl_seconds)
    if transport is None:
        transport = (
            FixtureTransport(config.fixtures_dir)
            if config.fixtures_dir is not None
            else RequestsTransport()
        )

    app = FastAPI(title="smecs", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError) -> JSONResponse:
        payload = {"error": str(exc), "code": exc.code, "detail": exc.detail}
        return JSONResponse(payload, status_code=exc.status)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            {"error": "invalid request", "code": "validation-error", "detail": str(exc)},
            status_code=422,
        )

    def session_view(session: Session) -> dict[str, Any]:
        violations = model.validate_record(session.record, vocabs)
        return {
            "id": session.id,
            "record": model.record_to_json(session.record),
            "statuses": {name: status.value for name, status in session.statuses.items()},
            "provenance": session.provenance.to_json(),
            "report": [entry.to_json() for entry in session.report],
            "violations": [
                {"field": v.field, "rule": v.rule, "message": v.message} for v in violations
            ],
            "createdAt": _iso(session.created_at),
            "modifiedAt": _iso(session.modified_at),
        }

    @app.get("/api/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict[str, Any]:
        try:
            locator = parse_repo_url(body.url)
            token = config.resolve_token(body.token)
            result = run_extraction(
                locator,
                token,
                transport,
                precedence=config.precedence,
                review_fields=config.review_fields,
                tables=tables,
            )
        except (UnsupportedUrl, HarvestError) as exc:
            raise _to_api_error(exc) from exc
        session = Session(
            id=SessionStore.new_id(),
            locator=locator,
            record=result.record,
            provenance=result.provenance,
            statuses=result.statuses,
            report=result.harvest_report,
        )
        store.add(session)
        return session_view(session)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict[str, Any]:
        try:
            session = store.get(session_id)
        except UnknownSession as exc:
            raise _to_api_error(exc) from exc
        return session_view(session)

    @app.patch("/api/sessions/{session_id}/fields")
    def patch_field(session_id: str, body: PatchFieldBody) -> dict[str, Any]:
        try:
            session = store.mutate(
                session_id,
                lambda s: apply_field_edit(s, body.path, body.value, config.review_fields),
            )
        except (UnknownSession, UnknownField, InvariantViolation) as exc:
            raise _to_api_error(exc) from exc
        return session_view(session)

    @app.post("/api/sessions/import", status_code=201)
    async def import_session(request: Request, session: str | None = None) -> dict[str, Any]:
        text = (await request.body()).decode("utf-8", errors="replace")
        try:
            record, _ = model.parse_codemeta_report(text)
        except MalformedJson as exc:
            raise _to_api_error(exc) from exc
        provenance = ProvenanceMap(
            fields={
                name: SourceKind.CODEMETA_FILE
                for name in record.populated_fields()
                if name != "persons"
            },
            persons={
                model.person_identity(p): frozenset({SourceKind.CODEMETA_FILE})
                for p in record.persons
            },
        )
        statuses = classify_fields(record, provenance, (), config.review_fields)
        report = [HarvestOutcome(SourceKind.CODEMETA_FILE, "ok", "imported")]

        if session is not None:
            def overlay(existing: Session) -> None:
                existing.record = record
                existing.provenance = provenance
                existing.statuses = dict(statuses)
                existing.report = list(report)
                existing.edits.clear()

            try:
                updated = store.mutate(session, overlay)
            except UnknownSession as exc:
                raise _to_api_error(exc) from exc
            return session_view(updated)

        created = Session(
            id=SessionStore.new_id(),
            locator=None,
            record=record,
            provenance=provenance,
            statuses=dict(statuses),
            report=report,
        )
        store.add(created)
        return session_view(created)

    @app.get("/api/sessions/{session_id}/export")
    def export_session(session_id: str) -> Response:
        try:
            session = store.get(session_id)
            text = model.export_codemeta(session.record)
        except (UnknownSession, MissingName) as exc:
            raise _to_api_error(exc) from exc
        return Response(
            content=text,
            media_type="application/json",
            headers={"Content-Disposition": 'attachment; filename="codemeta.json"'},
        )

    @app.get("/api/vocab/{kind}")
    def vocab_filter(
        kind: str,
        q: str = "",
        limit: int = Query(default=20, ge=1, le=200),
    ) -> dict[str, Any]:
        kinds = {k.value: k for k in VocabularyKind}
        if kind not in kinds:
            raise ApiError(404, "unknown-vocabulary", f"no vocabulary {kind!r}")
        vocabulary = vocabs.by_kind(kinds[kind])
        entries = filter_vocabulary(vocabulary, q, limit)
        return {"entries": [entry.to_json() for entry in entries]}

    if config.static_dir is not None and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(config.static_dir), html=True), name="ui")

    return app
