"""Unified CodeMeta record model: validation, JSON-LD export, and import.

The record is a flat value object whose attribute names are the CodeMeta
property names themselves, so crosswalk targets, curation-form field paths,
and exported JSON keys are all one spelling. Authors and contributors live in
a single ``persons`` list where each person carries a role set; the exported
file splits that list back into ``author`` / ``contributor`` arrays.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field, replace
from datetime import date
from typing import TYPE_CHECKING, Any, Iterable, Mapping, Sequence, TypeVar
from urllib.parse import urlsplit

from .errors import MalformedJson, MissingName

if TYPE_CHECKING:
    from .vocab import VocabularySet

CODEMETA_CONTEXT = "https://doi.org/10.5063/schema/codemeta-2.0"
CODEMETA_TYPE = "SoftwareSourceCode"
SPDX_URL_PREFIXES = ("https://spdx.org/licenses/", "http://spdx.org/licenses/")

SCALAR_FIELDS = (
    "name",
    "description",
    "version",
    "codeRepository",
    "url",
    "issueTracker",
    "downloadUrl",
    "identifier",
    "license",
    "dateCreated",
    "dateModified",
    "datePublished",
    "developmentStatus",
)
LIST_FIELDS = ("programmingLanguage", "keywords")
URL_FIELDS = ("codeRepository", "url", "issueTracker", "downloadUrl")
DATE_FIELDS = ("dateCreated", "dateModified", "datePublished")

# Every field of the curation form, in form order. The status map covers all
# of these whether populated or not.
FORM_FIELDS = (
    "name",
    "description",
    "version",
    "codeRepository",
    "url",
    "issueTracker",
    "downloadUrl",
    "identifier",
    "license",
    "programmingLanguage",
    "keywords",
    "dateCreated",
    "dateModified",
    "datePublished",
    "developmentStatus",
    "persons",
)

_DATE_PREFIX = re.compile(r"^\d{4}-\d{2}-\d{2}")

_PERSON_SCALARS = ("givenName", "familyName", "email", "id", "affiliation")


class Role(enum.Enum):
    AUTHOR = "author"
    CONTRIBUTOR = "contributor"


class CurationStatus(enum.Enum):
    MISSING = "missing"
    REVIEW = "review"
    EXTRACTED = "extracted"
    EDITED = "edited"


@dataclass(frozen=True)
class Person:
    """One agent with a non-empty role set drawn from {author, contributor}.

    A person must be identifiable: at least one of familyName, email, or id
    (typically an ORCID URL) is present.
    """

    givenName: str | None = None
    familyName: str | None = None
    email: str | None = None
    id: str | None = None
    affiliation: str | None = None
    roles: frozenset[Role] = frozenset()

    def is_identifiable(self) -> bool:
        return bool(self.familyName or self.email or self.id)


@dataclass(frozen=True)
class CodeMetaRecord:
    """Sparse CodeMeta record; absent fields are None / empty tuples.

    Absence is distinct from the empty string. ``extras`` carries unknown
    keys from imported CodeMeta documents through export unchanged.
    """

    name: str | None = None
    description: str | None = None
    version: str | None = None
    codeRepository: str | None = None
    url: str | None = None
    issueTracker: str | None = None
    downloadUrl: str | None = None
    identifier: str | None = None
    license: str | None = None
    programmingLanguage: tuple[str, ...] = ()
    keywords: tuple[str, ...] = ()
    dateCreated: str | None = None
    dateModified: str | None = None
    datePublished: str | None = None
    developmentStatus: str | None = None
    persons: tuple[Person, ...] = ()
    extras: dict[str, Any] = field(default_factory=dict)

    def get(self, field_name: str) -> Any:
        return getattr(self, field_name)

    def with_fields(self, **changes: Any) -> "CodeMetaRecord":
        return replace(self, **changes)

    def populated_fields(self) -> list[str]:
        """Form fields that carry a value (lists and persons when non-empty)."""
        return [f for f in FORM_FIELDS if field_present(self, f)]


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str
    message: str


def field_present(record: CodeMetaRecord, field_name: str) -> bool:
    value = record.get(field_name)
    if field_name in LIST_FIELDS or field_name == "persons":
        return bool(value)
    return value is not None


def truncate_date(value: str) -> str:
    """Reduce an ISO-8601 timestamp to its YYYY-MM-DD prefix when it has one."""
    if _DATE_PREFIX.match(value):
        return value[:10]
    return value


def normalize_spdx(value: str | None) -> str | None:
    """Strip SPDX URL forms down to the bare identifier.

    "NOASSERTION" and empty strings mean "no statement" and normalize to
    absent so they never outrank a real license during merging. Idempotent.
    """
    if value is None:
        return None
    text = value.strip()
    for prefix in SPDX_URL_PREFIXES:
        if text.startswith(prefix):
            text = text[len(prefix):]
            break
    text = text.rstrip("/")
    if text.endswith(".html"):
        text = text[: -len(".html")]
    if not text or text.upper() == "NOASSERTION":
        return None
    return text


def dedupe(values: Iterable[str]) -> tuple[str, ...]:
    seen: set[str] = set()
    out: list[str] = []
    for v in values:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return tuple(out)


# ---------------------------------------------------------------------------
# person identity and grouping


def person_identity(person: Person) -> str:
    """Canonical identity label: ORCID/id, else email, else the name pair."""
    if person.id:
        return f"id:{person.id.strip().lower()}"
    if person.email:
        return f"email:{person.email.strip().lower()}"
    given = (person.givenName or "").strip().lower()
    family = (person.familyName or "").strip().lower()
    return f"name:{given}|{family}"


def _identity_keys(person: Person) -> list[tuple[str, Any]]:
    keys: list[tuple[str, Any]] = []
    if person.id:
        keys.append(("id", person.id.strip().lower()))
    if person.email:
        keys.append(("email", person.email.strip().lower()))
    if person.givenName or person.familyName:
        keys.append(
            (
                "name",
                (
                    (person.givenName or "").strip().lower(),
                    (person.familyName or "").strip().lower(),
                ),
            )
        )
    return keys


TagT = TypeVar("TagT")


def merge_tagged_persons(
    tagged: Iterable[tuple[Person, TagT]],
) -> list[tuple[Person, tuple[TagT, ...]]]:
    """Group persons that share any identity key and collapse each group.

    Two entries describe the same person when they agree on id, email, or the
    (givenName, familyName) pair, all compared case-insensitively; sharing one
    key is enough, so an ORCID-bearing entry and an ORCID-less entry with the
    same email still collapse. Within a group, roles are unioned and scalar
    fields fill first-non-empty in input order, so callers feed entries in
    source-precedence order. Output: persons holding the author role first
    (stable by first appearance), then pure contributors.
    """
    groups: list[list[tuple[int, Person, TagT]]] = []
    key_to_group: dict[tuple[str, Any], int] = {}

    for index, (person, tag) in enumerate(tagged):
        keys = _identity_keys(person)
        hits = sorted({key_to_group[k] for k in keys if k in key_to_group})
        if not hits:
            target = len(groups)
            groups.append([])
        else:
            target = hits[0]
            for other in hits[1:]:
                groups[target].extend(groups[other])
                groups[other] = []
            groups[target].sort(key=lambda m: m[0])
        groups[target].append((index, person, tag))
        for k in keys:
            key_to_group[k] = target
        # re-point keys of swallowed groups
        if len(hits) > 1:
            for k, g in key_to_group.items():
                if g in hits[1:]:
                    key_to_group[k] = target

    collapsed: list[tuple[int, Person, tuple[TagT, ...]]] = []
    for members in groups:
        if not members:
            continue
        roles: set[Role] = set()
        scalars: dict[str, str | None] = {name: None for name in _PERSON_SCALARS}
        tags: list[TagT] = []
        for _, person, tag in members:
            roles.update(person.roles)
            for name in _PERSON_SCALARS:
                if scalars[name] is None and getattr(person, name):
                    scalars[name] = getattr(person, name)
            if tag not in tags:
                tags.append(tag)
        merged = Person(roles=frozenset(roles), **scalars)
        collapsed.append((members[0][0], merged, tuple(tags)))

    collapsed.sort(key=lambda item: (0 if Role.AUTHOR in item[1].roles else 1, item[0]))
    return [(person, tags) for _, person, tags in collapsed]


def fold_persons(persons: Iterable[Person]) -> tuple[Person, ...]:
    return tuple(p for p, _ in merge_tagged_persons((p, None) for p in persons))


# ---------------------------------------------------------------------------
# validation

RULE_NAME_PRESENT = "name-present"
RULE_LICENSE_IN_SPDX = "license-in-SPDX"
RULE_URL_WELL_FORMED = "URL-well-formed"
RULE_DATE_ISO8601 = "date-ISO-8601"
RULE_PERSON_INVARIANTS = "person-invariants"
RULE_WRONG_TYPE = "wrong-type"


def _url_ok(value: str) -> bool:
    parts = urlsplit(value)
    return parts.scheme in ("http", "https") and bool(parts.netloc)


def _date_ok(value: str) -> bool:
    if not _DATE_PREFIX.match(value):
        return False
    try:
        date.fromisoformat(value[:10])
    except ValueError:
        return False
    return True


def validate_record(record: CodeMetaRecord, vocab: "VocabularySet") -> list[Violation]:
    """Check the record against the form rules; reports, never raises.

    ``vocab`` is a loaded vocabulary set exposing ``license_ids``. An empty
    list means the record is valid; name is the only required field.
    """
    violations: list[Violation] = []
    if record.name is None:
        violations.append(
            Violation("name", RULE_NAME_PRESENT, "a software name is required")
        )
    if record.license is not None and record.license not in vocab.license_ids:
        violations.append(
            Violation(
                "license",
                RULE_LICENSE_IN_SPDX,
                f"{record.license!r} is not a known SPDX license identifier",
            )
        )
    for field_name in URL_FIELDS:
        value = record.get(field_name)
        if value is not None and not _url_ok(value):
            violations.append(
                Violation(
                    field_name,
                    RULE_URL_WELL_FORMED,
                    f"{value!r} is not an http(s) URL with a host",
                )
            )
    for field_name in DATE_FIELDS:
        value = record.get(field_name)
        if value is not None and not _date_ok(value):
            violations.append(
                Violation(
                    field_name,
                    RULE_DATE_ISO8601,
                    f"{value!r} is not an ISO-8601 date (YYYY-MM-DD)",
                )
            )
    for index, person in enumerate(record.persons):
        if not person.roles:
            violations.append(
                Violation(
                    "persons",
                    RULE_PERSON_INVARIANTS,
                    f"person {index + 1} has no role; each person is an author, "
                    "a contributor, or both",
                )
            )
        if not person.is_identifiable():
            violations.append(
                Violation(
                    "persons",
                    RULE_PERSON_INVARIANTS,
                    f"person {index + 1} needs a family name, email, or id",
                )
            )
    return violations


# ---------------------------------------------------------------------------
# export


def _person_to_codemeta(person: Person) -> dict[str, Any]:
    out: dict[str, Any] = {"@type": "Person"}
    if person.id:
        out["@id"] = person.id
    if person.givenName:
        out["givenName"] = person.givenName
    if person.familyName:
        out["familyName"] = person.familyName
    if person.email:
        out["email"] = person.email
    if person.affiliation:
        out["affiliation"] = {"@type": "Organization", "name": person.affiliation}
    return out


def _canonical_person_order(persons: Sequence[Person]) -> list[Person]:
    # Export must be a function of the record's person *set*, so order is
    # derived from content, not from list position.
    return sorted(
        persons,
        key=lambda p: (0 if Role.AUTHOR in p.roles else 1, person_identity(p)),
    )


def export_codemeta(record: CodeMetaRecord) -> str:
    """Serialize to the CodeMeta 2.0 JSON-LD file format, deterministically.

    Key order is fixed: @context, @type, the schema fields, author and
    contributor arrays (a person with both roles appears in both), then any
    imported extra keys sorted by name. Absent fields are omitted entirely.
    The output ends with a single newline.
    """
    if record.name is None:
        raise MissingName("cannot export a record without a name")
    doc: dict[str, Any] = {
        "@context": CODEMETA_CONTEXT,
        "@type": CODEMETA_TYPE,
    }
    for field_name in SCALAR_FIELDS:
        value = record.get(field_name)
        if value is None:
            continue
        if field_name == "license":
            value = SPDX_URL_PREFIXES[0] + value
        doc[field_name] = value
    for field_name in LIST_FIELDS:
        value = record.get(field_name)
        if value:
            doc[field_name] = list(value)
    ordered = _canonical_person_order(record.persons)
    authors = [p for p in ordered if Role.AUTHOR in p.roles]
    contributors = [p for p in ordered if Role.CONTRIBUTOR in p.roles]
    if authors:
        doc["author"] = [_person_to_codemeta(p) for p in authors]
    if contributors:
        doc["contributor"] = [_person_to_codemeta(p) for p in contributors]
    for key in sorted(record.extras):
        if key not in doc:
            doc[key] = record.extras[key]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# import

_RECOGNIZED_KEYS = (
    frozenset(SCALAR_FIELDS)
    | frozenset(LIST_FIELDS)
    | {"@context", "@type", "author", "contributor"}
)


def _text_value(value: Any) -> str | None:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return str(value)
    return None


def _parse_person_entry(value: Any, role: Role) -> Person | None:
    if isinstance(value, str):
        return Person(familyName=value, roles=frozenset({role})) if value else None
    if not isinstance(value, Mapping):
        return None
    affiliation = value.get("affiliation")
    if isinstance(affiliation, Mapping):
        affiliation = affiliation.get("name")
    family = _text_value(value.get("familyName"))
    if family is None:
        family = _text_value(value.get("name"))
    person = Person(
        givenName=_text_value(value.get("givenName")),
        familyName=family,
        email=_text_value(value.get("email")),
        id=_text_value(value.get("@id")) or _text_value(value.get("id")),
        affiliation=_text_value(affiliation),
        roles=frozenset({role}),
    )
    return person if person.is_identifiable() else None


def _parse_string_list(value: Any) -> list[str] | None:
    """Accept a bare string, a list of strings, or objects with a name."""
    if isinstance(value, str):
        return [value]
    if not isinstance(value, list):
        return None
    out: list[str] = []
    for item in value:
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, Mapping) and isinstance(item.get("name"), str):
            out.append(item["name"])
        else:
            return None
    return out


def parse_codemeta_value(obj: Mapping[str, Any]) -> tuple[CodeMetaRecord, list[Violation]]:
    """Build a record from a decoded CodeMeta object.

    Wrong-typed fields are skipped and reported as violations rather than
    aborting the import; unknown keys land in the extras map untouched.
    """
    fields: dict[str, Any] = {}
    violations: list[Violation] = []
    extras: dict[str, Any] = {}

    for key, value in obj.items():
        if key in ("@context", "@type"):
            continue
        if key in SCALAR_FIELDS:
            text = _text_value(value)
            if text is None:
                violations.append(
                    Violation(key, RULE_WRONG_TYPE, f"expected text for {key}")
                )
                continue
            if key == "license":
                normalized = normalize_spdx(text)
                if normalized is not None:
                    fields[key] = normalized
            elif key in DATE_FIELDS:
                fields[key] = truncate_date(text)
            else:
                fields[key] = text
        elif key in LIST_FIELDS:
            items = _parse_string_list(value)
            if items is None:
                violations.append(
                    Violation(key, RULE_WRONG_TYPE, f"expected a list of text for {key}")
                )
                continue
            fields[key] = dedupe(items)
        elif key in ("author", "contributor"):
            continue  # handled below, in a fixed order
        else:
            extras[key] = value

    tagged: list[tuple[Person, None]] = []
    for key, role in (("author", Role.AUTHOR), ("contributor", Role.CONTRIBUTOR)):
        value = obj.get(key)
        if value is None:
            continue
        entries = value if isinstance(value, list) else [value]
        for item in entries:
            person = _parse_person_entry(item, role)
            if person is None:
                violations.append(
                    Violation(
                        key,
                        RULE_PERSON_INVARIANTS,
                        f"skipped unusable {key} entry: {item!r}",
                    )
                )
            else:
                tagged.append((person, None))
    persons = tuple(p for p, _ in merge_tagged_persons(tagged))

    record = CodeMetaRecord(persons=persons, extras=extras, **fields)
    return record, violations


def parse_codemeta_report(text: str) -> tuple[CodeMetaRecord, list[Violation]]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedJson(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(obj, dict):
        raise MalformedJson("top-level value must be a JSON object")
    return parse_codemeta_value(obj)


def parse_codemeta(text: str) -> CodeMetaRecord:
    """Parse a CodeMeta 2.0 document; see parse_codemeta_report for skipped-field details."""
    record, _ = parse_codemeta_report(text)
    return record


# ---------------------------------------------------------------------------
# structural equality


def _persons_by_identity(record: CodeMetaRecord) -> dict[str, Person]:
    return {person_identity(p): p for p in record.persons}


def records_equivalent(a: CodeMetaRecord, b: CodeMetaRecord) -> bool:
    """Field-by-field equality with persons compared as identity-keyed sets."""
    for field_name in SCALAR_FIELDS + LIST_FIELDS:
        if a.get(field_name) != b.get(field_name):
            return False
    if a.extras != b.extras:
        return False
    return _persons_by_identity(a) == _persons_by_identity(b)


# ---------------------------------------------------------------------------
# wire shape used by the service and CLI reports


def person_to_json(person: Person) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for name in _PERSON_SCALARS:
        value = getattr(person, name)
        if value is not None:
            out[name] = value
    out["roles"] = sorted(role.value for role in person.roles)
    return out


def person_from_json(value: Mapping[str, Any]) -> Person:
    roles = frozenset(Role(r) for r in value.get("roles", ()))
    return Person(
        givenName=value.get("givenName"),
        familyName=value.get("familyName"),
        email=value.get("email"),
        id=value.get("id"),
        affiliation=value.get("affiliation"),
        roles=roles,
    )


def record_to_json(record: CodeMetaRecord) -> dict[str, Any]:
    """Curation-form shape: unified persons list with role sets, plus extras."""
    out: dict[str, Any] = {}
    for field_name in SCALAR_FIELDS:
        value = record.get(field_name)
        if value is not None:
            out[field_name] = value
    for field_name in LIST_FIELDS:
        value = record.get(field_name)
        if value:
            out[field_name] = list(value)
    out["persons"] = [person_to_json(p) for p in record.persons]
    if record.extras:
        out["extras"] = dict(record.extras)
    return out


def record_from_json(value: Mapping[str, Any]) -> CodeMetaRecord:
    fields: dict[str, Any] = {}
    for field_name in SCALAR_FIELDS:
        if value.get(field_name) is not None:
            fields[field_name] = value[field_name]
    for field_name in LIST_FIELDS:
        if value.get(field_name):
            fields[field_name] = tuple(value[field_name])
    persons = tuple(person_from_json(p) for p in value.get("persons", ()))
    return CodeMetaRecord(
        persons=persons, extras=dict(value.get("extras", {})), **fields
    )
