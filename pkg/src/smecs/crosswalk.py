"""Declarative crosswalks from raw source records to sparse CodeMeta records.

Each source kind has a mapping table: an ordered list of rules
{source_path, target, transform}. Tables are data, not code — the built-in
GitHub and CFF tables ship as JSON inside the package and callers may load
replacements from disk. CodeMeta files need no crosswalk and map through the
regular CodeMeta import path.

A rule fires when its source path resolves to a usable value; unresolved
paths are skipped, and every rule's fate lands in the firing report, whose
fired targets always equal the populated fields of the output.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Sequence

from .harvest import SourceKind, SourceRecord
from .model import (
    CodeMetaRecord,
    LIST_FIELDS,
    DATE_FIELDS,
    FORM_FIELDS,
    Person,
    Role,
    dedupe,
    normalize_spdx,
    parse_codemeta_value,
    truncate_date,
)

TRANSFORMS = (
    "identity",
    "date-truncate",
    "spdx-normalize",
    "language-map-keys",
    "person-list",
    "url-derive",
)

_SEGMENT = re.compile(r"^([^\[\]]+?)(?:\[([^=\]]+)=([^\]]+)\])?$")


@dataclass(frozen=True)
class MappingRule:
    source_path: str
    target: str
    transform: str
    param: str | None = None
    fallback: bool = False


@dataclass(frozen=True)
class RuleOutcome:
    source_path: str
    target: str
    fired: bool
    note: str | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "source_path": self.source_path,
            "target": self.target,
            "fired": self.fired,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class PartialRecord:
    """One source's contribution: a sparse record plus the rule-firing report."""

    record: CodeMetaRecord
    source: SourceKind
    report: tuple[RuleOutcome, ...] = ()

    def fired_targets(self) -> set[str]:
        return {entry.target for entry in self.report if entry.fired}


def load_mapping_table(entries: Sequence[Mapping[str, Any]]) -> list[MappingRule]:
    """Validate and freeze a table: transforms known, duplicate targets only as fallbacks."""
    rules: list[MappingRule] = []
    seen_targets: set[str] = set()
    for entry in entries:
        rule = MappingRule(
            source_path=entry["source_path"],
            target=entry["target"],
            transform=entry["transform"],
            param=entry.get("param"),
            fallback=bool(entry.get("fallback", False)),
        )
        if rule.transform not in TRANSFORMS:
            raise ValueError(f"unknown transform {rule.transform!r} for {rule.target}")
        if rule.target not in FORM_FIELDS:
            raise ValueError(f"unknown crosswalk target {rule.target!r}")
        if rule.target in seen_targets and not rule.fallback:
            raise ValueError(
                f"duplicate target {rule.target!r} without a fallback marker"
            )
        seen_targets.add(rule.target)
        rules.append(rule)
    return rules


def load_table_file(path: str | Path) -> list[MappingRule]:
    return load_mapping_table(json.loads(Path(path).read_text(encoding="utf-8")))


def _builtin(name: str) -> list[MappingRule]:
    text = resources.files("smecs.data").joinpath(name).read_text(encoding="utf-8")
    return load_mapping_table(json.loads(text))


def builtin_tables() -> dict[SourceKind, list[MappingRule]]:
    return {
        SourceKind.GITHUB_API: _builtin("crosswalk_github.json"),
        SourceKind.CFF_FILE: _builtin("crosswalk_cff.json"),
    }


# ---------------------------------------------------------------------------
# path resolution and transforms


def resolve_path(data: Any, path: str) -> Any:
    """Walk a dotted path; segments may filter lists: identifiers[type=doi].value."""
    current = data
    for segment in path.split("."):
        match = _SEGMENT.match(segment)
        if match is None:
            return None
        name, attr, wanted = match.groups()
        if not isinstance(current, Mapping) or name not in current:
            return None
        current = current[name]
        if attr is not None:
            if not isinstance(current, list):
                return None
            current = next(
                (
                    item
                    for item in current
                    if isinstance(item, Mapping) and str(item.get(attr)) == wanted
                ),
                None,
            )
            if current is None:
                return None
    return current


def _scalar_text(value: Any) -> str | None:
    if isinstance(value, str):
        return value if value else None
    if isinstance(value, bool) or value is None:
        return None
    if isinstance(value, (int, float)):
        return str(value)
    return None


def _text_list(value: Any) -> tuple[str, ...] | None:
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list):
        return None
    items = [t for t in (_scalar_text(item) for item in value) if t is not None]
    return dedupe(items) if items else None


def _languages_by_bytes(value: Any) -> tuple[str, ...] | None:
    if not isinstance(value, Mapping) or not value:
        return None
    sizes = {
        str(name): size if isinstance(size, (int, float)) and not isinstance(size, bool) else 0
        for name, size in value.items()
    }
    ordered = sorted(sizes, key=lambda name: (-sizes[name], name))
    return tuple(ordered)


def _person_from_entry(entry: Any, role: Role) -> Person | None:
    if isinstance(entry, str):
        return Person(familyName=entry, roles=frozenset({role})) if entry else None
    if not isinstance(entry, Mapping):
        return None
    if "login" in entry:
        login = _scalar_text(entry.get("login"))
        if login is None:
            return None
        return Person(familyName=login, roles=frozenset({role}))
    family = _scalar_text(entry.get("family-names"))
    if family is None:
        family = _scalar_text(entry.get("name"))
    person = Person(
        givenName=_scalar_text(entry.get("given-names")),
        familyName=family,
        email=_scalar_text(entry.get("email")),
        id=_scalar_text(entry.get("orcid")),
        affiliation=_scalar_text(entry.get("affiliation")),
        roles=frozenset({role}),
    )
    return person if person.is_identifiable() else None


def _person_list(value: Any, role_name: str | None) -> tuple[Person, ...] | None:
    role = Role(role_name) if role_name else Role.CONTRIBUTOR
    if not isinstance(value, list):
        return None
    persons = [p for p in (_person_from_entry(e, role) for e in value) if p is not None]
    return tuple(persons) if persons else None


def _apply_transform(rule: MappingRule, value: Any) -> Any:
    if rule.transform == "person-list":
        return _person_list(value, rule.param)
    if rule.target in LIST_FIELDS:
        if rule.transform == "language-map-keys":
            return _languages_by_bytes(value)
        return _text_list(value)
    text = _scalar_text(value)
    if text is None:
        return None
    if rule.transform == "spdx-normalize":
        return normalize_spdx(text)
    if rule.transform == "date-truncate" or rule.target in DATE_FIELDS:
        return truncate_date(text)
    if rule.transform == "url-derive":
        return text.rstrip("/") + (rule.param or "")
    return text


# ---------------------------------------------------------------------------
# crosswalk application


def apply_crosswalk(
    src: SourceRecord,
    tables: Mapping[SourceKind, Sequence[MappingRule]] | None = None,
) -> PartialRecord:
    """Map one source record into a sparse CodeMeta record; never fails.

    CodeMeta files map through the regular import path (no crosswalk); the
    synthesized report then carries one fired entry per populated field so
    the traceability property holds for every source kind.
    """
    if src.source is SourceKind.CODEMETA_FILE:
        record, _ = parse_codemeta_value(src.data)
        report = tuple(
            RuleOutcome(field, field, True, "no crosswalk needed")
            for field in record.populated_fields()
        )
        return PartialRecord(record=record, source=src.source, report=report)

    table = (tables or builtin_tables())[src.source]
    fields: dict[str, Any] = {}
    outcomes: list[RuleOutcome] = []
    for rule in table:
        if rule.target in fields:
            outcomes.append(
                RuleOutcome(rule.source_path, rule.target, False, "target already populated")
            )
            continue
        raw = resolve_path(src.data, rule.source_path)
        if raw is None:
            outcomes.append(
                RuleOutcome(rule.source_path, rule.target, False, "source path not present")
            )
            continue
        value = _apply_transform(rule, raw)
        if value is None:
            outcomes.append(
                RuleOutcome(rule.source_path, rule.target, False, "empty or unusable value")
            )
            continue
        fields[rule.target] = value
        outcomes.append(RuleOutcome(rule.source_path, rule.target, True))

    persons = fields.pop("persons", ())
    record = CodeMetaRecord(persons=persons, **fields)
    return PartialRecord(record=record, source=src.source, report=tuple(outcomes))
