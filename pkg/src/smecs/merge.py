"""Merge per-source partial records into one record with provenance.

Scalar and list fields follow a fixed source precedence — an explicit
codemeta.json is the authors' own statement, CITATION.cff is curated
citation metadata, and the hosting API is project telemetry — so
codemeta-file > cff-file > github-api, overridable via configuration.
Persons are different: the sources describe overlapping people sets
(authors in citation files, contributors in the API), so person lists are
unioned by identity instead of ranked.

classify_fields then assigns each curation-form field its status: missing
fields need manual input, URL-ish and keyword fields extracted from a
source deserve review, user-edited fields are tracked as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .crosswalk import PartialRecord
from .harvest import SourceKind
from .model import (
    CodeMetaRecord,
    CurationStatus,
    FORM_FIELDS,
    Person,
    field_present,
    merge_tagged_persons,
    person_identity,
)

DEFAULT_PRECEDENCE: tuple[SourceKind, ...] = (
    SourceKind.CODEMETA_FILE,
    SourceKind.CFF_FILE,
    SourceKind.GITHUB_API,
)

# Fields whose extracted values are suggestions worth a human look:
# URLs and keywords, per the review highlighting of the curation form.
DEFAULT_REVIEW_FIELDS: frozenset[str] = frozenset(
    {"url", "issueTracker", "downloadUrl", "codeRepository", "keywords"}
)


@dataclass(frozen=True)
class ProvenanceMap:
    """Which source supplied each merged field; persons carry source sets."""

    fields: dict[str, SourceKind] = field(default_factory=dict)
    persons: dict[str, frozenset[SourceKind]] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "fields": {name: kind.value for name, kind in self.fields.items()},
            "persons": {
                identity: sorted(kind.value for kind in kinds)
                for identity, kinds in self.persons.items()
            },
        }

    @classmethod
    def from_json(cls, value: Mapping[str, Any]) -> "ProvenanceMap":
        return cls(
            fields={k: SourceKind(v) for k, v in value.get("fields", {}).items()},
            persons={
                k: frozenset(SourceKind(s) for s in v)
                for k, v in value.get("persons", {}).items()
            },
        )


def merge_person_lists(
    lists: Sequence[tuple[Sequence[Person], SourceKind]],
    precedence: Sequence[SourceKind] = DEFAULT_PRECEDENCE,
) -> list[Person]:
    """Union person lists across sources, grouping by identity.

    Roles union per group; scalar gaps fill from the highest-precedence
    source that knows the value. Authors come first in the result, stable by
    first appearance, then pure contributors.
    """
    persons, _ = merge_person_lists_with_provenance(lists, precedence)
    return persons


def merge_person_lists_with_provenance(
    lists: Sequence[tuple[Sequence[Person], SourceKind]],
    precedence: Sequence[SourceKind] = DEFAULT_PRECEDENCE,
) -> tuple[list[Person], dict[str, frozenset[SourceKind]]]:
    ranking = {kind: index for index, kind in enumerate(precedence)}
    ordered = sorted(lists, key=lambda entry: ranking.get(entry[1], len(ranking)))
    tagged = [(person, kind) for persons, kind in ordered for person in persons]
    merged = merge_tagged_persons(tagged)
    provenance = {
        person_identity(person): frozenset(tags) for person, tags in merged
    }
    return [person for person, _ in merged], provenance


def merge_sources(
    parts: Sequence[PartialRecord],
    precedence: Sequence[SourceKind] = DEFAULT_PRECEDENCE,
) -> tuple[CodeMetaRecord, ProvenanceMap]:
    """Collapse per-source records into one, recording the winning source per field.

    The outcome depends only on each part's source kind, never on the order
    of the parts list.
    """
    ranking = {kind: index for index, kind in enumerate(precedence)}
    ordered = sorted(parts, key=lambda part: ranking.get(part.source, len(ranking)))

    fields: dict[str, Any] = {}
    field_sources: dict[str, SourceKind] = {}
    for name in FORM_FIELDS:
        if name == "persons":
            continue
        for part in ordered:
            if field_present(part.record, name):
                fields[name] = part.record.get(name)
                field_sources[name] = part.source
                break

    persons, person_sources = merge_person_lists_with_provenance(
        [(part.record.persons, part.source) for part in ordered],
        precedence,
    )

    extras: dict[str, Any] = {}
    for part in reversed(ordered):  # lowest precedence first, highest wins
        extras.update(part.record.extras)

    record = CodeMetaRecord(persons=tuple(persons), extras=extras, **fields)
    return record, ProvenanceMap(fields=field_sources, persons=person_sources)


def classify_fields(
    record: CodeMetaRecord,
    provenance: ProvenanceMap,
    edits: Iterable[str] = (),
    review_fields: frozenset[str] = DEFAULT_REVIEW_FIELDS,
) -> dict[str, CurationStatus]:
    """Status per curation-form field, covering the whole form schema.

    Missing exactly when the field is absent; user edits trump extraction;
    extracted values in the review set are flagged for a human pass.
    """
    edited = set(edits)
    statuses: dict[str, CurationStatus] = {}
    for name in FORM_FIELDS:
        if not field_present(record, name):
            statuses[name] = CurationStatus.MISSING
        elif name in edited:
            statuses[name] = CurationStatus.EDITED
        elif name in review_fields:
            statuses[name] = CurationStatus.REVIEW
        else:
            statuses[name] = CurationStatus.EXTRACTED
    return statuses
