"""End-to-end extraction: harvest all sources, crosswalk, merge, classify."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .crosswalk import MappingRule, PartialRecord, apply_crosswalk
from .harvest import (
    AuthToken,
    HarvestOutcome,
    HttpTransport,
    RepoLocator,
    SourceKind,
    harvest_all,
)
from .merge import (
    DEFAULT_PRECEDENCE,
    DEFAULT_REVIEW_FIELDS,
    ProvenanceMap,
    classify_fields,
    merge_sources,
)
from .model import CodeMetaRecord, CurationStatus


@dataclass(frozen=True)
class ExtractionResult:
    record: CodeMetaRecord
    provenance: ProvenanceMap
    statuses: dict[str, CurationStatus]
    harvest_report: list[HarvestOutcome]
    partials: list[PartialRecord]


def run_extraction(
    locator: RepoLocator,
    token: AuthToken,
    transport: HttpTransport,
    precedence: Sequence[SourceKind] = DEFAULT_PRECEDENCE,
    review_fields: frozenset[str] = DEFAULT_REVIEW_FIELDS,
    tables: Mapping[SourceKind, Sequence[MappingRule]] | None = None,
) -> ExtractionResult:
    records, report = harvest_all(locator, token, transport)
    partials = [apply_crosswalk(record, tables) for record in records]
    merged, provenance = merge_sources(partials, precedence)
    statuses = classify_fields(merged, provenance, edits=(), review_fields=review_fields)
    return ExtractionResult(
        record=merged,
        provenance=provenance,
        statuses=statuses,
        harvest_report=report,
        partials=partials,
    )
