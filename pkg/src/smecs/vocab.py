"""Controlled vocabularies for the curation form: SPDX licenses and languages.

Both ship as bundled JSON snapshots so filtering works offline and tests are
reproducible; `smecs refresh-vocab` rewrites the snapshots from the public
upstream lists. Filtering is the dynamic narrowing the form's autocomplete
uses: prefix matches on the identifier rank first, then prefix matches on
the display label, then substring matches, each group in vocabulary order.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import MalformedVocabulary

SPDX_LICENSES_URL = (
    "https://raw.githubusercontent.com/spdx/license-list-data/master/json/licenses.json"
)
LANGUAGES_URL = (
    "https://gist.githubusercontent.com/calvinfroedge/defeb8fc6cdc0068e172/raw"
)

LICENSES_SNAPSHOT = "spdx_licenses.json"
LANGUAGES_SNAPSHOT = "languages.json"


class VocabularyKind(enum.Enum):
    LICENSE = "licenses"
    LANGUAGE = "languages"


@dataclass(frozen=True)
class VocabEntry:
    id: str
    label: str

    def to_json(self) -> dict[str, str]:
        return {"id": self.id, "label": self.label}


@dataclass(frozen=True)
class Vocabulary:
    kind: VocabularyKind
    entries: tuple[VocabEntry, ...]

    @property
    def ids(self) -> frozenset[str]:
        return _id_set(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@lru_cache(maxsize=8)
def _id_set(entries: tuple[VocabEntry, ...]) -> frozenset[str]:
    return frozenset(entry.id for entry in entries)


@dataclass(frozen=True)
class VocabularySet:
    licenses: Vocabulary
    languages: Vocabulary

    @property
    def license_ids(self) -> frozenset[str]:
        return self.licenses.ids

    def by_kind(self, kind: VocabularyKind) -> Vocabulary:
        return self.licenses if kind is VocabularyKind.LICENSE else self.languages


def load_vocabulary(kind: VocabularyKind, source: str) -> Vocabulary:
    """Load a vocabulary from snapshot text.

    Licenses use the SPDX license-list-data layout (deprecated identifiers
    excluded); languages are a flat JSON array of names, with a tolerant
    reading of {"languages": [...]} wrappers.
    """
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise MalformedVocabulary(f"vocabulary snapshot is not JSON: {exc.msg}") from exc

    entries: list[VocabEntry] = []
    if kind is VocabularyKind.LICENSE:
        licenses = data.get("licenses") if isinstance(data, dict) else None
        if not isinstance(licenses, list):
            raise MalformedVocabulary("expected a 'licenses' array in the SPDX snapshot")
        for item in licenses:
            if not isinstance(item, dict) or not item.get("licenseId"):
                continue
            if item.get("isDeprecatedLicenseId"):
                continue
            entries.append(
                VocabEntry(id=str(item["licenseId"]), label=str(item.get("name", item["licenseId"])))
            )
    else:
        if isinstance(data, dict) and isinstance(data.get("languages"), list):
            data = data["languages"]
        if not isinstance(data, list):
            raise MalformedVocabulary("expected a flat JSON array of language names")
        for item in data:
            if isinstance(item, str) and item:
                entries.append(VocabEntry(id=item, label=item))

    if not entries:
        raise MalformedVocabulary(f"no usable {kind.value} entries in the snapshot")
    seen: set[str] = set()
    unique = []
    for entry in entries:
        if entry.id not in seen:
            seen.add(entry.id)
            unique.append(entry)
    return Vocabulary(kind=kind, entries=tuple(unique))


def filter_vocabulary(vocab: Vocabulary, query: str, limit: int) -> list[VocabEntry]:
    """Case-insensitive narrowing with deterministic ranking.

    Identifier-prefix matches first, then label-prefix, then substring
    anywhere, each group stable in vocabulary order; an empty query yields
    the first `limit` entries.
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    needle = query.casefold()
    if not needle:
        return list(vocab.entries[:limit])
    id_prefix: list[VocabEntry] = []
    label_prefix: list[VocabEntry] = []
    substring: list[VocabEntry] = []
    for entry in vocab.entries:
        entry_id = entry.id.casefold()
        label = entry.label.casefold()
        if entry_id.startswith(needle):
            id_prefix.append(entry)
        elif label.startswith(needle):
            label_prefix.append(entry)
        elif needle in entry_id or needle in label:
            substring.append(entry)
    return (id_prefix + label_prefix + substring)[:limit]


def _read_snapshot(name: str, vocab_dir: str | Path | None) -> str:
    if vocab_dir is not None:
        override = Path(vocab_dir) / name
        if override.is_file():
            return override.read_text(encoding="utf-8")
    return resources.files("smecs.data").joinpath(name).read_text(encoding="utf-8")


def load_default_vocabularies(vocab_dir: str | Path | None = None) -> VocabularySet:
    """Bundled snapshots, with per-file overrides from `vocab_dir` when present."""
    return VocabularySet(
        licenses=load_vocabulary(
            VocabularyKind.LICENSE, _read_snapshot(LICENSES_SNAPSHOT, vocab_dir)
        ),
        languages=load_vocabulary(
            VocabularyKind.LANGUAGE, _read_snapshot(LANGUAGES_SNAPSHOT, vocab_dir)
        ),
    )


def refresh_snapshots(transport: Any, dest_dir: str | Path) -> list[Path]:
    """Fetch fresh upstream lists, validate them, and write snapshot files."""
    dest = Path(dest_dir)
    dest.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for kind, url, name in (
        (VocabularyKind.LICENSE, SPDX_LICENSES_URL, LICENSES_SNAPSHOT),
        (VocabularyKind.LANGUAGE, LANGUAGES_URL, LANGUAGES_SNAPSHOT),
    ):
        response = transport.get(url, {"Accept": "application/json"})
        if response.status != 200:
            raise MalformedVocabulary(
                f"upstream {kind.value} list returned HTTP {response.status}"
            )
        text = response.body.decode("utf-8")
        load_vocabulary(kind, text)  # validate before writing
        target = dest / name
        target.write_text(text, encoding="utf-8")
        written.append(target)
    return written
