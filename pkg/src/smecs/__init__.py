"""Software metadata extraction and curation: harvest repository metadata
from the hosting API, CITATION.cff, and codemeta.json, merge it with
per-field provenance, curate it through a web service, and export CodeMeta.
"""

from .errors import (
    AuthError,
    DecodeError,
    HarvestError,
    InvariantViolation,
    MalformedCff,
    MalformedJson,
    MalformedVocabulary,
    MissingName,
    NotFound,
    RateLimited,
    SmecsError,
    TransportError,
    UnknownField,
    UnknownSession,
    UnsupportedUrl,
)
from .harvest import (
    AuthToken,
    FixtureTransport,
    RepoLocator,
    RequestsTransport,
    SourceKind,
    SourceRecord,
    fetch_repo_file,
    harvest_all,
    harvest_api,
    parse_cff,
    parse_repo_url,
)
from .crosswalk import MappingRule, PartialRecord, apply_crosswalk, builtin_tables
from .merge import (
    DEFAULT_PRECEDENCE,
    DEFAULT_REVIEW_FIELDS,
    ProvenanceMap,
    classify_fields,
    merge_person_lists,
    merge_sources,
)
from .model import (
    CodeMetaRecord,
    CurationStatus,
    Person,
    Role,
    Violation,
    export_codemeta,
    parse_codemeta,
    parse_codemeta_report,
    records_equivalent,
    validate_record,
)
from .pipeline import ExtractionResult, run_extraction
from .service import ServiceConfig, create_app
from .vocab import (
    Vocabulary,
    VocabularyKind,
    VocabularySet,
    filter_vocabulary,
    load_default_vocabularies,
    load_vocabulary,
)

__version__ = "0.1.0"
