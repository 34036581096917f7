from __future__ import annotations

import logging

import pytest

from smecs.errors import (
    AuthError,
    DecodeError,
    HarvestError,
    NotFound,
    RateLimited,
    TransportError,
    UnsupportedUrl,
)
from smecs.harvest import (
    AuthToken,
    RepoLocator,
    SourceKind,
    fetch_repo_file,
    harvest_all,
    harvest_api,
    parse_repo_url,
)

TOKEN = AuthToken.user("hunter2-super-secret")
DEMO = RepoLocator("github.com", "acme", "demo")


class RecordingTransport:
    """Wraps another transport and records every request."""

    def __init__(self, inner):
        self.inner = inner
        self.requests: list[tuple[str, dict]] = []

    def get(self, url, headers):
        self.requests.append((url, dict(headers)))
        return self.inner.get(url, headers)


# ---------------------------------------------------------------------------
# URL parsing


def test_parse_repo_url_extracts_locator():
    locator = parse_repo_url("https://github.com/NFDI4Energy/SMECS")
    assert locator == RepoLocator("github.com", "NFDI4Energy", "SMECS")


def test_parse_repo_url_strips_git_suffix_and_slash():
    assert parse_repo_url("https://github.com/a/b.git/") == RepoLocator(
        "github.com", "a", "b"
    )


@pytest.mark.parametrize("url", ["ftp://x", "https://github.com/onlyowner", "http://github.com/a/b", "github.com/a/b"])
def test_parse_repo_url_rejects_unsupported(url):
    with pytest.raises(UnsupportedUrl):
        parse_repo_url(url)


def test_parse_repo_url_ignores_deep_paths():
    locator = parse_repo_url("https://github.com/acme/demo/tree/main/src")
    assert locator.name == "demo"


# ---------------------------------------------------------------------------
# API harvesting


def test_harvest_api_merges_three_payloads(demo_transport):
    record = harvest_api(DEMO, AuthToken.none(), demo_transport)
    assert record.source is SourceKind.GITHUB_API
    assert record.data["repo"]["name"] == "demo"
    assert record.data["languages"]["Python"] == 152340
    assert [c["login"] for c in record.data["contributors"]] == ["jdoe", "rroe"]


def test_harvest_api_sends_accept_and_bearer_headers(demo_transport):
    recorder = RecordingTransport(demo_transport)
    harvest_api(DEMO, TOKEN, recorder)
    urls = [url for url, _ in recorder.requests]
    assert urls == [
        "https://api.github.com/repos/acme/demo",
        "https://api.github.com/repos/acme/demo/languages",
        "https://api.github.com/repos/acme/demo/contributors",
    ]
    for _, headers in recorder.requests:
        assert headers["Accept"] == "application/vnd.github+json"
        assert headers["Authorization"] == f"Bearer {TOKEN.value}"


def test_harvest_api_omits_authorization_without_token(demo_transport):
    recorder = RecordingTransport(demo_transport)
    harvest_api(DEMO, AuthToken.none(), recorder)
    assert all("Authorization" not in headers for _, headers in recorder.requests)


def test_harvest_api_missing_repo_is_not_found(demo_transport):
    with pytest.raises(NotFound):
        harvest_api(RepoLocator("github.com", "acme", "nope"), AuthToken.none(), demo_transport)


def test_harvest_api_auth_error_advises_token(errors_transport):
    with pytest.raises(AuthError) as excinfo:
        harvest_api(RepoLocator("github.com", "errs", "denied"), AuthToken.none(), errors_transport)
    assert "token" in str(excinfo.value)


def test_harvest_api_rate_limit_carries_retry_after(errors_transport):
    with pytest.raises(RateLimited) as excinfo:
        harvest_api(RepoLocator("github.com", "errs", "limited"), TOKEN, errors_transport)
    assert excinfo.value.retry_after == 42


def test_harvest_api_server_error_is_transport_error(errors_transport):
    with pytest.raises(TransportError):
        harvest_api(RepoLocator("github.com", "errs", "flaky"), TOKEN, errors_transport)


def test_harvest_api_garbled_body_is_transport_error(errors_transport):
    with pytest.raises(TransportError):
        harvest_api(RepoLocator("github.com", "errs", "garbled"), TOKEN, errors_transport)


def test_harvest_api_tolerates_204_contributors(demo_transport):
    record = harvest_api(RepoLocator("github.com", "acme", "bare"), AuthToken.none(), demo_transport)
    assert record.data["contributors"] == []


# ---------------------------------------------------------------------------
# file fetching


def test_fetch_repo_file_decodes_wrapped_base64(demo_transport):
    text = fetch_repo_file(DEMO, AuthToken.none(), demo_transport, "CITATION.cff")
    assert text is not None
    assert "Demo Analyzer" in text
    assert text.startswith("# Citation metadata")


def test_fetch_repo_file_absent_is_none(demo_transport):
    bare = RepoLocator("github.com", "acme", "bare")
    assert fetch_repo_file(bare, AuthToken.none(), demo_transport, "codemeta.json") is None


def test_fetch_repo_file_invalid_base64_is_decode_error(demo_transport):
    bad = RepoLocator("github.com", "acme", "badfiles")
    with pytest.raises(DecodeError):
        fetch_repo_file(bad, AuthToken.none(), demo_transport, "CITATION.cff")


def test_fetch_repo_file_unknown_encoding_is_decode_error(demo_transport):
    bad = RepoLocator("github.com", "acme", "badfiles")
    with pytest.raises(DecodeError):
        fetch_repo_file(bad, AuthToken.none(), demo_transport, "codemeta.json")


def test_fetch_repo_file_auth_error_propagates(errors_transport):
    locked = RepoLocator("github.com", "errs", "denied")
    with pytest.raises(AuthError):
        fetch_repo_file(locked, AuthToken.none(), errors_transport, "CITATION.cff")


# ---------------------------------------------------------------------------
# harvest_all


def test_harvest_all_demo_yields_three_sources(demo_transport):
    records, report = harvest_all(DEMO, AuthToken.none(), demo_transport)
    assert [r.source for r in records] == [
        SourceKind.GITHUB_API,
        SourceKind.CFF_FILE,
        SourceKind.CODEMETA_FILE,
    ]
    assert {(o.source, o.outcome) for o in report} == {
        (SourceKind.GITHUB_API, "ok"),
        (SourceKind.CFF_FILE, "ok"),
        (SourceKind.CODEMETA_FILE, "ok"),
    }


def test_harvest_all_api_only_marks_files_absent(demo_transport):
    bare = RepoLocator("github.com", "acme", "bare")
    records, report = harvest_all(bare, AuthToken.none(), demo_transport)
    assert [r.source for r in records] == [SourceKind.GITHUB_API]
    outcomes = {o.source: o.outcome for o in report}
    assert outcomes[SourceKind.CFF_FILE] == "absent"
    assert outcomes[SourceKind.CODEMETA_FILE] == "absent"


def test_harvest_all_degrades_on_broken_files(demo_transport):
    bad = RepoLocator("github.com", "acme", "badfiles")
    records, report = harvest_all(bad, AuthToken.none(), demo_transport)
    assert [r.source for r in records] == [SourceKind.GITHUB_API]
    outcomes = {o.source: o.outcome for o in report}
    assert outcomes[SourceKind.CFF_FILE] == "error"
    assert outcomes[SourceKind.CODEMETA_FILE] == "error"


def test_harvest_all_degrades_on_malformed_cff(demo_transport):
    bad = RepoLocator("github.com", "acme", "badcff")
    records, report = harvest_all(bad, AuthToken.none(), demo_transport)
    assert [r.source for r in records] == [SourceKind.GITHUB_API]
    cff_outcome = next(o for o in report if o.source is SourceKind.CFF_FILE)
    assert cff_outcome.outcome == "error"
    assert "line" in (cff_outcome.detail or "")


def test_harvest_all_aborts_when_api_fails(demo_transport):
    with pytest.raises(NotFound):
        harvest_all(RepoLocator("github.com", "acme", "nope"), AuthToken.none(), demo_transport)


# ---------------------------------------------------------------------------
# token secrecy


def test_token_repr_is_redacted():
    assert TOKEN.value not in repr(TOKEN)
    assert TOKEN.value not in str(TOKEN)
    assert "redacted" in repr(TOKEN)


ERROR_REPOS = ("denied", "limited", "flaky", "garbled")


def test_token_never_leaks_into_errors_or_logs(errors_transport, demo_transport, caplog):
    """Every fixture error path, checked for the token value in text and logs."""
    operations = []
    for name in ERROR_REPOS:
        locator = RepoLocator("github.com", "errs", name)
        operations.append(lambda loc=locator: harvest_api(loc, TOKEN, errors_transport))
        operations.append(
            lambda loc=locator: fetch_repo_file(loc, TOKEN, errors_transport, "CITATION.cff")
        )
        operations.append(lambda loc=locator: harvest_all(loc, TOKEN, errors_transport))
    bad = RepoLocator("github.com", "acme", "badfiles")
    operations.append(lambda: fetch_repo_file(bad, TOKEN, demo_transport, "CITATION.cff"))
    operations.append(lambda: harvest_all(bad, TOKEN, demo_transport))

    with caplog.at_level(logging.DEBUG):
        for operation in operations:
            try:
                operation()
            except HarvestError as exc:
                assert TOKEN.value not in str(exc)
                assert TOKEN.value not in repr(exc)
    assert TOKEN.value not in caplog.text
