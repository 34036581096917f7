from __future__ import annotations

import json

import pytest

from smecs.cli import main

from .conftest import FIXTURES

DEMO = str(FIXTURES / "demo")
ERRORS = str(FIXTURES / "errors")


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_extract_writes_codemeta_file(tmp_path, capsys):
    out = tmp_path / "codemeta.json"
    code, _, err = run(
        ["extract", "--url", "https://github.com/acme/demo", "--fixtures", DEMO,
         "--out", str(out)],
        capsys,
    )
    assert code == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["@context"] == "https://doi.org/10.5063/schema/codemeta-2.0"
    assert doc["name"] == "Demo Analyzer"
    assert "github-api: ok" in err
    assert "codemeta-file: ok" in err
    assert "keywords: review" in err


def test_extract_is_deterministic(tmp_path, capsys):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    for out in (first, second):
        code, _, _ = run(
            ["extract", "--url", "https://github.com/acme/demo", "--fixtures", DEMO,
             "--out", str(out)],
            capsys,
        )
        assert code == 0
    assert first.read_bytes() == second.read_bytes()


def test_extract_streams_to_stdout(capsys):
    code, out, err = run(
        ["extract", "--url", "https://github.com/acme/demo", "--fixtures", DEMO,
         "--out", "-"],
        capsys,
    )
    assert code == 0
    assert json.loads(out)["name"] == "Demo Analyzer"
    assert "harvest:" in err  # human report stays on stderr


def test_extract_bad_url_is_usage_error(capsys):
    code, _, err = run(["extract", "--url", "ftp://x", "--fixtures", DEMO], capsys)
    assert code == 3
    assert "unsupported repository URL" in err


def test_extract_missing_repo_is_pipeline_error(tmp_path, capsys):
    code, _, err = run(
        ["extract", "--url", "https://github.com/acme/nope", "--fixtures", DEMO,
         "--out", str(tmp_path / "x.json")],
        capsys,
    )
    assert code == 2
    assert "not found" in err


def test_extract_report_flag_prints_rule_firings(tmp_path, capsys):
    code, _, err = run(
        ["extract", "--url", "https://github.com/acme/demo", "--fixtures", DEMO,
         "--out", str(tmp_path / "x.json"), "--report"],
        capsys,
    )
    assert code == 0
    assert "repo.name -> name: fired" in err
    assert "repo.updated_at -> dateModified: skipped" in err


def test_extract_error_messages_never_echo_token(tmp_path, capsys):
    code, out, err = run(
        ["extract", "--url", "https://github.com/errs/denied", "--fixtures", ERRORS,
         "--token", "hunter2-classified", "--out", str(tmp_path / "x.json")],
        capsys,
    )
    assert code == 2
    assert "token" in err  # advisory
    assert "hunter2-classified" not in out + err


def test_validate_accepts_exported_file(tmp_path, capsys):
    out = tmp_path / "codemeta.json"
    run(
        ["extract", "--url", "https://github.com/acme/demo", "--fixtures", DEMO,
         "--out", str(out)],
        capsys,
    )
    code, _, err = run(["validate", str(out)], capsys)
    assert code == 0
    assert "is valid" in err


def test_validate_reports_license_violation(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "X", "license": "MIT-FAKE"}), encoding="utf-8")
    code, out, _ = run(["validate", str(bad)], capsys)
    assert code == 1
    lines = [line for line in out.splitlines() if line.strip()]
    assert len(lines) == 1
    assert "license-in-SPDX" in lines[0]


def test_validate_malformed_json_is_pipeline_error(tmp_path, capsys):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _, err = run(["validate", str(bad)], capsys)
    assert code == 2
    assert "line" in err


def test_validate_missing_file_is_pipeline_error(tmp_path, capsys):
    code, _, _ = run(["validate", str(tmp_path / "absent.json")], capsys)
    assert code == 2


@pytest.mark.parametrize("argv", [[], ["extract"], ["unknown-command"]])
def test_usage_errors_exit_three(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 3
    assert "usage" in err.lower()
