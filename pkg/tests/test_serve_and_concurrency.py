from __future__ import annotations

import json
import threading

import pytest
from fastapi import FastAPI
from fastapi.testclient import TestClient
from hypothesis import given, settings
from hypothesis import strategies as st

import smecs.cli as cli_module
from smecs.cli import main
from smecs.harvest import TransportResponse
from smecs.model import normalize_spdx
from smecs.service import ServiceConfig, create_app

from .conftest import FIXTURES


def test_serve_wires_config_and_static_dir(monkeypatch, tmp_path, capsys):
    static = tmp_path / "ui"
    static.mkdir()
    (static / "index.html").write_text("<!doctype html><title>smecs</title>", encoding="utf-8")
    config_file = tmp_path / "config.json"
    config_file.write_text(json.dumps({"port": 7777}), encoding="utf-8")

    captured: dict = {}

    def fake_run(app, host, port, log_level):
        captured.update(app=app, host=host, port=port)

    monkeypatch.setattr("uvicorn.run", fake_run)
    code = main(
        ["serve", "--config", str(config_file), "--host", "127.0.0.9",
         "--fixtures", str(FIXTURES / "demo"), "--static-dir", str(static)]
    )
    assert code == 0
    assert captured["port"] == 7777
    assert captured["host"] == "127.0.0.9"  # flag overrides file
    assert isinstance(captured["app"], FastAPI)

    with TestClient(captured["app"]) as client:
        assert client.get("/api/health").json() == {"status": "ok"}
        index = client.get("/")
        assert index.status_code == 200
        assert "smecs" in index.text


def test_refresh_vocab_cli_writes_snapshots(monkeypatch, tmp_path, capsys):
    payloads = {
        "https://raw.githubusercontent.com/spdx/license-list-data/master/json/licenses.json": {
            "licenses": [{"licenseId": "MIT", "name": "MIT License"}]
        },
        "https://gist.githubusercontent.com/calvinfroedge/defeb8fc6cdc0068e172/raw": [
            "Python"
        ],
    }

    class Stub:
        def get(self, url, headers):
            return TransportResponse(200, {}, json.dumps(payloads[url]).encode())

    monkeypatch.setattr(cli_module, "RequestsTransport", Stub)
    code = main(["refresh-vocab", "--dest", str(tmp_path / "snap")])
    assert code == 0
    names = sorted(p.name for p in (tmp_path / "snap").iterdir())
    assert names == ["languages.json", "spdx_licenses.json"]


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=60))
def test_spdx_normalize_is_idempotent(text):
    once = normalize_spdx(text)
    assert normalize_spdx(once) == once


def test_concurrent_edits_to_one_session_serialize(tmp_path):
    config = ServiceConfig(fixtures_dir=FIXTURES / "demo")
    with TestClient(create_app(config)) as client:
        sid = client.post("/api/sessions", json={"url": "https://github.com/acme/demo"}).json()["id"]

        errors: list[Exception] = []

        def spam(worker: int) -> None:
            try:
                for i in range(10):
                    response = client.patch(
                        f"/api/sessions/{sid}/fields",
                        json={"path": "keywords", "value": [f"w{worker}", f"i{i}"]},
                    )
                    assert response.status_code == 200
            except Exception as exc:  # noqa: BLE001 - surfaced below
                errors.append(exc)

        threads = [threading.Thread(target=spam, args=(n,)) for n in range(6)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        assert not errors

        final = client.get(f"/api/sessions/{sid}").json()
        assert final["statuses"]["keywords"] == "edited"
        assert len(final["record"]["keywords"]) == 2
