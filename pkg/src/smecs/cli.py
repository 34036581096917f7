"""Command line front door: one-shot extraction, validation, serving, vocab refresh.

Exit codes partition outcomes: 0 success, 1 validation failures, 2
pipeline/IO errors, 3 usage errors. The human-readable report goes to
stderr; stdout is reserved for `--out -` streaming of the exported JSON.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import HarvestError, MalformedJson, MissingName, SmecsError, UnsupportedUrl
from .harvest import AuthToken, FixtureTransport, RequestsTransport, parse_repo_url
from .model import export_codemeta, parse_codemeta_report, validate_record
from .pipeline import run_extraction
from .service import ServiceConfig, create_app
from .vocab import load_default_vocabularies, refresh_snapshots

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PIPELINE = 2
EXIT_USAGE = 3

TOKEN_ENV = "SMECS_GITHUB_TOKEN"


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="smecs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    extract = sub.add_parser("extract", help="harvest a repository and write codemeta.json")
    extract.add_argument("--url", required=True, help="repository URL (https)")
    extract.add_argument("--token", help=f"access token (default: ${TOKEN_ENV})")
    extract.add_argument("--out", default="codemeta.json",
                         help="output file, '-' for stdout (default codemeta.json)")
    extract.add_argument("--fixtures", help="replay recorded responses from this directory")
    extract.add_argument("--report", action="store_true",
                         help="also print the per-rule crosswalk report")

    validate = sub.add_parser("validate", help="validate an existing CodeMeta file")
    validate.add_argument("file", help="path to a codemeta.json file")
    validate.add_argument("--vocab-dir", help="directory with vocabulary snapshot overrides")

    serve = sub.add_parser("serve", help="run the curation web service")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--config", help="JSON configuration file")
    serve.add_argument("--fixtures", help="serve against recorded fixtures (demo mode)")
    serve.add_argument("--session-dir", help="write-through session directory")
    serve.add_argument("--static-dir", help="directory with the built web UI")
    serve.add_argument("--vocab-dir", help="directory with vocabulary snapshot overrides")

    refresh = sub.add_parser("refresh-vocab", help="fetch fresh vocabulary snapshots")
    refresh.add_argument("--dest", required=True, help="directory for the new snapshots")
    return parser


def cmd_extract(args: argparse.Namespace) -> int:
    try:
        locator = parse_repo_url(args.url)
    except UnsupportedUrl as exc:
        print(f"smecs extract: {exc}", file=sys.stderr)
        return EXIT_USAGE
    token_value = args.token or os.environ.get(TOKEN_ENV)
    token = AuthToken.user(token_value) if token_value else AuthToken.none()
    transport = FixtureTransport(args.fixtures) if args.fixtures else RequestsTransport()

    try:
        result = run_extraction(locator, token, transport)
        text = export_codemeta(result.record)
    except (HarvestError, MissingName) as exc:
        print(f"smecs extract: {exc}", file=sys.stderr)
        return EXIT_PIPELINE

    print("harvest:", file=sys.stderr)
    for outcome in result.harvest_report:
        detail = f" ({outcome.detail})" if outcome.detail else ""
        print(f"  {outcome.source.value}: {outcome.outcome}{detail}", file=sys.stderr)
    print("fields:", file=sys.stderr)
    for name, status in result.statuses.items():
        print(f"  {name}: {status.value}", file=sys.stderr)
    if args.report:
        print("crosswalk:", file=sys.stderr)
        for partial in result.partials:
            for entry in partial.report:
                state = "fired" if entry.fired else f"skipped ({entry.note})"
                print(
                    f"  {partial.source.value}: {entry.source_path} -> {entry.target}: {state}",
                    file=sys.stderr,
                )

    if args.out == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"smecs extract: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_PIPELINE
        print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"smecs validate: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    try:
        record, parse_violations = parse_codemeta_report(text)
    except MalformedJson as exc:
        print(f"smecs validate: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    vocabs = load_default_vocabularies(args.vocab_dir)
    violations = parse_violations + validate_record(record, vocabs)
    for violation in violations:
        print(f"{violation.field}: {violation.rule}: {violation.message}")
    if violations:
        print(f"{len(violations)} violation(s) in {args.file}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"{args.file} is valid", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    overrides = {
        "host": args.host,
        "port": args.port,
        "fixtures_dir": Path(args.fixtures) if args.fixtures else None,
        "session_dir": Path(args.session_dir) if args.session_dir else None,
        "static_dir": Path(args.static_dir) if args.static_dir else None,
        "vocab_dir": Path(args.vocab_dir) if args.vocab_dir else None,
    }
    if args.config:
        config = ServiceConfig.from_file(args.config, **overrides)
    else:
        config = ServiceConfig(
            **{k: v for k, v in overrides.items() if v is not None}
        ).with_env_token()
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


def cmd_refresh_vocab(args: argparse.Namespace) -> int:
    try:
        written = refresh_snapshots(RequestsTransport(), args.dest)
    except (SmecsError, OSError) as exc:
        print(f"smecs refresh-vocab: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


_COMMANDS = {
    "extract": cmd_extract,
    "validate": cmd_validate,
    "serve": cmd_serve,
    "refresh-vocab": cmd_refresh_vocab,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"smecs: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
