"""Operator command line: serve, ingest, reindex, export-rdf, stats, seed.

Machine-readable JSON goes to stdout; logs go to stderr. Exit codes:
0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import Config, load_config
from .errors import OerHubError
from .federated import FixtureFileConnector
from .ingest import ingest_dump, reindex_all
from .service import Platform
from .store import Store
from .textindex import InvertedIndex
from .wordnetdb import load_database

DEFAULT_CONFIG = "./oerhub.conf"


def _json_dump(data) -> str:
    # compact separators match the HTTP layer's JSON encoder byte-for-byte
    return json.dumps(data, ensure_ascii=False, separators=(",", ":"))


def build_platform(config: Config) -> Platform:
    store = Store(config.data_dir)
    index = InvertedIndex()
    reindex_all(store, index)
    wordnet = None
    if Path(config.wordnet_dir).is_dir():
        wordnet = load_database(config.wordnet_dir)
    platform = Platform(store, index, wordnet=wordnet, config=config)
    platform.register_local_talk_connector()
    fixture_dir = Path(config.fixture_dir)
    if fixture_dir.is_dir():
        for path in sorted(fixture_dir.glob("*.ndjson")):
            platform.registry.register(FixtureFileConnector(path.stem, path))
    return platform


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oerhub")
    parser.add_argument("--config", default=None,
                        help="config file (default ./oerhub.conf or $OERHUB_CONFIG)")
    parser.add_argument("--data-dir", default=None, help="override data_dir")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand")
    sub.add_parser("serve")
    ingest = sub.add_parser("ingest")
    ingest.add_argument("dump")
    sub.add_parser("reindex")
    export = sub.add_parser("export-rdf")
    export.add_argument("out")
    sub.add_parser("stats")
    seed = sub.add_parser("seed")
    seed.add_argument("fixture")
    return parser


def _load_config(args) -> Config:
    path = args.config or os.environ.get("OERHUB_CONFIG") or DEFAULT_CONFIG
    if Path(path).exists():
        config = load_config(path)
    else:
        config = Config()
    if args.data_dir:
        config.data_dir = args.data_dir
    return config


def run(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.subcommand:
        parser.print_usage(sys.stderr)
        return 1

    try:
        config = _load_config(args)
        platform = build_platform(config)
        if args.verbose:
            print(f"data_dir={config.data_dir}", file=sys.stderr)

        if args.subcommand == "ingest":
            report = ingest_dump(platform.store, platform.index, args.dump)
            print(_json_dump(report.to_dict()))
        elif args.subcommand == "reindex":
            count = reindex_all(platform.store, platform.index)
            print(_json_dump({"documents_indexed": count}))
        elif args.subcommand == "export-rdf":
            from .rdfexport import export_graph, serialize_ntriples
            graph = export_graph(platform.store, "http://localhost/oerhub")
            Path(args.out).write_text(serialize_ntriples(graph), encoding="utf-8")
            print(_json_dump({"triples": len(graph), "out": args.out}))
        elif args.subcommand == "stats":
            print(_json_dump(platform.stats_report().to_dict()))
        elif args.subcommand == "seed":
            from .seed import seed_fixture
            created = seed_fixture(platform, args.fixture)
            print(_json_dump(created))
        elif args.subcommand == "serve":
            import uvicorn

            from .api import create_app
            host, _, port = config.listen_addr.partition(":")
            app = create_app(platform, static_dir=_static_dir())
            uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080))
        return 0
    except OerHubError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _static_dir() -> str | None:
    candidate = Path("frontend/dist")
    return str(candidate) if candidate.is_dir() else None


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
