"""Federated search: fan a query out to registered source connectors,
normalize per-source scores, merge into one ranked stream, and paginate
with an opaque cursor.

Each connector returns its full ranked batch for the query; the cursor
stores how many results of each source have been served so far, which
keeps pagination exactly consistent with a single-shot merge.
"""

from __future__ import annotations

import base64
import binascii
import json
import threading
from concurrent.futures import ThreadPoolExecutor, TimeoutError as FutureTimeout
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConflictError, ValidationError

SOURCE_TIMEOUT_S = 3.0


@dataclass
class SourceResult:
    source: str
    rank: int  # 1-based within the source's batch
    url: str
    title: str
    description: str = ""
    thumbnail_url: str | None = None
    raw_score: float | None = None


@dataclass
class Cursor:
    per_source_offsets: dict[str, int]
    page_size: int

    def encode(self) -> str:
        body = ";".join(f"{s}={o}" for s, o in sorted(self.per_source_offsets.items()))
        payload = f"{self.page_size}|{body}"
        return base64.urlsafe_b64encode(payload.encode()).decode()

    @classmethod
    def decode(cls, token: str) -> "Cursor":
        try:
            payload = base64.urlsafe_b64decode(token.encode()).decode()
            size_part, _, body = payload.partition("|")
            offsets = {}
            if body:
                for pair in body.split(";"):
                    name, _, off = pair.partition("=")
                    offsets[name] = int(off)
            if any(o < 0 for o in offsets.values()):
                raise ValueError("negative offset")
            return cls(per_source_offsets=offsets, page_size=int(size_part))
        except (ValueError, binascii.Error, UnicodeDecodeError) as exc:
            raise ValidationError(f"malformed cursor: {exc}") from exc


@dataclass
class FederatedPage:
    results: list[SourceResult]
    next_cursor: str | None
    degraded_sources: list[str] = field(default_factory=list)


class Connector:
    """Base connector; subclasses return the full ranked batch for a query."""

    name: str
    kind: str

    def fetch(self, query: str) -> list[SourceResult]:  # pragma: no cover
        raise NotImplementedError


class FixtureFileConnector(Connector):
    """Reads newline-delimited JSON fixture records in source-rank order."""

    kind = "fixture_file"

    def __init__(self, name: str, path):
        self.name = name
        self.path = Path(path)

    def fetch(self, query: str) -> list[SourceResult]:
        terms = [t for t in query.lower().split() if t]
        results = []
        rank = 0
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                text = f"{record.get('title', '')} {record.get('description', '')}".lower()
                if terms and not any(t in text for t in terms):
                    continue
                rank += 1
                results.append(SourceResult(
                    source=self.name,
                    rank=rank,
                    url=record["url"],
                    title=record["title"],
                    description=record.get("description", ""),
                    thumbnail_url=record.get("thumbnail_url"),
                    raw_score=record.get("score"),
                ))
        return results


class CallableConnector(Connector):
    """Wraps any callable query -> list[SourceResult]; used for the local
    talk index and for stub remote connectors in tests."""

    def __init__(self, name: str, fn, kind: str = "local_index"):
        self.name = name
        self.fn = fn
        self.kind = kind

    def fetch(self, query: str) -> list[SourceResult]:
        return self.fn(query)


class RemoteHttpConnector(Connector):
    """Fetches results from a JSON-over-HTTP endpoint.

    Config keys: endpoint_url, query_param, result_path (dotted path to the
    result array), and field mappings url_field/title_field/
    description_field/thumbnail_field/score_field.
    """

    kind = "remote_http"

    def __init__(self, name: str, config: dict[str, str]):
        self.name = name
        self.config = config

    def fetch(self, query: str) -> list[SourceResult]:
        import urllib.parse
        import urllib.request

        cfg = self.config
        params = urllib.parse.urlencode({cfg.get("query_param", "q"): query})
        url = f"{cfg['endpoint_url']}?{params}"
        with urllib.request.urlopen(url, timeout=SOURCE_TIMEOUT_S) as resp:
            payload = json.load(resp)
        records = payload
        for part in cfg.get("result_path", "").split("."):
            if part:
                records = records[part]
        results = []
        for rank, record in enumerate(records, start=1):
            score = record.get(cfg.get("score_field", "score"))
            results.append(SourceResult(
                source=self.name,
                rank=rank,
                url=record[cfg.get("url_field", "url")],
                title=record[cfg.get("title_field", "title")],
                description=record.get(cfg.get("description_field", "description"), ""),
                thumbnail_url=record.get(cfg.get("thumbnail_field", "thumbnail_url")),
                raw_score=float(score) if score is not None else None,
            ))
        return results


def normalize_scores(batch: list[SourceResult]) -> list[tuple[SourceResult, float]]:
    """Min-max normalize raw scores within the batch; if any raw score is
    missing, fall back to 1/rank. All-equal raw scores map to 1.0."""
    if not batch:
        return []
    if all(r.raw_score is not None for r in batch):
        lo = min(r.raw_score for r in batch)
        hi = max(r.raw_score for r in batch)
        if hi == lo:
            return [(r, 1.0) for r in batch]
        return [(r, (r.raw_score - lo) / (hi - lo)) for r in batch]
    return [(r, 1.0 / r.rank) for r in batch]


class ConnectorRegistry:
    """Write-once-at-startup registry; registration order breaks ties."""

    def __init__(self):
        self._connectors: dict[str, Connector] = {}
        self._order: dict[str, int] = {}
        self._lock = threading.Lock()

    def register(self, connector: Connector) -> None:
        with self._lock:
            if connector.name in self._connectors:
                raise ConflictError(f"connector {connector.name!r} already registered")
            self._order[connector.name] = len(self._connectors)
            self._connectors[connector.name] = connector

    def names(self) -> list[str]:
        return sorted(self._connectors, key=self._order.__getitem__)

    def get(self, name: str) -> Connector:
        return self._connectors[name]

    def order(self, name: str) -> int:
        return self._order[name]


def federated_search(registry: ConnectorRegistry, query: str,
                     sources: list[str] | None = None,
                     cursor: str | None = None,
                     page_size: int = 10,
                     timeout_s: float = SOURCE_TIMEOUT_S) -> FederatedPage:
    """One page of merged results plus the cursor for the next page.

    Connectors run concurrently under a per-source timeout; a failing or
    timed-out source contributes nothing and is flagged as degraded rather
    than failing the query.
    """
    if page_size < 1:
        raise ValidationError("page_size must be >= 1")
    if not query.split():
        raise ValidationError("empty query")
    if sources is None or not sources:
        sources = registry.names()
    if not sources:
        raise ValidationError("no sources")
    for name in sources:
        if name not in registry.names():
            raise ValidationError(f"unknown source {name!r}")
    sources = sorted(set(sources), key=registry.order)

    offsets = {name: 0 for name in sources}
    if cursor is not None:
        decoded = Cursor.decode(cursor)
        for name, off in decoded.per_source_offsets.items():
            if name not in offsets:
                raise ValidationError(f"cursor references unknown source {name!r}")
            offsets[name] = off

    degraded: list[str] = []
    batches: dict[str, list[tuple[SourceResult, float]]] = {}
    pool = ThreadPoolExecutor(max_workers=max(1, len(sources)))
    try:
        futures = {name: pool.submit(registry.get(name).fetch, query)
                   for name in sources}
        for name, future in futures.items():
            try:
                batches[name] = normalize_scores(future.result(timeout=timeout_s))
            except (Exception, FutureTimeout):  # noqa: BLE001 - failure isolation
                degraded.append(name)
                batches[name] = []
    finally:
        # do not wait: a hung connector must not block the response
        pool.shutdown(wait=False, cancel_futures=True)

    # merge: normalized score desc, then registration order, then source rank
    merged: list[tuple[float, int, int, SourceResult]] = []
    for name in sources:
        for result, norm in batches[name]:
            merged.append((-norm, registry.order(name), result.rank, result))
    merged.sort(key=lambda item: item[:3])

    # the cursor offsets index into the merged stream per source
    served = dict(offsets)
    page: list[SourceResult] = []
    position = {name: 0 for name in sources}
    for _, _, _, result in merged:
        name = result.source
        position[name] += 1
        if position[name] <= offsets[name]:
            continue  # already served on an earlier page
        if len(page) < page_size:
            page.append(result)
            served[name] += 1
    # an empty page signals exhaustion; a partial page still carries a
    # cursor so infinite-scroll clients learn about the end on the next call
    next_cursor = None
    if page:
        next_cursor = Cursor(per_source_offsets=served, page_size=page_size).encode()
    return FederatedPage(results=page, next_cursor=next_cursor,
                         degraded_sources=sorted(degraded))
