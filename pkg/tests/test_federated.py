import json
import random
import threading
import time
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from oerhub.errors import ConflictError, ValidationError
from oerhub.federated import (
    CallableConnector,
    ConnectorRegistry,
    Cursor,
    FixtureFileConnector,
    RemoteHttpConnector,
    SourceResult,
    federated_search,
    normalize_scores,
)

from conftest import FIXTURES


def make_results(source, n, scores=None):
    return [SourceResult(source=source, rank=i + 1, url=f"u://{source}/{i+1}",
                         title=f"{source} {i+1}",
                         raw_score=None if scores is None else scores[i])
            for i in range(n)]


def static_registry(batches):
    registry = ConnectorRegistry()
    for name, batch in batches.items():
        registry.register(CallableConnector(name, lambda q, b=batch: list(b)))
    return registry


class TestCursor:
    def test_round_trip(self):
        c = Cursor(per_source_offsets={"youtube": 3, "web": 0}, page_size=7)
        decoded = Cursor.decode(c.encode())
        assert decoded == c

    def test_malformed_token(self):
        with pytest.raises(ValidationError, match="cursor"):
            Cursor.decode("!!!not-base64!!!")

    def test_negative_offset_rejected(self):
        bad = Cursor(per_source_offsets={"web": -1}, page_size=3).encode()
        with pytest.raises(ValidationError):
            Cursor.decode(bad)


class TestNormalizeScores:
    def test_min_max_endpoints(self):
        batch = make_results("s", 3, scores=[2.0, 4.0, 6.0])
        assert [n for _, n in normalize_scores(batch)] == [0.0, 0.5, 1.0]

    def test_all_equal_scores(self):
        batch = make_results("s", 2, scores=[3.0, 3.0])
        assert [n for _, n in normalize_scores(batch)] == [1.0, 1.0]

    def test_rank_fallback(self):
        batch = make_results("s", 3)
        norms = [n for _, n in normalize_scores(batch)]
        assert norms == pytest.approx([1.0, 0.5, 1 / 3])

    def test_empty(self):
        assert normalize_scores([]) == []


class TestRegistry:
    def test_duplicate_name_conflicts(self):
        registry = ConnectorRegistry()
        registry.register(CallableConnector("youtube", lambda q: []))
        with pytest.raises(ConflictError):
            registry.register(CallableConnector("youtube", lambda q: []))

    def test_empty_registry_is_validation_error(self):
        with pytest.raises(ValidationError, match="no sources"):
            federated_search(ConnectorRegistry(), "anything")

    def test_unknown_source(self):
        registry = static_registry({"web": []})
        with pytest.raises(ValidationError, match="unknown source"):
            federated_search(registry, "q", sources=["bing"])

    def test_registration_order_breaks_ties(self):
        registry = static_registry({
            "local": make_results("local", 1),
            "youtube": make_results("youtube", 1),
        })
        page = federated_search(registry, "q", page_size=2)
        assert [r.source for r in page.results] == ["local", "youtube"]


class TestPagination:
    def test_exhaustion_arithmetic(self):
        registry = static_registry({
            "a": make_results("a", 3),
            "b": make_results("b", 3),
        })
        first = federated_search(registry, "q", page_size=4)
        assert len(first.results) == 4 and first.next_cursor
        second = federated_search(registry, "q", page_size=4,
                                  cursor=first.next_cursor)
        assert len(second.results) == 2 and second.next_cursor
        third = federated_search(registry, "q", page_size=4,
                                 cursor=second.next_cursor)
        assert third.results == [] and third.next_cursor is None

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_paged_concatenation_equals_unpaged(self, seed, tmp_path):
        rng = random.Random(seed)
        registry = ConnectorRegistry()
        total = 0
        for name in ("alpha", "beta", "gamma"):
            n = rng.randint(0, 8)
            total += n
            path = tmp_path / f"{name}.ndjson"
            with open(path, "w") as fh:
                for i in range(n):
                    record = {"url": f"u://{name}/{i}", "title": f"common {name} {i}",
                              "description": ""}
                    if rng.random() < 0.5:
                        record["score"] = rng.uniform(0, 10)
                    fh.write(json.dumps(record) + "\n")
            registry.register(FixtureFileConnector(name, path))
        unpaged = federated_search(registry, "common", page_size=max(total, 1))
        pages, cursor = [], None
        for _ in range(50):
            page = federated_search(registry, "common",
                                    page_size=rng.randint(1, 4), cursor=cursor)
            pages.extend(page.results)
            cursor = page.next_cursor
            if cursor is None:
                break
        assert [(r.source, r.rank, r.url) for r in pages] == \
            [(r.source, r.rank, r.url) for r in unpaged.results]
        assert len({(r.source, r.rank) for r in pages}) == len(pages)

    def test_cursor_for_unknown_source_rejected(self):
        registry = static_registry({"a": make_results("a", 2)})
        bad = Cursor(per_source_offsets={"ghost": 1}, page_size=2).encode()
        with pytest.raises(ValidationError):
            federated_search(registry, "q", cursor=bad)


class TestMergeProperties:
    def test_scores_non_increasing_and_in_unit_interval(self):
        registry = ConnectorRegistry()
        for name in ("youtube", "vimeo", "web"):
            registry.register(
                FixtureFileConnector(name, FIXTURES / "sources" / f"{name}.ndjson"))
        page = federated_search(registry, "language", page_size=50)
        assert page.results, "fixture corpus should match 'language'"
        norms = []
        batch_norms = {}
        for name in ("youtube", "vimeo", "web"):
            fetched = registry.get(name).fetch("language")
            for result, norm in normalize_scores(fetched):
                batch_norms[(result.source, result.rank)] = norm
        for r in page.results:
            norms.append(batch_norms[(r.source, r.rank)])
        assert all(0.0 <= n <= 1.0 for n in norms)
        assert norms == sorted(norms, reverse=True)

    def test_determinism_under_random_completion_order(self):
        def delayed(batch):
            def fetch(query):
                time.sleep(random.uniform(0, 0.05))
                return list(batch)
            return fetch

        registry = ConnectorRegistry()
        registry.register(CallableConnector(
            "a", delayed(make_results("a", 4, scores=[9.0, 5.0, 3.0, 1.0]))))
        registry.register(CallableConnector("b", delayed(make_results("b", 3))))
        registry.register(CallableConnector(
            "c", delayed(make_results("c", 2, scores=[2.0, 2.0]))))
        baseline = None
        for _ in range(10):
            page = federated_search(registry, "q", page_size=6)
            observed = ([(r.source, r.rank, r.url, r.title) for r in page.results],
                        page.next_cursor, page.degraded_sources)
            if baseline is None:
                baseline = observed
            assert observed == baseline


class TestFailureIsolation:
    def test_missing_fixture_file_degrades(self, tmp_path):
        registry = ConnectorRegistry()
        good = tmp_path / "good.ndjson"
        good.write_text(json.dumps({"url": "u://g/1", "title": "needle one"}) + "\n")
        registry.register(FixtureFileConnector("good", good))
        registry.register(FixtureFileConnector("gone", tmp_path / "missing.ndjson"))
        page = federated_search(registry, "needle", page_size=10)
        assert [r.source for r in page.results] == ["good"]
        assert page.degraded_sources == ["gone"]

    def test_hung_connector_times_out_not_query(self):
        def hang(query):
            time.sleep(30)
            return []

        registry = static_registry({"fast": make_results("fast", 2)})
        registry.register(CallableConnector("slow", hang))
        started = time.monotonic()
        page = federated_search(registry, "q", page_size=5, timeout_s=0.2)
        assert time.monotonic() - started < 5
        assert page.degraded_sources == ["slow"]
        assert [r.source for r in page.results] == ["fast", "fast"]

    def test_surviving_sources_unaffected_by_failures(self):
        batches = {"a": make_results("a", 3, scores=[5.0, 2.0, 1.0]),
                   "b": make_results("b", 2)}
        with_failure = ConnectorRegistry()
        with_failure.register(CallableConnector("a", lambda q: list(batches["a"])))
        with_failure.register(CallableConnector(
            "boom", lambda q: (_ for _ in ()).throw(RuntimeError("down"))))
        with_failure.register(CallableConnector("b", lambda q: list(batches["b"])))
        healthy_only = static_registry(batches)
        degraded_page = federated_search(with_failure, "q", page_size=10)
        healthy_page = federated_search(healthy_only, "q", page_size=10)
        assert [(r.source, r.rank) for r in degraded_page.results] == \
            [(r.source, r.rank) for r in healthy_page.results]
        assert degraded_page.degraded_sources == ["boom"]


class StubHandler(BaseHTTPRequestHandler):
    payload = {"data": {"items": [
        {"link": "u://r/1", "heading": "Remote one", "about": "first", "pts": 8},
        {"link": "u://r/2", "heading": "Remote two", "about": "second", "pts": 3},
    ]}}

    def do_GET(self):
        body = json.dumps(self.payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


class TestRemoteHttpConnector:
    def test_fetch_against_stub_server(self):
        server = HTTPServer(("127.0.0.1", 0), StubHandler)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            connector = RemoteHttpConnector("remote", {
                "endpoint_url": f"http://127.0.0.1:{server.server_port}/search",
                "query_param": "query",
                "result_path": "data.items",
                "url_field": "link",
                "title_field": "heading",
                "description_field": "about",
                "score_field": "pts",
            })
            results = connector.fetch("anything")
        finally:
            server.shutdown()
        assert [(r.rank, r.url, r.title, r.raw_score) for r in results] == [
            (1, "u://r/1", "Remote one", 8.0),
            (2, "u://r/2", "Remote two", 3.0),
        ]
        assert results[0].description == "first"
