"""Inverted index with field-aware BM25 ranking and snippet extraction.

Documents carry up to five text fields (title, description, transcript,
tags, comments). Scoring is per-field BM25 combined by field weights.
Single writer, many readers: mutations hold a lock; searches work on the
live structures, which are only touched under that lock.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field

from .errors import ConflictError, NotFoundError, ValidationError
from .textutil import tokenize, tokenize_with_offsets

K1 = 1.2
B = 0.75

FIELDS = ("title", "description", "transcript", "tags", "comments")
DEFAULT_FIELD_WEIGHTS = {
    "title": 3.0,
    "description": 1.5,
    "transcript": 1.0,
    "tags": 2.0,
    "comments": 1.0,
}
SNIPPET_RADIUS = 60


@dataclass
class IndexedDocument:
    doc_id: str
    kind: str  # "talk" | "resource"
    fields: dict[str, str]
    length_by_field: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if "title" not in self.fields:
            raise ValidationError("title field required")
        for name in self.fields:
            if name not in FIELDS:
                raise ValidationError(f"unknown field {name!r}")
        if not self.length_by_field:
            self.length_by_field = {name: len(tokenize(text))
                                    for name, text in self.fields.items()}


@dataclass
class Posting:
    doc_id: str
    field: str
    term_frequency: int
    positions: list[int]


@dataclass
class Snippet:
    text: str
    highlights: list[tuple[int, int]]


@dataclass
class SearchHit:
    doc_id: str
    score: float
    matched_fields: set[str]
    snippet: Snippet | None = None


@dataclass
class ParsedQuery:
    terms: list[str]              # every term, phrase members included
    phrases: list[list[str]]      # quoted phrases, must be adjacent somewhere


def parse_query(query: str) -> ParsedQuery:
    """Split a query into terms and quoted phrase constraints."""
    phrases = []
    rest = []
    pos = 0
    for m in re.finditer(r'"([^"]*)"', query):
        rest.append(query[pos:m.start()])
        phrase = tokenize(m.group(1))
        if phrase:
            phrases.append(phrase)
        pos = m.end()
    rest.append(query[pos:])
    terms = [t for p in phrases for t in p] + tokenize(" ".join(rest))
    # dedupe, keep order
    seen: set[str] = set()
    terms = [t for t in terms if not (t in seen or seen.add(t))]
    if not terms:
        raise ValidationError("empty query")
    return ParsedQuery(terms=terms, phrases=phrases)


class InvertedIndex:
    def __init__(self):
        self._lock = threading.Lock()
        self.docs: dict[str, IndexedDocument] = {}
        # term -> field -> doc_id -> Posting
        self.postings: dict[str, dict[str, dict[str, Posting]]] = {}

    # -- mutation ---------------------------------------------------------

    def index_document(self, doc: IndexedDocument) -> None:
        with self._lock:
            if doc.doc_id in self.docs:
                raise ConflictError(f"document {doc.doc_id!r} already indexed")
            self._add(doc)

    def delete_document(self, doc_id: str) -> None:
        with self._lock:
            if doc_id not in self.docs:
                raise NotFoundError(f"document {doc_id!r} not indexed")
            self._drop(doc_id)

    def reindex_document(self, doc: IndexedDocument) -> None:
        """Replace (or insert) a document in one locked step."""
        with self._lock:
            if doc.doc_id in self.docs:
                self._drop(doc.doc_id)
            self._add(doc)

    def _add(self, doc: IndexedDocument) -> None:
        self.docs[doc.doc_id] = doc
        for name, text in doc.fields.items():
            for position, token in enumerate(tokenize(text)):
                by_field = self.postings.setdefault(token, {})
                by_doc = by_field.setdefault(name, {})
                posting = by_doc.get(doc.doc_id)
                if posting is None:
                    by_doc[doc.doc_id] = Posting(doc.doc_id, name, 1, [position])
                else:
                    posting.term_frequency += 1
                    posting.positions.append(position)

    def _drop(self, doc_id: str) -> None:
        del self.docs[doc_id]
        empty_terms = []
        for term, by_field in self.postings.items():
            empty_fields = []
            for name, by_doc in by_field.items():
                by_doc.pop(doc_id, None)
                if not by_doc:
                    empty_fields.append(name)
            for name in empty_fields:
                del by_field[name]
            if not by_field:
                empty_terms.append(term)
        for term in empty_terms:
            del self.postings[term]

    # -- statistics -------------------------------------------------------

    @property
    def doc_count(self) -> int:
        return len(self.docs)

    def document_frequency(self, term: str, field_name: str) -> int:
        return len(self.postings.get(term, {}).get(field_name, {}))

    def average_field_length(self, field_name: str) -> float:
        lengths = [d.length_by_field[field_name] for d in self.docs.values()
                   if field_name in d.length_by_field]
        if not lengths:
            return 0.0
        return sum(lengths) / len(lengths)

    # -- search -----------------------------------------------------------

    def search_bm25(self, query: str, field_weights: dict[str, float] | None = None,
                    limit: int = 10) -> list[SearchHit]:
        """Rank documents by weighted per-field BM25.

        Quoted phrases must appear with consecutive positions in at least
        one field of a document for it to qualify. Results sort by score
        descending, ties by doc_id ascending.
        """
        if limit < 1:
            raise ValidationError("limit must be >= 1")
        weights = dict(DEFAULT_FIELD_WEIGHTS)
        if field_weights:
            weights.update(field_weights)
        parsed = parse_query(query)
        n_docs = self.doc_count
        if n_docs == 0:
            return []
        avg_len = {name: self.average_field_length(name) for name in FIELDS}

        scores: dict[str, float] = {}
        matched: dict[str, set[str]] = {}
        for term in parsed.terms:
            for field_name, by_doc in self.postings.get(term, {}).items():
                df = len(by_doc)
                idf = math.log((n_docs - df + 0.5) / (df + 0.5) + 1)
                for doc_id, posting in by_doc.items():
                    doc = self.docs[doc_id]
                    dl = doc.length_by_field.get(field_name, 0)
                    denom = posting.term_frequency + K1 * (
                        1 - B + B * dl / avg_len[field_name])
                    part = idf * posting.term_frequency * (K1 + 1) / denom
                    scores[doc_id] = scores.get(doc_id, 0.0) + weights[field_name] * part
                    matched.setdefault(doc_id, set()).add(field_name)

        hits = []
        for doc_id, score in scores.items():
            if score <= 0:
                continue
            if parsed.phrases and not all(
                    self._has_phrase(doc_id, phrase) for phrase in parsed.phrases):
                continue
            hits.append(SearchHit(doc_id=doc_id, score=score,
                                  matched_fields=matched[doc_id]))
        hits.sort(key=lambda h: (-h.score, h.doc_id))
        return hits[:limit]

    def _has_phrase(self, doc_id: str, phrase: list[str]) -> bool:
        for field_name in self.docs[doc_id].fields:
            position_lists = []
            ok = True
            for term in phrase:
                posting = self.postings.get(term, {}).get(field_name, {}).get(doc_id)
                if posting is None:
                    ok = False
                    break
                position_lists.append(set(posting.positions))
            if not ok:
                continue
            for start in position_lists[0]:
                if all(start + k in position_lists[k] for k in range(1, len(phrase))):
                    return True
        return False


def make_snippet(doc: IndexedDocument, field_name: str, query_terms: list[str],
                 radius: int = SNIPPET_RADIUS) -> Snippet | None:
    """Excerpt around the first query-term match in a field.

    The window spans ``radius`` characters on each side of the first match,
    extended outward to token boundaries, with ellipsis markers when
    truncated. Every query-term occurrence inside the window is highlighted.
    Returns None when no term occurs in the field.
    """
    if field_name not in doc.fields:
        raise ValidationError(f"field {field_name!r} not present")
    text = doc.fields[field_name]
    wanted = {t.lower() for t in query_terms}
    spans = [(start, end) for token, start, end in tokenize_with_offsets(text)
             if token in wanted]
    if not spans:
        return None
    first_start, first_end = spans[0]
    lo = max(0, first_start - radius)
    hi = min(len(text), first_end + radius)
    # extend to token boundaries so no token is cut
    for token, start, end in tokenize_with_offsets(text):
        if start < lo < end:
            lo = start
        if start < hi < end:
            hi = end
    prefix = "…" if lo > 0 else ""
    suffix = "…" if hi < len(text) else ""
    excerpt = prefix + text[lo:hi] + suffix
    shift = len(prefix) - lo
    highlights = [(s + shift, e + shift) for s, e in spans if s >= lo and e <= hi]
    return Snippet(text=excerpt, highlights=highlights)
