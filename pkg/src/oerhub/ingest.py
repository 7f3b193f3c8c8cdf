"""Manually triggered, incremental ingestion of talk-dump files.

A dump is newline-delimited JSON, one record per talk. New talks are
added; known talks only gain transcripts for languages they do not have
yet; existing transcripts are never touched. Re-running the same dump is
a no-op.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError
from .model import Cue, Talk, Transcript
from .store import Store
from .textindex import IndexedDocument, InvertedIndex


@dataclass
class DeltaReport:
    talks_added: int = 0
    transcripts_added: int = 0
    records_skipped: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"talks_added": self.talks_added,
                "transcripts_added": self.transcripts_added,
                "records_skipped": self.records_skipped,
                "errors": [{"line": n, "message": m} for n, m in self.errors]}


def talk_document(talk: Talk) -> IndexedDocument:
    """Index representation of a talk; only the English transcript is
    searchable, other languages are stored but not indexed."""
    fields = {"title": talk.title, "description": talk.description}
    english = talk.transcripts.get("en")
    if english is not None:
        fields["transcript"] = " ".join(cue.text for cue in english.cues)
    return IndexedDocument(doc_id=f"talk:{talk.id}", kind="talk", fields=fields)


def resource_document(resource) -> IndexedDocument:
    fields = {
        "title": resource.title,
        "description": resource.description,
        "tags": " ".join(tag for _, tag in resource.tags),
        "comments": " ".join(c.text for c in resource.comments),
    }
    return IndexedDocument(doc_id=f"resource:{resource.id}", kind="resource",
                           fields=fields)


def _parse_record(line_no: int, line: str) -> dict:
    record = json.loads(line)
    if not isinstance(record, dict):
        raise ValueError("record is not an object")
    if not record.get("external_id"):
        raise ValueError("missing external_id")
    if not record.get("title"):
        raise ValueError("missing title")
    for tr in record.get("transcripts", []):
        if not tr.get("language"):
            raise ValueError("transcript missing language")
        if not tr.get("cues"):
            raise ValueError(f"transcript {tr.get('language')!r} has no cues")
    return record


def ingest_dump(store: Store, index: InvertedIndex, path) -> DeltaReport:
    """Ingest one dump file; idempotent, per-line error tolerant."""
    dump_path = Path(path)
    if not dump_path.exists():
        raise ValidationError(f"dump file not found: {dump_path}")
    report = DeltaReport()
    seen_external: set[str] = set()
    with open(dump_path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = _parse_record(line_no, line)
            except (json.JSONDecodeError, ValueError) as exc:
                report.errors.append((line_no, str(exc)))
                continue
            external_id = record["external_id"]
            if external_id in seen_external:
                report.errors.append(
                    (line_no, f"duplicate external_id {external_id!r} in dump"))
                continue
            seen_external.add(external_id)
            _ingest_record(store, index, record, report)
    return report


def _ingest_record(store: Store, index: InvertedIndex, record: dict,
                   report: DeltaReport) -> None:
    external_id = record["external_id"]
    talk_id = store.talk_id_by_external.get(external_id)
    ops = []
    changed = False
    if talk_id is None:
        talk_id = store.next_id("talk")
        talk = Talk(id=talk_id, title=record["title"],
                    description=record.get("description", ""),
                    speaker=record.get("speaker", ""),
                    duration_s=int(record.get("duration_s", 0)),
                    published_at=int(record.get("published_at", 0)),
                    source_url=record.get("source_url", ""))
        ops.append(Store.op_talk_external(external_id, talk_id))
        ops.append(Store.op_counter("talk", int(talk_id)))
        report.talks_added += 1
        changed = True
    else:
        talk = store.talks[talk_id]

    for tr in record.get("transcripts", []):
        language = tr["language"].lower()
        if language in talk.transcripts:
            continue  # existing transcripts are immutable
        cues = [Cue(start_ms=int(c["start_ms"]), dur_ms=int(c["dur_ms"]),
                    text=c["text"]) for c in tr["cues"]]
        talk.transcripts[language] = Transcript(talk_id=talk_id,
                                                language=language, cues=cues)
        report.transcripts_added += 1
        changed = True

    if changed:
        ops.append(Store.op_talk(talk))
        store.commit(ops)
        index.reindex_document(talk_document(talk))
    else:
        report.records_skipped += 1


def reindex_all(store: Store, index: InvertedIndex) -> int:
    """Rebuild the index from every talk and resource; atomic swap."""
    fresh = InvertedIndex()
    count = 0
    for talk in store.talks.values():
        fresh.index_document(talk_document(talk))
        count += 1
    for resource in store.resources.values():
        fresh.index_document(resource_document(resource))
        count += 1
    with index._lock:
        index.docs = fresh.docs
        index.postings = fresh.postings
    return count
