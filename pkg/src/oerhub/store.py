"""Append-only persistent store for all platform entities.

Every commit is one JSON line in ``store.log``; replaying the log on open
restores full state, so a commit of several entities is atomic (one line).
Identifiers are monotone per-entity-type counters rendered as decimal
strings. Uploaded files live in a blob directory keyed by content hash.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import asdict
from pathlib import Path

from .errors import ValidationError
from .model import (
    ActivityEvent,
    ActivityKind,
    Annotation,
    Comment,
    Course,
    Cue,
    Group,
    MediaType,
    Message,
    Resource,
    Role,
    Source,
    Talk,
    Transcript,
    User,
)


def now_ms() -> int:
    return int(time.time() * 1000)


def _user_to_dict(u: User) -> dict:
    d = asdict(u)
    d["password_hash"] = u.password_hash.hex()
    d["salt"] = u.salt.hex()
    d["role"] = u.role.value
    d["course_ids"] = sorted(u.course_ids)
    return d


def _user_from_dict(d: dict) -> User:
    return User(id=d["id"], username=d["username"],
                password_hash=bytes.fromhex(d["password_hash"]),
                salt=bytes.fromhex(d["salt"]), role=Role(d["role"]),
                course_ids=set(d["course_ids"]),
                research_consent=d.get("research_consent", False))


def _resource_to_dict(r: Resource) -> dict:
    d = asdict(r)
    d["source"] = r.source.value
    d["media_type"] = r.media_type.value
    d["tags"] = [list(t) for t in r.tags]
    return d


def _resource_from_dict(d: dict) -> Resource:
    return Resource(
        id=d["id"], source=Source(d["source"]), url=d["url"], title=d["title"],
        description=d.get("description", ""), thumbnail_url=d.get("thumbnail_url"),
        media_type=MediaType(d["media_type"]),
        owner_id=d.get("owner_id"), created_at=d.get("created_at", 0),
        tags=[tuple(t) for t in d.get("tags", [])],
        comments=[Comment(**c) for c in d.get("comments", [])],
        ratings={k: int(v) for k, v in d.get("ratings", {}).items()},
    )


def _talk_to_dict(t: Talk) -> dict:
    return asdict(t)


def _talk_from_dict(d: dict) -> Talk:
    transcripts = {}
    for lang, tr in d.get("transcripts", {}).items():
        transcripts[lang] = Transcript(
            talk_id=tr["talk_id"], language=tr["language"],
            cues=[Cue(**c) for c in tr["cues"]])
    return Talk(id=d["id"], title=d["title"], description=d.get("description", ""),
                speaker=d.get("speaker", ""), duration_s=d.get("duration_s", 0),
                published_at=d.get("published_at", 0),
                source_url=d.get("source_url", ""), transcripts=transcripts)


def _course_to_dict(c: Course) -> dict:
    d = asdict(c)
    d["teacher_ids"] = sorted(c.teacher_ids)
    d["group_ids"] = sorted(c.group_ids)
    return d


def _group_to_dict(g: Group) -> dict:
    d = asdict(g)
    d["member_ids"] = sorted(g.member_ids)
    return d


class Store:
    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.blob_dir = self.data_dir / "blobs"
        self.blob_dir.mkdir(exist_ok=True)
        self.log_path = self.data_dir / "store.log"

        self.users: dict[str, User] = {}
        self.courses: dict[str, Course] = {}
        self.groups: dict[str, Group] = {}
        self.resources: dict[str, Resource] = {}
        self.talks: dict[str, Talk] = {}
        self.annotations: dict[str, Annotation] = {}
        self.messages: dict[str, Message] = {}
        self.activity: list[ActivityEvent] = []
        self.talk_id_by_external: dict[str, str] = {}
        self._counters: dict[str, int] = {}
        self._lock = threading.RLock()

        if self.log_path.exists():
            self._replay()

    # -- log machinery ----------------------------------------------------

    def _replay(self) -> None:
        with open(self.log_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(json.loads(line), persist=False)

    def commit(self, ops: list[dict]) -> None:
        """Apply a batch of operations and persist them as one log line."""
        with self._lock:
            record = {"ops": ops}
            self._apply(record, persist=False)
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    def _apply(self, record: dict, persist: bool) -> None:
        for op in record["ops"]:
            kind, data = op["kind"], op["data"]
            if kind == "user":
                self.users[data["id"]] = _user_from_dict(data)
            elif kind == "course":
                self.courses[data["id"]] = Course(
                    id=data["id"], title=data["title"],
                    teacher_ids=set(data["teacher_ids"]),
                    group_ids=set(data["group_ids"]))
            elif kind == "group":
                self.groups[data["id"]] = Group(
                    id=data["id"], title=data["title"],
                    course_id=data.get("course_id"),
                    member_ids=set(data["member_ids"]),
                    resource_ids=list(data["resource_ids"]))
            elif kind == "resource":
                self.resources[data["id"]] = _resource_from_dict(data)
            elif kind == "talk":
                talk = _talk_from_dict(data)
                self.talks[talk.id] = talk
            elif kind == "talk_external":
                self.talk_id_by_external[data["external_id"]] = data["talk_id"]
            elif kind == "annotation":
                self.annotations[data["id"]] = Annotation(**data)
            elif kind == "message":
                self.messages[data["id"]] = Message(**data)
            elif kind == "event":
                event = ActivityEvent(id=data["id"], user_id=data["user_id"],
                                      kind=ActivityKind(data["kind"]),
                                      payload=data["payload"], at=data["at"])
                self.activity.append(event)
                counter = self._counters.get("event", 0)
                self._counters["event"] = max(counter, event.id)
            elif kind == "counter":
                self._counters[data["name"]] = max(
                    self._counters.get(data["name"], 0), data["value"])
            else:
                raise ValidationError(f"unknown log op {kind!r}")

    # -- identifiers ------------------------------------------------------

    def next_id(self, entity: str) -> str:
        with self._lock:
            value = self._counters.get(entity, 0) + 1
            self._counters[entity] = value
            return str(value)

    def next_event_seq(self) -> int:
        with self._lock:
            value = self._counters.get("event", 0) + 1
            self._counters["event"] = value
            return value

    # -- op builders (used with commit) -----------------------------------

    @staticmethod
    def op_user(u: User) -> dict:
        return {"kind": "user", "data": _user_to_dict(u)}

    @staticmethod
    def op_course(c: Course) -> dict:
        return {"kind": "course", "data": _course_to_dict(c)}

    @staticmethod
    def op_group(g: Group) -> dict:
        return {"kind": "group", "data": _group_to_dict(g)}

    @staticmethod
    def op_resource(r: Resource) -> dict:
        return {"kind": "resource", "data": _resource_to_dict(r)}

    @staticmethod
    def op_talk(t: Talk) -> dict:
        return {"kind": "talk", "data": _talk_to_dict(t)}

    @staticmethod
    def op_talk_external(external_id: str, talk_id: str) -> dict:
        return {"kind": "talk_external",
                "data": {"external_id": external_id, "talk_id": talk_id}}

    @staticmethod
    def op_annotation(a: Annotation) -> dict:
        return {"kind": "annotation", "data": asdict(a)}

    @staticmethod
    def op_message(m: Message) -> dict:
        return {"kind": "message", "data": asdict(m)}

    @staticmethod
    def op_event(e: ActivityEvent) -> dict:
        return {"kind": "event", "data": {"id": e.id, "user_id": e.user_id,
                                          "kind": e.kind.value,
                                          "payload": e.payload, "at": e.at}}

    @staticmethod
    def op_counter(name: str, value: int) -> dict:
        return {"kind": "counter", "data": {"name": name, "value": value}}

    # -- blobs ------------------------------------------------------------

    def store_blob(self, data: bytes) -> str:
        """Write bytes under their sha256 digest; returns the blob path."""
        digest = hashlib.sha256(data).hexdigest()
        path = self.blob_dir / digest
        if not path.exists():
            path.write_bytes(data)
        return str(path)
