"""Platform core: authentication, sessions, search delegation, groups,
resource metadata, annotation, activity log, stats, and messaging.

The HTTP layer in :mod:`oerhub.api` is a thin binding over this class, so
every operation is testable without a server. All writes serialize through
one lock; reads work on committed state.
"""

from __future__ import annotations

import hashlib
import secrets
import threading
from dataclasses import dataclass, field

from . import lexsem
from .config import Config
from .errors import (
    AuthError,
    ConflictError,
    NotFoundError,
    PermissionDeniedError,
    ValidationError,
)
from .federated import (
    Connector,
    ConnectorRegistry,
    FederatedPage,
    SourceResult,
    federated_search,
)
from .ingest import resource_document, talk_document
from .model import (
    ActivityEvent,
    ActivityKind,
    Annotation,
    Comment,
    Course,
    Group,
    MediaType,
    Message,
    Resource,
    Role,
    Source,
    User,
    aggregate_rating,
    normalize_source_result,
)
from .store import Store, now_ms
from .textindex import InvertedIndex, make_snippet
from .textutil import tokenize, tokenize_with_offsets
from .wordnetdb import LexicalDatabase

PBKDF2_ITERATIONS = 100_000
SALT_BYTES = 16


def hash_password(password: str, salt: bytes) -> bytes:
    return hashlib.pbkdf2_hmac("sha256", password.encode(), salt, PBKDF2_ITERATIONS)


@dataclass
class Session:
    token: str
    user_id: str
    expires_at: int


@dataclass
class StatsReport:
    users: int
    groups: int
    resources_saved: int
    youtube_videos: int
    vimeo_videos: int
    flickr_photos: int
    courses: int
    comments: int

    def to_dict(self) -> dict:
        return {"users": self.users, "groups": self.groups,
                "resources_saved": self.resources_saved,
                "youtube_videos": self.youtube_videos,
                "vimeo_videos": self.vimeo_videos,
                "flickr_photos": self.flickr_photos,
                "courses": self.courses, "comments": self.comments}


@dataclass
class ActivityFilter:
    course: str | None = None
    user: str | None = None
    kind: str | None = None
    since: int | None = None


class Platform:
    def __init__(self, store: Store, index: InvertedIndex,
                 wordnet: LexicalDatabase | None = None,
                 config: Config | None = None):
        self.store = store
        self.index = index
        self.wordnet = wordnet
        self.config = config or Config()
        self.registry = ConnectorRegistry()
        self.sessions: dict[str, Session] = {}
        self._write_lock = threading.RLock()

    # -- connectors -------------------------------------------------------

    def register_local_talk_connector(self) -> None:
        self.registry.register(LocalTalkConnector(self))

    # -- auth -------------------------------------------------------------

    def create_user(self, username: str, password: str, role: Role,
                    research_consent: bool = False) -> User:
        with self._write_lock:
            if not username:
                raise ValidationError("username must be non-empty")
            if any(u.username == username for u in self.store.users.values()):
                raise ConflictError(f"username {username!r} taken")
            salt = secrets.token_bytes(SALT_BYTES)
            user = User(id=self.store.next_id("user"), username=username,
                        password_hash=hash_password(password, salt), salt=salt,
                        role=role, research_consent=research_consent)
            self.store.commit([Store.op_user(user),
                               Store.op_counter("user", int(user.id))])
            return user

    def login(self, username: str, password: str) -> Session:
        with self._write_lock:
            user = next((u for u in self.store.users.values()
                         if u.username == username), None)
            # identical error for unknown user and wrong password
            if user is None or not secrets.compare_digest(
                    hash_password(password, user.salt), user.password_hash):
                raise AuthError("invalid credentials")
            ttl_ms = self.config.session_ttl_hours * 3600 * 1000
            session = Session(token=secrets.token_urlsafe(32), user_id=user.id,
                              expires_at=now_ms() + ttl_ms)
            self.sessions[session.token] = session
            self._record(user.id, ActivityKind.LOGIN, {})
            return session

    def _require_session(self, token: str | None) -> User:
        session = self.sessions.get(token or "")
        if session is None or session.expires_at <= now_ms():
            raise AuthError("invalid or expired session")
        return self.store.users[session.user_id]

    # -- activity ---------------------------------------------------------

    def _record(self, user_id: str, kind: ActivityKind, payload: dict) -> None:
        event = ActivityEvent(id=self.store.next_event_seq(), user_id=user_id,
                              kind=kind, payload=payload, at=now_ms())
        self.store.commit([Store.op_event(event)])

    def activity_query(self, token: str, flt: ActivityFilter) -> list[ActivityEvent]:
        caller = self._require_session(token)
        if caller.role is Role.STUDENT:
            raise PermissionDeniedError("activity data is not available to students")
        if caller.role is Role.TEACHER:
            own = {cid for cid, c in self.store.courses.items()
                   if caller.id in c.teacher_ids}
            if flt.course is None:
                allowed_courses = own
            elif flt.course in own:
                allowed_courses = {flt.course}
            else:
                raise PermissionDeniedError("not a teacher of that course")
            member_ids = set()
            for cid in allowed_courses:
                member_ids.update(u.id for u in self.store.users.values()
                                  if cid in u.course_ids)
        else:
            member_ids = None
            if flt.course is not None:
                member_ids = {u.id for u in self.store.users.values()
                              if flt.course in u.course_ids}
        events = []
        for event in self.store.activity:
            user = self.store.users.get(event.user_id)
            if user is None or not user.research_consent:
                continue  # consent gates export visibility
            if member_ids is not None and event.user_id not in member_ids:
                continue
            if flt.user is not None and event.user_id != flt.user:
                continue
            if flt.kind is not None and event.kind.value != flt.kind:
                continue
            if flt.since is not None and event.at < flt.since:
                continue
            events.append(event)
        return events

    # -- search -----------------------------------------------------------

    def api_search(self, token: str, query: str, sources: list[str] | None = None,
                   cursor: str | None = None,
                   page_size: int | None = None) -> FederatedPage:
        user = self._require_session(token)
        page = federated_search(self.registry, query, sources=sources,
                                cursor=cursor,
                                page_size=page_size or self.config.page_size)
        payload = {"query": query}
        if sources:
            payload["sources"] = ",".join(sources)
        if cursor:
            payload["cursor"] = cursor
        self._record(user.id, ActivityKind.SEARCH, payload)
        return page

    # -- groups and courses ----------------------------------------------

    def create_course(self, title: str, teacher_ids: set[str] | None = None) -> Course:
        with self._write_lock:
            teacher_ids = teacher_ids or set()
            for uid in teacher_ids:
                user = self.store.users.get(uid)
                if user is None or user.role is Role.STUDENT:
                    raise ValidationError(f"user {uid!r} cannot teach a course")
            course = Course(id=self.store.next_id("course"), title=title,
                            teacher_ids=set(teacher_ids))
            ops = [Store.op_course(course),
                   Store.op_counter("course", int(course.id))]
            for uid in teacher_ids:
                user = self.store.users[uid]
                user.course_ids.add(course.id)
                ops.append(Store.op_user(user))
            self.store.commit(ops)
            return course

    def create_group(self, token: str, title: str,
                     course_id: str | None = None) -> Group:
        user = self._require_session(token)
        with self._write_lock:
            if not title:
                raise ValidationError("title must be non-empty")
            if course_id is not None and course_id not in self.store.courses:
                raise NotFoundError(f"course {course_id!r}")
            group = Group(id=self.store.next_id("group"), title=title,
                          course_id=course_id, member_ids={user.id})
            ops = [Store.op_group(group),
                   Store.op_counter("group", int(group.id))]
            if course_id is not None:
                course = self.store.courses[course_id]
                course.group_ids.add(group.id)
                ops.append(Store.op_course(course))
                # membership in a course group implies course enrollment
                user.course_ids.add(course_id)
                ops.append(Store.op_user(user))
            self.store.commit(ops)
            self._record(user.id, ActivityKind.GROUP_CREATE, {"group_id": group.id})
            return group

    def join_group(self, token: str, group_id: str) -> Group:
        user = self._require_session(token)
        with self._write_lock:
            group = self._get_group(group_id)
            if user.id in group.member_ids:
                raise ConflictError("already a member")
            group.member_ids.add(user.id)
            ops = [Store.op_group(group)]
            if group.course_id is not None:
                user.course_ids.add(group.course_id)
                ops.append(Store.op_user(user))
            self.store.commit(ops)
            self._record(user.id, ActivityKind.GROUP_JOIN, {"group_id": group_id})
            return group

    def _get_group(self, group_id: str) -> Group:
        group = self.store.groups.get(group_id)
        if group is None:
            raise NotFoundError(f"group {group_id!r}")
        return group

    def _require_member(self, user: User, group: Group) -> None:
        if user.id not in group.member_ids:
            raise PermissionDeniedError("not a group member")

    # -- resources --------------------------------------------------------

    def save_resource_to_group(self, token: str, group_id: str, payload) -> Resource:
        user = self._require_session(token)
        with self._write_lock:
            group = self._get_group(group_id)
            self._require_member(user, group)
            if isinstance(payload, dict) and "resource_id" in payload:
                resource = self.store.resources.get(payload["resource_id"])
                if resource is None:
                    raise NotFoundError(f"resource {payload['resource_id']!r}")
                if resource.id in group.resource_ids:
                    raise ConflictError("resource already in group")
            else:
                source = Source(payload["source"]) if isinstance(payload, dict) \
                    else Source(payload.source)
                urls = {self.store.resources[rid].url for rid in group.resource_ids}
                url = payload["url"] if isinstance(payload, dict) else payload.url
                if url in urls:
                    raise ConflictError("resource with that url already in group")
                resource = normalize_source_result(
                    payload, source, resource_id=self.store.next_id("resource"),
                    owner_id=user.id, created_at=now_ms())
            group.resource_ids.append(resource.id)
            self.store.commit([Store.op_resource(resource), Store.op_group(group),
                               Store.op_counter("resource", int(resource.id))])
            self.index.reindex_document(resource_document(resource))
            self._record(user.id, ActivityKind.RESOURCE_SAVE,
                         {"group_id": group_id, "resource_id": resource.id})
            return resource

    def upload_resource(self, token: str, group_id: str, file_bytes: bytes,
                        metadata: dict) -> Resource:
        user = self._require_session(token)
        with self._write_lock:
            group = self._get_group(group_id)
            self._require_member(user, group)
            if not file_bytes:
                raise ValidationError("empty file")
            if len(file_bytes) > self.config.max_upload_mb * 1024 * 1024:
                raise ValidationError("file exceeds upload limit")
            title = metadata.get("title")
            if not title:
                raise ValidationError("title")
            blob_path = self.store.store_blob(file_bytes)
            resource = Resource(
                id=self.store.next_id("resource"), source=Source.UPLOAD,
                url=blob_path, title=title,
                description=metadata.get("description", ""),
                media_type=MediaType(metadata.get("media_type", "document")),
                owner_id=user.id, created_at=now_ms())
            group.resource_ids.append(resource.id)
            self.store.commit([Store.op_resource(resource), Store.op_group(group),
                               Store.op_counter("resource", int(resource.id))])
            self.index.reindex_document(resource_document(resource))
            self._record(user.id, ActivityKind.RESOURCE_UPLOAD,
                         {"group_id": group_id, "resource_id": resource.id})
            return resource

    def _get_resource(self, resource_id: str) -> Resource:
        resource = self.store.resources.get(resource_id)
        if resource is None:
            raise NotFoundError(f"resource {resource_id!r}")
        return resource

    def add_comment(self, token: str, resource_id: str, text: str) -> Resource:
        user = self._require_session(token)
        with self._write_lock:
            resource = self._get_resource(resource_id)
            if not text:
                raise ValidationError("comment text must be non-empty")
            comment = Comment(id=self.store.next_id("comment"), user_id=user.id,
                              text=text, created_at=now_ms())
            resource.comments.append(comment)
            self.store.commit([Store.op_resource(resource),
                               Store.op_counter("comment", int(comment.id))])
            self.index.reindex_document(resource_document(resource))
            self._record(user.id, ActivityKind.COMMENT, {"resource_id": resource_id})
            return resource

    def add_tag(self, token: str, resource_id: str, tag: str) -> Resource:
        user = self._require_session(token)
        with self._write_lock:
            resource = self._get_resource(resource_id)
            if not tag:
                raise ValidationError("tag must be non-empty")
            resource.tags.append((user.id, tag))
            self.store.commit([Store.op_resource(resource)])
            self.index.reindex_document(resource_document(resource))
            self._record(user.id, ActivityKind.TAG,
                         {"resource_id": resource_id, "tag": tag})
            return resource

    def add_rating(self, token: str, resource_id: str, rating: int) -> Resource:
        user = self._require_session(token)
        with self._write_lock:
            resource = self._get_resource(resource_id)
            if not isinstance(rating, int) or not 1 <= rating <= 5:
                raise ValidationError("rating must be an integer in 1..5")
            resource.ratings[user.id] = rating  # re-rate overwrites
            self.store.commit([Store.op_resource(resource)])
            self.index.reindex_document(resource_document(resource))
            self._record(user.id, ActivityKind.RATE,
                         {"resource_id": resource_id, "rating": str(rating)})
            return resource

    # -- talks and annotation --------------------------------------------

    def get_talk(self, token: str, talk_id: str, record_open: bool = True):
        user = self._require_session(token)
        talk = self.store.talks.get(talk_id)
        if talk is None:
            raise NotFoundError(f"talk {talk_id!r}")
        if record_open:
            self._record(user.id, ActivityKind.RESOURCE_OPEN, {"talk_id": talk_id})
        return talk

    def get_transcript(self, token: str, talk_id: str, language: str):
        talk = self.get_talk(token, talk_id, record_open=False)
        transcript = talk.transcripts.get(language.lower())
        if transcript is None:
            raise NotFoundError(f"no {language!r} transcript for talk {talk_id!r}")
        return transcript

    def annotate(self, token: str, talk_id: str, language: str, cue_index: int,
                 char_start: int, char_end: int, note: str | None = None):
        user = self._require_session(token)
        with self._write_lock:
            talk = self.store.talks.get(talk_id)
            if talk is None:
                raise NotFoundError(f"talk {talk_id!r}")
            transcript = talk.transcripts.get(language.lower())
            if transcript is None:
                raise NotFoundError(f"no {language!r} transcript")
            if not 0 <= cue_index < len(transcript.cues):
                raise ValidationError("cue_index out of range")
            cue_text = transcript.cues[cue_index].text
            if not (0 <= char_start < char_end <= len(cue_text)):
                raise ValidationError("selection offsets out of range")
            annotation = Annotation(
                id=self.store.next_id("annotation"), user_id=user.id,
                talk_id=talk_id, language=language.lower(), cue_index=cue_index,
                char_start=char_start, char_end=char_end, note=note,
                created_at=now_ms())
            self.store.commit([Store.op_annotation(annotation),
                               Store.op_counter("annotation", int(annotation.id))])
            tooltip = None
            selection = cue_text[char_start:char_end]
            if language.lower() == "en" and self.wordnet is not None:
                if len(tokenize(selection)) == 1:
                    tooltip = self._build_tooltip(cue_text, char_start, char_end)
            self._record(user.id, ActivityKind.ANNOTATE,
                         {"talk_id": talk_id, "cue_index": str(cue_index)})
            return annotation, tooltip

    def _build_tooltip(self, cue_text: str, char_start: int, char_end: int):
        tokens = tokenize_with_offsets(cue_text)
        target_index = next(
            (i for i, (_, s, e) in enumerate(tokens)
             if s < char_end and e > char_start), None)
        if target_index is None:
            return None
        word = tokens[target_index][0]
        ctx = lexsem.make_context_window([t for t, _, _ in tokens], target_index)
        return lexsem.build_tooltip(self.wordnet, word, ctx,
                                    alpha=self.config.alpha)

    def list_annotations(self, token: str, talk_id: str) -> list[Annotation]:
        self._require_session(token)
        return sorted((a for a in self.store.annotations.values()
                       if a.talk_id == talk_id), key=lambda a: int(a.id))

    # -- messaging --------------------------------------------------------

    def send_message(self, token: str, group_id: str, text: str) -> Message:
        user = self._require_session(token)
        with self._write_lock:
            group = self._get_group(group_id)
            if not text:
                raise ValidationError("message text must be non-empty")
            if user.role is Role.STUDENT:
                raise PermissionDeniedError("only teachers can send instructions")
            if user.role is Role.TEACHER:
                course = self.store.courses.get(group.course_id or "")
                if course is None or user.id not in course.teacher_ids:
                    raise PermissionDeniedError("not a teacher of this group's course")
            message = Message(id=self.store.next_id("message"), from_user=user.id,
                              to_group=group_id, text=text, created_at=now_ms())
            self.store.commit([Store.op_message(message),
                               Store.op_counter("message", int(message.id))])
            self._record(user.id, ActivityKind.MESSAGE_SEND, {"group_id": group_id})
            return message

    def list_messages(self, token: str, group_id: str) -> list[Message]:
        user = self._require_session(token)
        group = self._get_group(group_id)
        course = self.store.courses.get(group.course_id or "")
        allowed = (user.id in group.member_ids or user.role is Role.ADMIN
                   or (course is not None and user.id in course.teacher_ids))
        if not allowed:
            raise PermissionDeniedError("not a group member")
        return sorted((m for m in self.store.messages.values()
                       if m.to_group == group_id), key=lambda m: int(m.id))

    # -- stats ------------------------------------------------------------

    def stats(self, token: str) -> StatsReport:
        self._require_session(token)
        return self.stats_report()

    def stats_report(self) -> StatsReport:
        resources = self.store.resources.values()
        return StatsReport(
            users=len(self.store.users),
            groups=len(self.store.groups),
            resources_saved=len(self.store.resources),
            youtube_videos=sum(1 for r in resources if r.source is Source.YOUTUBE),
            vimeo_videos=sum(1 for r in resources if r.source is Source.VIMEO),
            flickr_photos=sum(1 for r in resources if r.source is Source.FLICKR),
            courses=len(self.store.courses),
            comments=sum(len(r.comments) for r in self.store.resources.values()),
        )


class LocalTalkConnector(Connector):
    """Searches the local talk index; talk results carry a transcript
    snippet with the matched terms in their description slot."""

    name = "local_talk"
    kind = "local_index"

    def __init__(self, platform: Platform):
        self.platform = platform

    def fetch(self, query: str) -> list[SourceResult]:
        from .textindex import parse_query

        hits = self.platform.index.search_bm25(query, limit=50)
        terms = parse_query(query).terms
        results = []
        rank = 0
        for hit in hits:
            if not hit.doc_id.startswith("talk:"):
                continue
            talk_id = hit.doc_id.split(":", 1)[1]
            talk = self.platform.store.talks[talk_id]
            doc = self.platform.index.docs[hit.doc_id]
            description = talk.description
            if "transcript" in doc.fields:
                snippet = make_snippet(doc, "transcript", terms)
                if snippet is not None:
                    description = snippet.text
            rank += 1
            results.append(SourceResult(
                source=self.name, rank=rank, url=f"/api/talks/{talk_id}",
                title=talk.title, description=description,
                raw_score=hit.score))
        return results
