"""Domain types shared by every module: users, groups, resources, talks,
transcripts, annotations, and the activity log.

All types are plain values; mutation happens only through the service layer.
Timestamps are integer milliseconds since the Unix epoch (UTC).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ValidationError


class Role(str, enum.Enum):
    STUDENT = "student"
    TEACHER = "teacher"
    ADMIN = "admin"


class Source(str, enum.Enum):
    LOCAL_TALK = "local_talk"
    YOUTUBE = "youtube"
    VIMEO = "vimeo"
    SLIDESHARE = "slideshare"
    FLICKR = "flickr"
    WEB = "web"
    UPLOAD = "upload"


class MediaType(str, enum.Enum):
    VIDEO = "video"
    IMAGE = "image"
    DOCUMENT = "document"
    WEBPAGE = "webpage"


class ActivityKind(str, enum.Enum):
    LOGIN = "login"
    SEARCH = "search"
    RESOURCE_OPEN = "resource_open"
    RESOURCE_SAVE = "resource_save"
    RESOURCE_UPLOAD = "resource_upload"
    COMMENT = "comment"
    TAG = "tag"
    RATE = "rate"
    ANNOTATE = "annotate"
    GROUP_CREATE = "group_create"
    GROUP_JOIN = "group_join"
    MESSAGE_SEND = "message_send"


@dataclass
class User:
    id: str
    username: str
    password_hash: bytes
    salt: bytes
    role: Role
    course_ids: set[str] = field(default_factory=set)
    research_consent: bool = False


@dataclass
class Course:
    id: str
    title: str
    teacher_ids: set[str] = field(default_factory=set)
    group_ids: set[str] = field(default_factory=set)


@dataclass
class Group:
    id: str
    title: str
    course_id: str | None = None
    member_ids: set[str] = field(default_factory=set)
    resource_ids: list[str] = field(default_factory=list)


@dataclass
class Comment:
    id: str
    user_id: str
    text: str
    created_at: int


@dataclass
class Resource:
    id: str
    source: Source
    url: str
    title: str
    description: str = ""
    thumbnail_url: str | None = None
    media_type: MediaType = MediaType.WEBPAGE
    owner_id: str | None = None
    created_at: int = 0
    tags: list[tuple[str, str]] = field(default_factory=list)  # (user_id, tag)
    comments: list[Comment] = field(default_factory=list)
    ratings: dict[str, int] = field(default_factory=dict)


@dataclass
class Cue:
    start_ms: int
    dur_ms: int
    text: str


@dataclass
class Transcript:
    talk_id: str
    language: str
    cues: list[Cue]


@dataclass
class Talk:
    id: str
    title: str
    description: str = ""
    speaker: str = ""
    duration_s: int = 0
    published_at: int = 0
    source_url: str = ""
    transcripts: dict[str, Transcript] = field(default_factory=dict)


@dataclass
class Annotation:
    id: str
    user_id: str
    talk_id: str
    language: str
    cue_index: int
    char_start: int
    char_end: int
    note: str | None
    created_at: int


@dataclass
class ActivityEvent:
    id: int  # strictly increasing sequence number
    user_id: str
    kind: ActivityKind
    payload: dict[str, str]
    at: int


@dataclass
class Message:
    id: str
    from_user: str
    to_group: str
    text: str
    created_at: int


# Media type inferred from the originating source; unknown sources fall back
# to webpage.
MEDIA_TYPE_BY_SOURCE = {
    Source.LOCAL_TALK: MediaType.VIDEO,
    Source.YOUTUBE: MediaType.VIDEO,
    Source.VIMEO: MediaType.VIDEO,
    Source.SLIDESHARE: MediaType.DOCUMENT,
    Source.FLICKR: MediaType.IMAGE,
    Source.WEB: MediaType.WEBPAGE,
}


def normalize_source_result(raw, source: Source, resource_id: str = "",
                            owner_id: str | None = None,
                            created_at: int = 0) -> Resource:
    """Map one raw connector result onto a Resource with empty user metadata.

    ``raw`` is anything with url/title/description/thumbnail_url attributes
    or keys. Missing url or title is a validation error naming the field.
    """
    def get(name):
        if isinstance(raw, dict):
            return raw.get(name)
        return getattr(raw, name, None)

    url = get("url")
    title = get("title")
    if not url:
        raise ValidationError("url")
    if not title:
        raise ValidationError("title")
    return Resource(
        id=resource_id,
        source=source,
        url=url,
        title=title,
        description=get("description") or "",
        thumbnail_url=get("thumbnail_url"),
        media_type=MEDIA_TYPE_BY_SOURCE.get(source, MediaType.WEBPAGE),
        owner_id=owner_id,
        created_at=created_at,
    )


def aggregate_rating(resource: Resource) -> float | None:
    """Arithmetic mean of the resource's ratings, or None when unrated."""
    if not resource.ratings:
        return None
    return sum(resource.ratings.values()) / len(resource.ratings)
