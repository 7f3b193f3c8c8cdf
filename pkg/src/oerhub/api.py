"""HTTP/JSON binding over the platform core.

All routes live under ``/api``; errors are
``{"error": {"code": ..., "message": ...}}`` with stable codes. Sessions
travel in the ``Authorization: Bearer <token>`` header.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .errors import NotFoundError, OerHubError
from .model import Annotation, Group, Message, Resource, Talk, aggregate_rating
from .rdfexport import export_graph, serialize_ntriples
from .service import ActivityFilter, Platform

_STATUS_BY_CODE = {
    "auth_failed": 401,
    "permission_denied": 403,
    "not_found": 404,
    "validation": 400,
    "conflict": 409,
    "usage": 400,
}


def _token(request: Request) -> str | None:
    header = request.headers.get("authorization", "")
    if header.lower().startswith("bearer "):
        return header[7:]
    return None


def resource_json(r: Resource) -> dict:
    return {
        "id": r.id, "source": r.source.value, "url": r.url, "title": r.title,
        "description": r.description, "thumbnail_url": r.thumbnail_url,
        "media_type": r.media_type.value, "owner_id": r.owner_id,
        "created_at": r.created_at,
        "tags": [{"user_id": u, "tag": t} for u, t in r.tags],
        "comments": [{"id": c.id, "user_id": c.user_id, "text": c.text,
                      "created_at": c.created_at} for c in r.comments],
        "ratings": r.ratings,
        "average_rating": aggregate_rating(r),
    }


def group_json(g: Group) -> dict:
    return {"id": g.id, "title": g.title, "course_id": g.course_id,
            "member_ids": sorted(g.member_ids), "resource_ids": g.resource_ids}


def talk_json(t: Talk) -> dict:
    return {"id": t.id, "title": t.title, "description": t.description,
            "speaker": t.speaker, "duration_s": t.duration_s,
            "published_at": t.published_at, "source_url": t.source_url,
            "languages": sorted(t.transcripts)}


def annotation_json(a: Annotation) -> dict:
    return {"id": a.id, "user_id": a.user_id, "talk_id": a.talk_id,
            "language": a.language, "cue_index": a.cue_index,
            "char_start": a.char_start, "char_end": a.char_end,
            "note": a.note, "created_at": a.created_at}


def message_json(m: Message) -> dict:
    return {"id": m.id, "from_user": m.from_user, "to_group": m.to_group,
            "text": m.text, "created_at": m.created_at}


def tooltip_json(payload) -> dict | None:
    if payload is None:
        return None
    return {
        "word": payload.word,
        "per_pos": {
            pos.value: {
                "definitions": [{"sense": n, "gloss": g}
                                for n, g in entry.definitions],
                "synonyms": [{"lemma": lemma, "score": score}
                             for lemma, score in entry.synonyms],
            }
            for pos, entry in payload.per_pos.items()
        },
    }


class LoginBody(BaseModel):
    username: str
    password: str


class GroupBody(BaseModel):
    title: str
    course_id: str | None = None


class SaveResourceBody(BaseModel):
    resource_id: str | None = None
    source: str | None = None
    url: str | None = None
    title: str | None = None
    description: str | None = None
    thumbnail_url: str | None = None


class CommentBody(BaseModel):
    text: str


class TagBody(BaseModel):
    tag: str


class RatingBody(BaseModel):
    rating: int


class AnnotateBody(BaseModel):
    talk_id: str
    language: str
    cue_index: int
    char_start: int
    char_end: int
    note: str | None = None


class MessageBody(BaseModel):
    text: str


def create_app(platform: Platform, base_iri: str = "http://localhost/oerhub",
               static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="oerhub", docs_url=None, redoc_url=None)

    @app.exception_handler(OerHubError)
    async def _handle(request: Request, exc: OerHubError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(status_code=status,
                            content={"error": {"code": exc.code,
                                               "message": exc.message}})

    @app.post("/api/login")
    def login(body: LoginBody):
        session = platform.login(body.username, body.password)
        return {"token": session.token, "expires_at": session.expires_at}

    @app.get("/api/search")
    def search(request: Request, q: str = "", sources: str | None = None,
               cursor: str | None = None, page_size: int | None = None):
        source_list = [s for s in (sources or "").split(",") if s] or None
        page = platform.api_search(_token(request), q, sources=source_list,
                                   cursor=cursor, page_size=page_size)
        return {
            "results": [{"source": r.source, "rank": r.rank, "url": r.url,
                         "title": r.title, "description": r.description,
                         "thumbnail_url": r.thumbnail_url}
                        for r in page.results],
            "next_cursor": page.next_cursor,
            "degraded_sources": page.degraded_sources,
        }

    @app.post("/api/groups")
    def create_group(request: Request, body: GroupBody):
        return group_json(platform.create_group(_token(request), body.title,
                                                body.course_id))

    @app.post("/api/groups/{group_id}/join")
    def join_group(request: Request, group_id: str):
        return group_json(platform.join_group(_token(request), group_id))

    @app.get("/api/groups/{group_id}")
    def get_group(request: Request, group_id: str):
        platform._require_session(_token(request))
        return group_json(platform._get_group(group_id))

    @app.post("/api/groups/{group_id}/resources")
    def save_resource(request: Request, group_id: str, body: SaveResourceBody):
        payload = {k: v for k, v in body.model_dump().items() if v is not None}
        resource = platform.save_resource_to_group(_token(request), group_id,
                                                   payload)
        return resource_json(resource)

    @app.post("/api/resources/upload")
    async def upload(request: Request, group_id: str, title: str,
                     description: str = "", media_type: str = "document"):
        data = await request.body()
        resource = platform.upload_resource(
            _token(request), group_id, data,
            {"title": title, "description": description, "media_type": media_type})
        return resource_json(resource)

    @app.get("/api/resources/{resource_id}")
    def get_resource(request: Request, resource_id: str):
        platform._require_session(_token(request))
        return resource_json(platform._get_resource(resource_id))

    @app.get("/api/resources/{resource_id}/blob")
    def get_blob(request: Request, resource_id: str):
        platform._require_session(_token(request))
        resource = platform._get_resource(resource_id)
        blob = Path(resource.url)
        if not blob.exists():
            raise NotFoundError("blob missing")
        return Response(content=blob.read_bytes(),
                        media_type="application/octet-stream")

    @app.post("/api/resources/{resource_id}/comments")
    def add_comment(request: Request, resource_id: str, body: CommentBody):
        return resource_json(platform.add_comment(_token(request), resource_id,
                                                  body.text))

    @app.post("/api/resources/{resource_id}/tags")
    def add_tag(request: Request, resource_id: str, body: TagBody):
        return resource_json(platform.add_tag(_token(request), resource_id,
                                              body.tag))

    @app.post("/api/resources/{resource_id}/rating")
    def add_rating(request: Request, resource_id: str, body: RatingBody):
        return resource_json(platform.add_rating(_token(request), resource_id,
                                                 body.rating))

    @app.post("/api/annotate")
    def annotate(request: Request, body: AnnotateBody):
        annotation, tooltip = platform.annotate(
            _token(request), body.talk_id, body.language, body.cue_index,
            body.char_start, body.char_end, body.note)
        return {"annotation": annotation_json(annotation),
                "tooltip": tooltip_json(tooltip)}

    @app.get("/api/talks/{talk_id}")
    def get_talk(request: Request, talk_id: str):
        return talk_json(platform.get_talk(_token(request), talk_id))

    @app.get("/api/talks/{talk_id}/transcript")
    def get_transcript(request: Request, talk_id: str, lang: str = "en"):
        transcript = platform.get_transcript(_token(request), talk_id, lang)
        return {"talk_id": transcript.talk_id, "language": transcript.language,
                "cues": [{"start_ms": c.start_ms, "dur_ms": c.dur_ms,
                          "text": c.text} for c in transcript.cues]}

    @app.get("/api/talks/{talk_id}/annotations")
    def list_annotations(request: Request, talk_id: str):
        annotations = platform.list_annotations(_token(request), talk_id)
        return {"annotations": [annotation_json(a) for a in annotations]}

    @app.get("/api/groups/{group_id}/messages")
    def list_messages(request: Request, group_id: str):
        messages = platform.list_messages(_token(request), group_id)
        return {"messages": [message_json(m) for m in messages]}

    @app.post("/api/groups/{group_id}/messages")
    def send_message(request: Request, group_id: str, body: MessageBody):
        return message_json(platform.send_message(_token(request), group_id,
                                                  body.text))

    @app.get("/api/activity")
    def activity(request: Request, course: str | None = None,
                 user: str | None = None, kind: str | None = None,
                 since: int | None = None):
        events = platform.activity_query(
            _token(request),
            ActivityFilter(course=course, user=user, kind=kind, since=since))
        return {"events": [{"id": e.id, "user_id": e.user_id,
                            "kind": e.kind.value, "payload": e.payload,
                            "at": e.at} for e in events]}

    @app.get("/api/stats")
    def stats(request: Request):
        return platform.stats(_token(request)).to_dict()

    @app.get("/api/export.nt")
    def export_nt(request: Request):
        platform._require_session(_token(request))
        graph = export_graph(platform.store, base_iri)
        return PlainTextResponse(serialize_ntriples(graph),
                                 media_type="application/n-triples")

    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
