"""Declarative fixture seeding: users, courses, groups, talks, resources.

The fixture file is JSON; entities reference each other by title/username
so fixtures stay independent of assigned identifiers. Seeding is
idempotent per username/title.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ValidationError
from .ingest import resource_document, talk_document
from .model import Role, Source
from .service import Platform
from .store import Store, now_ms


def seed_fixture(platform: Platform, path) -> dict:
    """Load a declarative seed file; returns counts of entities created."""
    fixture_path = Path(path)
    if not fixture_path.exists():
        raise ValidationError(f"seed file not found: {fixture_path}")
    spec = json.loads(fixture_path.read_text(encoding="utf-8"))
    store = platform.store
    created = {"users": 0, "courses": 0, "groups": 0, "resources": 0, "talks": 0}

    users_by_name = {u.username: u for u in store.users.values()}
    for entry in spec.get("users", []):
        if entry["username"] in users_by_name:
            continue
        user = platform.create_user(
            entry["username"], entry["password"], Role(entry.get("role", "student")),
            research_consent=entry.get("research_consent", False))
        users_by_name[user.username] = user
        created["users"] += 1

    courses_by_title = {c.title: c for c in store.courses.values()}
    for entry in spec.get("courses", []):
        if entry["title"] in courses_by_title:
            continue
        teacher_ids = {users_by_name[name].id for name in entry.get("teachers", [])}
        course = platform.create_course(entry["title"], teacher_ids)
        courses_by_title[course.title] = course
        created["courses"] += 1

    groups_by_title = {g.title: g for g in store.groups.values()}
    for entry in spec.get("groups", []):
        if entry["title"] in groups_by_title:
            continue
        course = courses_by_title.get(entry.get("course", ""))
        members = {users_by_name[name].id for name in entry.get("members", [])}
        from .model import Group
        group = Group(id=store.next_id("group"), title=entry["title"],
                      course_id=course.id if course else None,
                      member_ids=members)
        ops = [Store.op_group(group), Store.op_counter("group", int(group.id))]
        if course is not None:
            course.group_ids.add(group.id)
            ops.append(Store.op_course(course))
            # joining a course group enrolls the member in the course
            for member_id in members:
                member = store.users[member_id]
                member.course_ids.add(course.id)
                ops.append(Store.op_user(member))
        store.commit(ops)
        groups_by_title[group.title] = group
        created["groups"] += 1

    for entry in spec.get("talks", []):
        if entry["external_id"] in store.talk_id_by_external:
            continue
        from .model import Cue, Talk, Transcript
        talk_id = store.next_id("talk")
        talk = Talk(id=talk_id, title=entry["title"],
                    description=entry.get("description", ""),
                    speaker=entry.get("speaker", ""),
                    duration_s=int(entry.get("duration_s", 0)),
                    source_url=entry.get("source_url", ""))
        for tr in entry.get("transcripts", []):
            talk.transcripts[tr["language"].lower()] = Transcript(
                talk_id=talk_id, language=tr["language"].lower(),
                cues=[Cue(int(c["start_ms"]), int(c["dur_ms"]), c["text"])
                      for c in tr["cues"]])
        store.commit([Store.op_talk(talk),
                      Store.op_talk_external(entry["external_id"], talk_id),
                      Store.op_counter("talk", int(talk_id))])
        platform.index.reindex_document(talk_document(talk))
        created["talks"] += 1

    existing_urls = {r.url for r in store.resources.values()}
    for entry in spec.get("resources", []):
        if entry["url"] in existing_urls:
            continue
        from .model import Comment, Resource
        owner = users_by_name.get(entry.get("owner", ""))
        resource = Resource(
            id=store.next_id("resource"), source=Source(entry["source"]),
            url=entry["url"], title=entry["title"],
            description=entry.get("description", ""),
            owner_id=owner.id if owner else None, created_at=now_ms())
        from .model import MEDIA_TYPE_BY_SOURCE, MediaType
        resource.media_type = MEDIA_TYPE_BY_SOURCE.get(
            resource.source, MediaType.WEBPAGE)
        for user_name, tag in entry.get("tags", []):
            resource.tags.append((users_by_name[user_name].id, tag))
        for c in entry.get("comments", []):
            resource.comments.append(Comment(
                id=store.next_id("comment"),
                user_id=users_by_name[c["user"]].id,
                text=c["text"], created_at=now_ms()))
        for user_name, rating in entry.get("ratings", {}).items():
            resource.ratings[users_by_name[user_name].id] = int(rating)
        ops = [Store.op_resource(resource),
               Store.op_counter("resource", int(resource.id))]
        group = groups_by_title.get(entry.get("group", ""))
        if group is not None:
            group.resource_ids.append(resource.id)
            ops.append(Store.op_group(group))
        store.commit(ops)
        platform.index.reindex_document(resource_document(resource))
        existing_urls.add(resource.url)
        created["resources"] += 1

    return created
