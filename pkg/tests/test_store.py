from oerhub.model import ActivityKind
from oerhub.service import ActivityFilter
from oerhub.store import Store

from conftest import FIXTURES, build_platform
from oerhub.seed import seed_fixture


def test_full_state_survives_restart(tmp_path, wn):
    platform = build_platform(tmp_path, wordnet=wn)
    seed_fixture(platform, FIXTURES / "seed.json")
    token = platform.login("ada", "teacher-pass").token
    group_id = next(iter(platform.store.groups))
    rid = next(iter(platform.store.resources))
    platform.add_comment(token, rid, "remember this after restart")
    platform.send_message(token, group_id, "also this")
    talk_id = platform.store.talk_id_by_external["talk-001"]
    platform.annotate(token, talk_id, "en", 0, 0, 2)

    old = platform.store
    reopened = Store(tmp_path / "data")
    assert set(reopened.users) == set(old.users)
    assert set(reopened.groups) == set(old.groups)
    assert set(reopened.resources) == set(old.resources)
    assert set(reopened.talks) == set(old.talks)
    assert set(reopened.messages) == set(old.messages)
    assert set(reopened.annotations) == set(old.annotations)
    assert [e.id for e in reopened.activity] == [e.id for e in old.activity]
    assert reopened.resources[rid].comments[-1].text == \
        "remember this after restart"
    # counters continue, never reuse ids
    highest = max(int(i) for i in old.resources)
    assert reopened.next_id("resource") == str(highest + 1)


def test_commit_is_one_log_line(tmp_path, wn):
    platform = build_platform(tmp_path, wordnet=wn, with_talks=False)
    seed_fixture(platform, FIXTURES / "seed.json")
    log = (tmp_path / "data" / "store.log").read_text().splitlines()
    lines_before = len(log)
    token = platform.login("ada", "teacher-pass").token
    group = platform.create_group(token, "Atomic group")
    log = (tmp_path / "data" / "store.log").read_text().splitlines()
    # login event + (group + counter + enrolment event) commits
    assert len(log) - lines_before == 3
    assert group.id in Store(tmp_path / "data").groups


def test_events_recorded_in_sequence_order(tmp_path, wn):
    platform = build_platform(tmp_path, wordnet=wn)
    seed_fixture(platform, FIXTURES / "seed.json")
    token = platform.login("ada", "teacher-pass").token
    for _ in range(3):
        platform.api_search(token, "river")
    ids = [e.id for e in platform.store.activity]
    assert ids == sorted(ids)
    assert len(set(ids)) == len(ids)
    searches = [e for e in platform.activity_query(token, ActivityFilter())
                if e.kind is ActivityKind.SEARCH]
    assert len(searches) == 3
