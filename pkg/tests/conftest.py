import json
import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles import

from oerhub.config import Config
from oerhub.federated import FixtureFileConnector
from oerhub.ingest import ingest_dump
from oerhub.seed import seed_fixture
from oerhub.service import Platform
from oerhub.store import Store
from oerhub.textindex import InvertedIndex
from oerhub.wordnetdb import load_database

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
MINIWN = FIXTURES / "miniwn"


@pytest.fixture(scope="session")
def wn():
    return load_database(MINIWN)


@pytest.fixture(scope="session")
def manifest():
    return json.loads((MINIWN / "manifest.json").read_text())


@pytest.fixture()
def miniwn_copy(tmp_path):
    """Mutable copy of the miniwn directory for corruption tests."""
    target = tmp_path / "miniwn"
    shutil.copytree(MINIWN, target)
    return target


def build_platform(tmp_path, wordnet=None, with_sources=True,
                   with_talks=True) -> Platform:
    store = Store(tmp_path / "data")
    index = InvertedIndex()
    config = Config(data_dir=str(tmp_path / "data"))
    platform = Platform(store, index, wordnet=wordnet, config=config)
    platform.register_local_talk_connector()
    if with_sources:
        for name in ("youtube", "vimeo", "web"):
            platform.registry.register(
                FixtureFileConnector(name, FIXTURES / "sources" / f"{name}.ndjson"))
    if with_talks:
        ingest_dump(store, index, FIXTURES / "talks.ndjson")
    return platform


@pytest.fixture()
def platform(tmp_path, wn):
    p = build_platform(tmp_path, wordnet=wn)
    seed_fixture(p, FIXTURES / "seed.json")
    return p


@pytest.fixture()
def bare_platform(tmp_path):
    return build_platform(tmp_path, with_sources=False, with_talks=False)
