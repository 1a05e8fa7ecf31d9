from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import toys  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]


def wordnet_path() -> Path | None:
    env = os.environ.get("POLYREL_GRAPH")
    for cand in (env, ROOT / "data" / "wordnet30.nt.gz"):
        if cand and Path(cand).is_file():
            return Path(cand)
    return None


@pytest.fixture(scope="session")
def wordnet():
    path = wordnet_path()
    if path is None:
        pytest.skip("WordNet graph not built (run: python -m polyrel.wndb <dict dir> data/wordnet30.nt.gz)")
    from polyrel.ingest import load_graph

    return load_graph(path)


@pytest.fixture(scope="session")
def wordnet_paths(wordnet):
    from polyrel.paths import PathIndex

    return PathIndex(wordnet)


@pytest.fixture(scope="session", params=sorted(toys.TOYS))
def toy(request):
    spec = toys.TOYS[request.param]
    return request.param, spec, toys.build(spec)


@pytest.fixture(scope="session")
def royal():
    return toys.build(toys.ROYAL)


@pytest.fixture(scope="session")
def vehicles():
    return toys.build(toys.VEHICLES)


@pytest.fixture(scope="session")
def diamond():
    return toys.build(toys.DIAMOND)


@pytest.fixture(scope="session")
def chain():
    return toys.build(toys.CHAIN)
