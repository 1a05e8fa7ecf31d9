from __future__ import annotations

import numpy as np

import toys
from polyrel.cache import ArrayCache, cache_key, graph_fingerprint
from polyrel.engine import Scorer, ScorerConfig
from polyrel.ic import IcParams


def test_disabled_cache_computes_every_time():
    cache = ArrayCache(None)
    calls = []
    for _ in range(2):
        cache.get_or_compute("k", lambda: calls.append(1) or {"x": np.arange(3)})
    assert len(calls) == 2 and cache.path("k") is None


def test_hit_is_bit_identical(tmp_path):
    cache = ArrayCache(tmp_path)
    arr = np.random.default_rng(1).random(50)
    first = cache.get_or_compute("k", lambda: {"x": arr})
    second = cache.get_or_compute("k", lambda: {"x": np.zeros(1)})
    assert cache.hits == 1 and cache.misses == 1
    assert np.array_equal(first["x"], second["x"]) and second["x"].dtype == arr.dtype
    assert not list(tmp_path.glob("*.tmp"))


def test_corrupt_entry_is_recomputed(tmp_path):
    cache = ArrayCache(tmp_path)
    cache.path("k").write_bytes(b"not an npz")
    out = cache.get_or_compute("k", lambda: {"x": np.ones(2)})
    assert out["x"].tolist() == [1.0, 1.0]
    assert ArrayCache(tmp_path).load("k")["x"].tolist() == [1.0, 1.0]


def test_keys_depend_on_graph_and_params(royal, vehicles):
    assert graph_fingerprint(royal) != graph_fingerprint(vehicles)
    assert graph_fingerprint(royal) == graph_fingerprint(toys.build(toys.ROYAL))
    a = cache_key(royal, "ic", metric="zhou", params=IcParams(zhou_k=0.5))
    assert a == cache_key(royal, "ic", metric="zhou", params=IcParams(zhou_k=0.5))
    assert a != cache_key(royal, "ic", metric="zhou", params=IcParams(zhou_k=0.4))
    assert a != cache_key(royal, "ric", metric="zhou", params=IcParams(zhou_k=0.5))
    assert a != cache_key(vehicles, "ic", metric="zhou", params=IcParams(zhou_k=0.5))


def test_scorer_warm_cache_matches_cold(royal, tmp_path):
    cfg = ScorerConfig(metric="sanchez")
    cold = Scorer(royal, cfg, cache=ArrayCache(tmp_path))
    warm_cache = ArrayCache(tmp_path)
    warm = Scorer(royal, cfg, cache=warm_cache)
    assert warm_cache.hits == 2 and warm_cache.misses == 0
    assert np.array_equal(cold.ic, warm.ic)
    assert np.array_equal(cold.table.ric, warm.table.ric)
    assert cold.pair("king", "queen") == warm.pair("king", "queen")
