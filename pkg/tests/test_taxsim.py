from __future__ import annotations

import math
import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import toys
from oracle import Oracle
from polyrel.graph import NotFoundError, Taxonomy
from polyrel.ic import METRICS, ic_table
from polyrel.taxsim import MEASURES, SimParams, similarity_from_ic, tax_sim, word_tax_sim
from test_graph import dags

STRUCT = {"path_len": 0, "max_depth": 5, "depth_a": 3, "depth_b": 3, "depth_lcs": 3}


class TestSelfSimilarity:
    @pytest.mark.parametrize("measure", ["lin", "jc", "cai1", "cai2", "zhang"])
    def test_identity_is_one(self, measure):
        assert similarity_from_ic(measure, 0.7, 0.7, 0.7, same=True, **STRUCT) == pytest.approx(1.0)

    def test_lin_zero_ic(self):
        assert similarity_from_ic("lin", 0.0, 0.0, 0.0, same=True) == 1.0
        assert similarity_from_ic("lin", 0.0, 0.0, 0.0, same=False) == 0.0

    def test_resnik_scaled(self):
        assert similarity_from_ic("resnik", 0.2, 0.9, 0.6, params=SimParams(ic_scale=2.0)) == pytest.approx(0.3)

    def test_structure_required(self):
        with pytest.raises(ValueError):
            similarity_from_ic("cai1", 0.1, 0.2, 0.0)
        with pytest.raises(ValueError):
            similarity_from_ic("cai2", 0.1, 0.2, 0.0)
        with pytest.raises(ValueError):
            similarity_from_ic("wup", 0.1, 0.2, 0.0)
        with pytest.raises(ValueError):
            SimParams(ic_scale=0)


def test_resnik_on_diamond(diamond):
    tax = diamond.taxonomy
    ic = ic_table(tax, "seco")
    a, b = toys.synset_iri("hybrid"), toys.synset_iri("r2")
    best = max(ic[tax.index(c)] for c in tax.subsumers(a) & tax.subsumers(b))
    assert tax_sim("resnik", a, b, tax, ic) == pytest.approx(best)


class TestWordLevel:
    def test_monosemous_equals_single_call(self, vehicles):
        ic = ic_table(vehicles.taxonomy, "seco")
        got = word_tax_sim("lin", "wheel", "door", vehicles, ic).value
        assert got == tax_sim("lin", toys.synset_iri("wheel"), toys.synset_iri("door"), vehicles.taxonomy, ic)

    def test_two_senses_take_max(self, vehicles):
        ic = ic_table(vehicles.taxonomy, "seco")
        tax = vehicles.taxonomy
        options = [tax_sim("lin", toys.synset_iri(s), toys.synset_iri("train"), tax, ic) for s in ("car", "railcar")]
        ws = word_tax_sim("lin", "car", "train", vehicles, ic)
        assert ws.value == max(options)

    def test_same_synset(self, vehicles):
        ic = ic_table(vehicles.taxonomy, "seco")
        ws = word_tax_sim("lin", "car", "automobile", vehicles, ic)
        assert ws.value == 1.0
        assert ws.synset_a == ws.synset_b == toys.synset_iri("car")

    def test_unknown_word(self, vehicles):
        ic = ic_table(vehicles.taxonomy, "seco")
        with pytest.raises(NotFoundError):
            word_tax_sim("lin", "car", "zzzz", vehicles, ic)


@pytest.mark.parametrize("measure", MEASURES)
@pytest.mark.parametrize("metric", ["seco", "sebti", "cai", "zhang"])
def test_word_sim_matches_oracle(metric, measure, toy):
    _, spec, g = toy
    o = Oracle(spec)
    ic = ic_table(g.taxonomy, metric)
    params = SimParams(ic_scale=float(ic.max()) or 1.0)
    oic = o.ic_map(metric)
    words = sorted({w for ws in spec["synsets"].values() for w in ws})
    for a, b in product(words, words):
        want = o.word_sim(measure, a, b, oic)[0]
        assert word_tax_sim(measure, a, b, g, ic, params).value == pytest.approx(want, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(dags(30), st.sampled_from(METRICS), st.data())
def test_symmetry_and_self_max(dag, metric, data):
    tax = Taxonomy(*dag)
    ic = ic_table(tax, metric)
    params = SimParams(ic_scale=float(ic.max()) or 1.0)
    nodes = dag[0]
    c, d = data.draw(st.lists(st.sampled_from(nodes), min_size=2, max_size=2))
    for m in MEASURES:
        assert tax_sim(m, c, d, tax, ic, params) == pytest.approx(tax_sim(m, d, c, tax, ic, params), abs=1e-12)
    for m in ("lin", "jc", "cai1", "cai2"):
        assert tax_sim(m, c, c, tax, ic, params) >= tax_sim(m, c, d, tax, ic, params) - 1e-12


def test_cai_decreases_with_path_length():
    values = [similarity_from_ic("cai1", 0.5, 0.6, 0.2, path_len=n, max_depth=10) for n in range(0, 8)]
    assert all(x > y for x, y in zip(values, values[1:]))


def test_zhang_keeps_log_argument_in_range():
    # a negative LCS IC would push the argument past 2; the ratio is capped
    v = similarity_from_ic("zhang", 0.3, 0.4, -0.1)
    assert v == pytest.approx(1 - math.log(2))


@pytest.mark.wordnet
class TestWordNet:
    def test_car_automobile(self, wordnet):
        ic = ic_table(wordnet.taxonomy, "seco")
        assert word_tax_sim("lin", "car", "automobile", wordnet, ic).value == 1.0

    def test_sampled_symmetry(self, wordnet):
        tax = wordnet.taxonomy
        rng = random.Random(3)
        for metric in ("seco", "sanchez"):
            ic = ic_table(tax, metric)
            params = SimParams(ic_scale=float(ic.max()))
            for _ in range(30):
                a, b = rng.sample(list(tax.ids), 2)
                for m in MEASURES:
                    assert tax_sim(m, a, b, tax, ic, params) == pytest.approx(tax_sim(m, b, a, tax, ic, params))
                for m in ("lin", "jc"):
                    assert 0.0 <= tax_sim(m, a, b, tax, ic, params) <= 1.0 + 1e-12
                assert np.isfinite(tax_sim("cai1", a, b, tax, ic, params))


def test_subsumer_ic_capped_for_non_monotone_metric():
    # n11 hangs under both n1 and the root, so zhang gives it less IC than its parent n1
    nodes = [f"n{i}" for i in range(12)]
    edges = [(f"n{i}", "n0") for i in range(1, 12)] + [("n11", "n1")]
    tax = Taxonomy(nodes, edges)
    ic = ic_table(tax, "zhang")
    assert ic[tax.index("n11")] < ic[tax.index("n1")]
    params = SimParams(ic_scale=float(ic.max()))
    for m in MEASURES:
        assert 0.0 <= tax_sim(m, "n1", "n11", tax, ic, params) <= 1.0
    a, b = ic[tax.index("n1")], ic[tax.index("n11")]
    assert tax_sim("lin", "n1", "n11", tax, ic, params) == pytest.approx(2 * b / (a + b))
