from __future__ import annotations

from collections import deque
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyrel.graph import (
    SENSE,
    SYNSET,
    GraphInvariantError,
    KnowledgeGraph,
    Node,
    NotFoundError,
    RelationInstance,
    RelationType,
    Taxonomy,
    normalize_word,
)
from toys import synset_iri

# 7 nodes: r -> {a, b, c}; a -> {d, e}; b -> {e}; c -> {f}
SEVEN = [("a", "r"), ("b", "r"), ("c", "r"), ("d", "a"), ("e", "a"), ("e", "b"), ("f", "c")]


def seven() -> Taxonomy:
    return Taxonomy(list("rabcdef"), SEVEN)


@st.composite
def dags(draw, max_nodes: int = 50):
    n = draw(st.integers(2, max_nodes))
    edges = []
    for i in range(1, n):
        parents = draw(st.sets(st.integers(0, i - 1), min_size=1, max_size=min(3, i)))
        edges += [(f"n{i}", f"n{p}") for p in sorted(parents)]
    return [f"n{i}" for i in range(n)], edges


def bfs_depth(nodes, edges):
    children = {n: [] for n in nodes}
    for c, p in edges:
        children[p].append(c)
    depth = {nodes[0]: 1}
    q = deque([nodes[0]])
    while q:
        u = q.popleft()
        for c in children[u]:
            if c not in depth:
                depth[c] = depth[u] + 1
                q.append(c)
    return depth


def reach_down(nodes, edges, start):
    children = {n: [] for n in nodes}
    for c, p in edges:
        children[p].append(c)
    seen, stack = set(), [start]
    while stack:
        for c in children[stack.pop()]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return seen


def reach_up(nodes, edges, start):
    parents = {n: [] for n in nodes}
    for c, p in edges:
        parents[c].append(p)
    seen, stack = {start}, [start]
    while stack:
        for p in parents[stack.pop()]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def undirected_bfs(nodes, edges, a, b):
    nbrs = {n: set() for n in nodes}
    for c, p in edges:
        nbrs[c].add(p)
        nbrs[p].add(c)
    dist = {a: 0}
    q = deque([a])
    while q:
        u = q.popleft()
        for v in nbrs[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist[b]


class TestTrivial:
    def test_depth_root_and_child(self):
        t = seven()
        assert t.depth("r") == 1
        assert t.depth("a") == 2

    def test_depth_takes_shortest_parent(self):
        t = Taxonomy(list("rabc"), [("a", "r"), ("b", "a"), ("c", "b"), ("c", "r")])
        assert t.depth("c") == 2

    def test_hypo_counts(self):
        t = seven()
        assert t.hypo_count("d") == 0
        assert t.hypo_count("r") == len(t) - 1
        assert t.hypo_count("a") == 2

    def test_subsumers(self):
        t = seven()
        assert t.subsumers("r") == {"r"}
        assert len(t.subsumers("a")) == 2
        assert t.subsumers("e") == {"e", "a", "b", "r"}

    def test_leaf_and_children(self):
        t = seven()
        assert t.leaf_count("d") == 1
        assert t.leaf_count("d", counts_self=False) == 0
        assert t.direct_hyponyms("d") == 0
        assert t.leaf_count("r") == 3
        assert t.max_leaves() == 3

    def test_sibling_count_is_branching(self):
        assert seven().sibling_count("r") == 3

    def test_lcs(self):
        t = seven()
        ic = np.linspace(0, 1, len(t))
        assert t.lcs("e", "e", ic) == "e"
        assert t.lcs("a", "b", ic) == "r"
        assert t.lcs("d", "e", ic) == "a"

    def test_lcs_tie_breaks(self):
        # diamond x under p and q; equal IC, equal depth: lexicographic id wins
        t = Taxonomy(list("rpqx"), [("p", "r"), ("q", "r"), ("x", "p"), ("x", "q")])
        flat = np.zeros(len(t))
        assert t.lcs("x", "x", flat) == "x"
        # p, q and r share IC 0 when compared from their own subtrees
        tz = Taxonomy(list("rpqxy"), [("p", "r"), ("q", "r"), ("x", "p"), ("x", "q"), ("y", "p"), ("y", "q")])
        assert tz.lcs("x", "y", np.zeros(len(tz))) == "p"
        ic = np.array([0.0, 0.2, 0.5, 0.9, 0.9])
        assert tz.lcs("x", "y", ic) == "q"

    def test_lcs_callable(self):
        t = seven()
        assert t.lcs("d", "f", lambda n: 0.0) == "r"

    def test_path_length(self):
        t = seven()
        assert t.path_length("c", "c") == 0
        assert t.path_length("r", "a") == 1
        assert t.path_length("d", "f") == 4
        assert t.path_length("d", "b") == 3

    def test_single_node(self):
        t = Taxonomy(["only"], [])
        assert t.max_depth() == 1
        assert t.max_wn() == 1

    def test_unknown_node(self):
        with pytest.raises(NotFoundError):
            seven().depth("nope")

    def test_cycle_rejected(self):
        with pytest.raises(GraphInvariantError):
            Taxonomy(list("rab"), [("a", "r"), ("b", "a"), ("a", "b")])

    def test_two_roots_need_virtual_root(self):
        with pytest.raises(GraphInvariantError):
            Taxonomy(list("ab"), [])
        t = Taxonomy(list("ab"), [], virtual_root="__root__")
        assert t.root == "__root__"
        assert t.depth("a") == 2

    def test_self_loop_rejected(self):
        with pytest.raises(GraphInvariantError):
            Taxonomy(list("ra"), [("a", "a")])


class TestAgainstOracles:
    def test_seven_node_hypo(self):
        t = seven()
        nodes = list("rabcdef")
        for n in nodes:
            assert t.hypo_count(n) == len(reach_down(nodes, SEVEN, n))

    def test_multiple_inheritance_subsumers(self, diamond):
        tax = diamond.taxonomy
        h = synset_iri("hybrid")
        assert tax.subsumers(h) == {synset_iri(x) for x in ("hybrid", "left", "right", "root")}

    def test_lcs_on_diamond_picks_max_ic(self, diamond):
        from polyrel.ic import ic_table

        tax = diamond.taxonomy
        ic = ic_table(tax, "seco")
        a, b = synset_iri("hybrid"), synset_iri("r2")
        common = tax.subsumers(a) & tax.subsumers(b)
        best = max(common, key=lambda c: ic[tax.index(c)])
        assert tax.lcs(a, b, ic) == best == synset_iri("right")

    def test_path_across_diamond(self, diamond):
        from toys import DIAMOND

        tax = diamond.taxonomy
        names = list(DIAMOND["synsets"])
        for a, b in combinations(names, 2):
            want = undirected_bfs(names, DIAMOND["hyper"], a, b)
            assert tax.path_length(synset_iri(a), synset_iri(b)) == want
        assert tax.path_length(synset_iri("l1"), synset_iri("r2")) == 5


@settings(max_examples=60, deadline=None)
@given(dags())
def test_structure_matches_reachability(dag):
    nodes, edges = dag
    t = Taxonomy(nodes, edges)
    depth = bfs_depth(nodes, edges)
    n = len(nodes)
    for v in nodes:
        down = reach_down(nodes, edges, v)
        assert t.depth(v) == depth[v]
        assert t.hypo_count(v) == len(down)
        assert 0 <= t.hypo_count(v) <= n - 1
        assert t.subsumers(v) == reach_up(nodes, edges, v)
        leaves = [d for d in down | {v} if not reach_down(nodes, edges, d)]
        assert t.leaf_count(v) == len(leaves)
        if v != nodes[0]:
            assert t.depth(v) >= 2
        for p in t.parents_of(v):
            assert t.hypo_count(p) >= t.hypo_count(v) + 1
            if len(t.parents_of(v)) == 1:
                assert t.depth(v) == t.depth(p) + 1
    assert t.max_depth() == max(depth.values())
    assert t.max_wn() == n


@settings(max_examples=40, deadline=None)
@given(dags(30), st.data())
def test_pairwise_properties(dag, data):
    nodes, edges = dag
    t = Taxonomy(nodes, edges)
    ic = np.asarray(data.draw(st.lists(st.sampled_from([0.0, 0.25, 0.5, 1.0]), min_size=len(t), max_size=len(t))))
    picks = data.draw(st.lists(st.sampled_from(nodes), min_size=3, max_size=3))
    a, b, c = picks
    assert t.lcs(a, b, ic) == t.lcs(b, a, ic)
    assert t.lcs(a, b, ic) in t.subsumers(a) & t.subsumers(b)
    assert t.path_length(a, b) == undirected_bfs(nodes, edges, a, b)
    assert t.path_length(a, c) <= t.path_length(a, b) + t.path_length(b, c)


def test_knowledge_graph_basics():
    types = [RelationType("hypernym", "taxonomic", "hyponym", "up"), RelationType("antonym", "non-taxonomic", "antonym")]
    nodes = [Node("s1", SYNSET), Node("s2", SYNSET), Node("w1", SENSE, frozenset({"big"})), Node("w2", SENSE, frozenset({"small"}))]
    insts = [
        RelationInstance("hypernym", "s2", "s1"),
        RelationInstance("antonym", "w1", "w2"),
        RelationInstance("antonym", "w1", "w2"),  # duplicates collapse
        RelationInstance("antonym", "w1", "w1"),  # self loops are dropped
    ]
    g = KnowledgeGraph(nodes, types, insts, {"w1": "s1", "w2": "s2"})
    assert len(g.instances) == 1
    assert g.prevalence("antonym") == 1.0
    assert g.synset_of("w1") == "s1"
    assert g.senses_of("BIG") == {"w1", "s1"}
    assert g.senses_of("zzzz") == set()
    assert g.taxonomy.root == "s1"
    with pytest.raises(NotFoundError):
        g.node("nope")
    with pytest.raises(NotFoundError):
        KnowledgeGraph(nodes, types, [RelationInstance("cause", "s1", "s2")], {})


def test_duplicate_node_rejected():
    with pytest.raises(GraphInvariantError):
        KnowledgeGraph([Node("a", SYNSET), Node("a", SYNSET)], [], [], {})


@pytest.mark.parametrize(
    ("raw", "norm"), [("Car", "car"), ("  ice_cream ", "ice cream"), ("New   York", "new york")]
)
def test_normalize_word(raw, norm):
    assert normalize_word(raw) == norm


def test_prevalence_sums_per_category(toy):
    _, _, g = toy
    for cat in ("non-taxonomic", "taxonomic"):
        ps = [t.prevalence for t in g.types_in(cat)]
        if any(ps):
            assert sum(ps) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.wordnet
class TestWordNet:
    def test_car_depth_matches_bfs(self, wordnet):
        tax = wordnet.taxonomy
        car = sorted(s for s in wordnet.senses_of("car") if s.endswith("car-n#1"))[0]
        syn = wordnet.synset_of(car)
        # independent BFS down from the root over parent lists
        depth = {tax.root: 1}
        q = deque([tax.root])
        while q:
            u = q.popleft()
            for c in tax.children_of(u):
                if c not in depth:
                    depth[c] = depth[u] + 1
                    q.append(c)
        assert tax.depth(syn) == depth[syn]
        assert tax.max_depth() == max(depth.values())

    def test_root_covers_everything(self, wordnet):
        tax = wordnet.taxonomy
        assert tax.hypo_count(tax.root) == tax.max_wn() - 1

    def test_sampled_invariants(self, wordnet):
        tax = wordnet.taxonomy
        rng = np.random.default_rng(7)
        ids = tax.ids
        for i in rng.choice(len(ids), 300, replace=False):
            v = ids[int(i)]
            for p in tax.parents_of(v):
                assert tax.hypo_count(p) >= tax.hypo_count(v) + 1
                assert tax.depth(v) <= tax.depth(p) + 1
        triples = rng.choice(len(ids), (20, 3))
        for a, b, c in triples:
            a, b, c = ids[a], ids[b], ids[c]
            assert tax.path_length(a, c) <= tax.path_length(a, b) + tax.path_length(b, c)

    def test_dataset_words_match_label_scan(self, wordnet):
        from polyrel.ingest import BUILTIN_DATASETS, builtin_dataset

        labels = set()
        for n in wordnet.nodes():
            if n.kind != "lexical-entry":
                labels |= n.labels
        for name in BUILTIN_DATASETS:
            for a, b, _ in builtin_dataset(name).pairs:
                for w in (a, b):
                    assert wordnet.has_word(w) == (w in labels)


def test_combinations_identity():
    from polyrel.ingest import derive_synonym_edges

    for n in range(1, 7):
        members = {f"w{i}": "s" for i in range(n)}
        assert len(derive_synonym_edges(members)) == len(list(combinations(range(n), 2)))
