"""Immutable knowledge-graph model and the taxonomic queries the IC formulas need."""

from __future__ import annotations

import re
from collections import Counter, deque
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

__all__ = [
    "SYNSET",
    "SENSE",
    "ENTRY",
    "TAXONOMIC",
    "NON_TAXONOMIC",
    "STRUCTURAL",
    "AUXILIARY",
    "IGNORE",
    "CATEGORIES",
    "GraphInvariantError",
    "NotFoundError",
    "Node",
    "RelationType",
    "RelationInstance",
    "Taxonomy",
    "KnowledgeGraph",
    "normalize_word",
]

SYNSET = "synset"
SENSE = "lexical-sense"
ENTRY = "lexical-entry"

TAXONOMIC = "taxonomic"
NON_TAXONOMIC = "non-taxonomic"
STRUCTURAL = "structural"
AUXILIARY = "auxiliary"
IGNORE = "ignore"
CATEGORIES = (TAXONOMIC, NON_TAXONOMIC, STRUCTURAL, AUXILIARY, IGNORE)
UNDIRECTED_TYPE = "synonym"


class NotFoundError(KeyError):
    """Unknown node, word or relation type."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "not found"


class GraphInvariantError(ValueError):
    """The graph violates a structural invariant (cycle, missing root, ...)."""


_WS = re.compile(r"\s+")


def normalize_word(word: str) -> str:
    """Lowercase, map underscores to spaces and collapse whitespace."""
    return _WS.sub(" ", word.replace("_", " ")).strip().lower()


@dataclass(frozen=True, slots=True)
class Node:
    id: str
    kind: str
    labels: frozenset[str] = frozenset()


@dataclass(frozen=True, slots=True)
class RelationType:
    name: str
    category: str
    inverse: str | None = None
    direction: str | None = None  # taxonomic only: "up" or "down"
    frequency: int = 0
    prevalence: float = 0.0

    @property
    def symmetric(self) -> bool:
        return self.inverse == self.name


@dataclass(frozen=True, slots=True)
class RelationInstance:
    type: str
    subject: str
    object: str


class Taxonomy:
    """Rooted DAG over node ids with eagerly computed structural statistics.

    ``edges`` are ``(child, parent)`` pairs. All counts are filled once at
    construction, so every query afterwards is a pure read.
    """

    def __init__(
        self,
        nodes: Iterable[str],
        edges: Iterable[tuple[str, str]],
        *,
        virtual_root: str | None = None,
    ):
        ids = list(dict.fromkeys(nodes))
        index = {n: i for i, n in enumerate(ids)}
        parent_sets: list[set[int]] = [set() for _ in ids]
        for child, parent in edges:
            if child == parent:
                raise GraphInvariantError(f"self-loop on {child!r}")
            try:
                parent_sets[index[child]].add(index[parent])
            except KeyError as exc:
                raise NotFoundError(f"taxonomic edge endpoint {exc.args[0]!r} is not a taxonomy node") from None
        roots = [i for i, ps in enumerate(parent_sets) if not ps]
        if len(roots) != 1:
            if virtual_root is None or not ids:
                raise GraphInvariantError(f"taxonomy must have exactly one root, found {len(roots)}")
            if virtual_root in index:
                raise GraphInvariantError(f"virtual root {virtual_root!r} clashes with a node id")
            index[virtual_root] = len(ids)
            ids.append(virtual_root)
            parent_sets.append(set())
            for r in roots:
                parent_sets[r].add(index[virtual_root])
            roots = [index[virtual_root]]

        self._ids: list[str] = ids
        self._index: dict[str, int] = index
        self.root: str = ids[roots[0]]
        n = len(ids)
        self.parents: list[tuple[int, ...]] = [tuple(sorted(ps)) for ps in parent_sets]
        child_lists: list[list[int]] = [[] for _ in range(n)]
        for c, ps in enumerate(self.parents):
            for p in ps:
                child_lists[p].append(c)
        self.children: list[tuple[int, ...]] = [tuple(cs) for cs in child_lists]

        # Kahn's order from the root; leftovers mean a cycle or an unreachable island.
        pending = [len(ps) for ps in self.parents]
        order: list[int] = []
        queue = deque([roots[0]])
        while queue:
            u = queue.popleft()
            order.append(u)
            for c in self.children[u]:
                pending[c] -= 1
                if pending[c] == 0:
                    queue.append(c)
        if len(order) != n:
            stuck = sorted(ids[i] for i in range(n) if pending[i] > 0)[:5]
            raise GraphInvariantError(f"taxonomy contains a cycle involving e.g. {stuck}")
        self._order = order

        depth = np.zeros(n, dtype=np.int64)
        ancestors: list[frozenset[int]] = [frozenset()] * n
        for u in order:
            ps = self.parents[u]
            depth[u] = 1 if not ps else 1 + min(int(depth[p]) for p in ps)
            acc = {u}
            for p in ps:
                acc |= ancestors[p]
            ancestors[u] = frozenset(acc)
        self.depth_array = depth
        self._ancestors = ancestors

        n_children = np.array([len(cs) for cs in self.children], dtype=np.int64)
        is_leaf = n_children == 0
        hypo = np.zeros(n, dtype=np.int64)
        leaves = np.zeros(n, dtype=np.int64)
        inv_depth_sum = np.zeros(n, dtype=np.float64)
        inv_depth = 1.0 / depth
        for d, anc in enumerate(ancestors):
            idx = np.fromiter(anc, dtype=np.int64, count=len(anc))
            if is_leaf[d]:
                leaves[idx] += 1
            strict = idx[idx != d]
            hypo[strict] += 1
            inv_depth_sum[strict] += inv_depth[d]
        self.hypo_array = hypo
        self.leaves_array = leaves  # a leaf counts itself
        self.children_array = n_children
        self.subsumer_count_array = np.array([len(a) for a in ancestors], dtype=np.int64)
        self.hypo_inv_depth_array = inv_depth_sum
        self.is_leaf_array = is_leaf

    # -- identity -------------------------------------------------------------
    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, node: object) -> bool:
        return node in self._index

    @property
    def ids(self) -> Sequence[str]:
        return self._ids

    def index(self, node: str) -> int:
        try:
            return self._index[node]
        except KeyError:
            raise NotFoundError(f"node {node!r} is not in the taxonomy") from None

    # -- per-node counts --------------------------------------------------------
    def depth(self, node: str) -> int:
        return int(self.depth_array[self.index(node)])

    def hypo_count(self, node: str) -> int:
        return int(self.hypo_array[self.index(node)])

    def leaf_count(self, node: str, *, counts_self: bool = True) -> int:
        i = self.index(node)
        if not counts_self and self.is_leaf_array[i]:
            return 0
        return int(self.leaves_array[i])

    def direct_hyponyms(self, node: str) -> int:
        return int(self.children_array[self.index(node)])

    def sibling_count(self, node: str) -> int:
        # branching factor at ``node``: the count of its direct children
        return self.direct_hyponyms(node)

    def subsumers(self, node: str) -> frozenset[str]:
        return frozenset(self._ids[a] for a in self._ancestors[self.index(node)])

    def subsumer_indices(self, i: int) -> frozenset[int]:
        return self._ancestors[i]

    def parents_of(self, node: str) -> tuple[str, ...]:
        return tuple(self._ids[p] for p in self.parents[self.index(node)])

    def children_of(self, node: str) -> tuple[str, ...]:
        return tuple(self._ids[c] for c in self.children[self.index(node)])

    # -- global ---------------------------------------------------------------
    def max_depth(self) -> int:
        return int(self.depth_array.max())

    def max_wn(self) -> int:
        return len(self._ids)

    def max_leaves(self) -> int:
        return int(self.is_leaf_array.sum())

    # -- pairwise -------------------------------------------------------------
    def lcs_index(self, a: int, b: int, ic: np.ndarray) -> int:
        if a == b:  # an ancestor may outscore the node under a non-monotone IC
            return a
        common = self._ancestors[a] & self._ancestors[b]
        ids = self._ids
        depth = self.depth_array
        return max(common, key=lambda c: (ic[c], depth[c], _Reversed(ids[c])))

    def lcs(self, node_a: str, node_b: str, ic: np.ndarray | Callable[[str], float]) -> str:
        """Common subsumer with maximal IC; ties go to the deeper, then the lexicographically smaller id.

        A node is always its own LCS.
        """
        a, b = self.index(node_a), self.index(node_b)
        if callable(ic):
            values = np.array([ic(x) for x in self._ids], dtype=float)
        else:
            values = np.asarray(ic, dtype=float)
        return self._ids[self.lcs_index(a, b, values)]

    def path_length(self, node_a: str, node_b: str) -> int:
        return self.path_length_index(self.index(node_a), self.index(node_b))

    @lru_cache(maxsize=1 << 16)  # noqa: B019 - the taxonomy is immutable and lives as long as the graph
    def path_length_index(self, a: int, b: int) -> int:
        """Shortest undirected path over taxonomic edges (bidirectional BFS)."""
        if a == b:
            return 0
        if b < a:
            return self.path_length_index(b, a)
        dist_a = {a: 0}
        dist_b = {b: 0}
        front_a = [a]
        front_b = [b]
        parents, children = self.parents, self.children
        while front_a and front_b:
            if len(front_a) <= len(front_b):
                front, dist, other = front_a, dist_a, dist_b
            else:
                front, dist, other = front_b, dist_b, dist_a
            best = None
            nxt: list[int] = []
            for u in front:
                du = dist[u] + 1
                for v in parents[u] + children[u]:
                    if v in dist:
                        continue
                    if v in other:
                        total = du + other[v]
                        if best is None or total < best:
                            best = total
                        continue
                    dist[v] = du
                    nxt.append(v)
            if best is not None:
                return best
            if front is front_a:
                front_a = nxt
            else:
                front_b = nxt
        raise GraphInvariantError("taxonomy is disconnected")


class _Reversed(str):
    """String wrapper whose ordering is reversed, so max() prefers the smaller id."""

    __slots__ = ()

    def __lt__(self, other: str) -> bool:  # type: ignore[override]
        return str.__gt__(self, other)

    def __gt__(self, other: str) -> bool:  # type: ignore[override]
        return str.__lt__(self, other)


class KnowledgeGraph:
    """Frozen node/edge store with taxonomic and non-taxonomic partitions.

    Parameters
    ----------
    nodes
        All synset, sense and entry nodes.
    relation_types
        Declared relation types in canonical order. Frequencies and
        prevalences are recomputed from the instances; ``frequency_overrides``
        replaces the count of specific types before prevalences are derived.
    instances
        Relation instances of every category except structural/ignore.
    sense_synset
        Synset membership of each sense node.
    relation_parents, relation_domain, relation_range
        Optional schema for relation types (sub-property tree, domain and
        range concepts). Empty for WordNet.
    """

    def __init__(
        self,
        nodes: Iterable[Node],
        relation_types: Iterable[RelationType],
        instances: Iterable[RelationInstance],
        sense_synset: Mapping[str, str],
        *,
        frequency_overrides: Mapping[str, int] | None = None,
        relation_parents: Mapping[str, Sequence[str]] | None = None,
        relation_domain: Mapping[str, str] | None = None,
        relation_range: Mapping[str, str] | None = None,
        virtual_root: str | None = None,
    ):
        self._nodes: dict[str, Node] = {}
        for node in nodes:
            if node.id in self._nodes:
                raise GraphInvariantError(f"duplicate node id {node.id!r}")
            self._nodes[node.id] = node
        self.sense_synset: dict[str, str] = dict(sense_synset)
        for sense, syn in self.sense_synset.items():
            if sense not in self._nodes or syn not in self._nodes:
                raise NotFoundError(f"membership {sense!r} -> {syn!r} references an unknown node")

        types = {t.name: t for t in relation_types}
        taxonomic_edges: list[RelationInstance] = []
        kept: list[RelationInstance] = []
        seen: set[RelationInstance] = set()
        for inst in instances:
            if inst.type not in types:
                raise NotFoundError(f"relation type {inst.type!r} is not declared")
            if inst.subject == inst.object:
                continue
            if inst in seen:
                continue
            seen.add(inst)
            if inst.subject not in self._nodes or inst.object not in self._nodes:
                raise NotFoundError(f"instance {inst} references an unknown node")
            if types[inst.type].category == TAXONOMIC:
                taxonomic_edges.append(inst)
            else:
                kept.append(inst)
        self.instances: tuple[RelationInstance, ...] = tuple(kept)
        self.taxonomic_instances: tuple[RelationInstance, ...] = tuple(taxonomic_edges)

        counts = Counter(i.type for i in kept)
        counts.update(i.type for i in taxonomic_edges)
        if frequency_overrides:
            counts.update({k: v - counts.get(k, 0) for k, v in frequency_overrides.items()})
        totals: Counter[str] = Counter()
        for t in types.values():
            totals[t.category] += counts.get(t.name, 0)
        self.relation_types: dict[str, RelationType] = {
            name: replace(
                t,
                frequency=counts.get(name, 0),
                prevalence=(counts.get(name, 0) / totals[t.category]) if totals[t.category] else 0.0,
            )
            for name, t in types.items()
        }

        synsets = [n.id for n in self._nodes.values() if n.kind == SYNSET]
        tax_pairs = []
        for inst in taxonomic_edges:
            rt = types[inst.type]
            s = self.synset_of(inst.subject)
            o = self.synset_of(inst.object)
            if s == o:
                continue
            tax_pairs.append((s, o) if rt.direction != "down" else (o, s))
        self.taxonomy = Taxonomy(synsets, tax_pairs, virtual_root=virtual_root)

        self.relation_taxonomy: Taxonomy | None = None
        if relation_parents:
            rel_nodes = [t for t in types if types[t].category == NON_TAXONOMIC]
            rel_nodes += [p for ps in relation_parents.values() for p in ps]
            rel_nodes += list(relation_parents)
            edges = [(c, p) for c, ps in relation_parents.items() for p in ps]
            self.relation_taxonomy = Taxonomy(rel_nodes, edges, virtual_root="__top_relation__")
        self.relation_domain: dict[str, str] = dict(relation_domain or {})
        self.relation_range: dict[str, str] = dict(relation_range or {})

        self._word_index: dict[str, list[str]] = {}
        for node in self._nodes.values():
            if node.kind == ENTRY:
                continue
            for label in node.labels:
                self._word_index.setdefault(label, []).append(node.id)
        self._members: dict[str, list[str]] = {}
        for sense, syn in self.sense_synset.items():
            self._members.setdefault(syn, []).append(sense)

        self._incident: dict[str, list[int]] = {}
        for k, inst in enumerate(self.instances):
            if self.relation_types[inst.type].category != NON_TAXONOMIC:
                continue
            self._incident.setdefault(inst.subject, []).append(k)
            # derived synonym edges are stored once per unordered pair
            if inst.type == UNDIRECTED_TYPE:
                self._incident.setdefault(inst.object, []).append(k)

    # -- nodes --------------------------------------------------------------
    def __contains__(self, node_id: object) -> bool:
        return node_id in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise NotFoundError(f"unknown node {node_id!r}") from None

    def nodes(self, kind: str | None = None) -> list[Node]:
        return [n for n in self._nodes.values() if kind is None or n.kind == kind]

    def synset_of(self, node_id: str) -> str:
        """Taxonomy position of a node: itself for synsets, the owning synset for senses."""
        node = self.node(node_id)
        if node.kind == SYNSET:
            return node_id
        try:
            return self.sense_synset[node_id]
        except KeyError:
            raise NotFoundError(f"{node_id!r} has no synset") from None

    def members(self, synset: str) -> list[str]:
        return list(self._members.get(synset, ()))

    def senses_of(self, word: str) -> set[str]:
        """Sense nodes labelled ``word`` plus their synsets (and synsets labelled directly)."""
        out: set[str] = set()
        for node_id in self._word_index.get(normalize_word(word), ()):
            out.add(node_id)
            if self._nodes[node_id].kind == SENSE and node_id in self.sense_synset:
                out.add(self.sense_synset[node_id])
        return out

    def synsets_of(self, word: str) -> list[str]:
        """Candidate concepts for ``word`` in deterministic order."""
        return sorted(n for n in self.senses_of(word) if self._nodes[n].kind == SYNSET)

    def has_word(self, word: str) -> bool:
        return normalize_word(word) in self._word_index

    def words(self) -> list[str]:
        return sorted(self._word_index)

    # -- relations ------------------------------------------------------------
    def relation_type(self, name: str) -> RelationType:
        try:
            return self.relation_types[name]
        except KeyError:
            raise NotFoundError(f"unknown relation type {name!r}") from None

    def types_in(self, category: str) -> list[RelationType]:
        return [t for t in self.relation_types.values() if t.category == category]

    def non_taxonomic_types(self) -> list[str]:
        return [t.name for t in self.types_in(NON_TAXONOMIC)]

    def prevalence(self, name: str) -> float:
        return self.relation_type(name).prevalence

    def incident(self, node_ids: Iterable[str]) -> list[int]:
        """Indices of non-taxonomic instances leaving any of ``node_ids`` (synonyms count at both ends)."""
        out: set[int] = set()
        for n in node_ids:
            out.update(self._incident.get(n, ()))
        return sorted(out)

    def max_depth(self) -> int:
        return self.taxonomy.max_depth()

    def max_wn(self) -> int:
        return self.taxonomy.max_wn()
