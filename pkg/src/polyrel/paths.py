"""Non-taxonomic path enumeration, weighted path distance and relatedness."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .graph import NON_TAXONOMIC, UNDIRECTED_TYPE, KnowledgeGraph, normalize_word

__all__ = [
    "RelationalPath",
    "PathIndex",
    "path_distance",
    "path_score",
    "relatedness",
    "sem_sim_rel_s4",
]


@dataclass(frozen=True)
class RelationalPath:
    """A walk over non-taxonomic edges.

    ``types`` label each hop as read in the walking direction. ``prevalences``
    hold the weight of each hop, taken from the stored instance behind it so
    a path and its reverse weigh the same; empty means "look up ``types``".
    """

    nodes: tuple[str, ...]
    types: tuple[str, ...]
    prevalences: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.nodes) != len(self.types) + 1:
            raise ValueError("a path over n edges has n + 1 nodes")
        if self.prevalences and len(self.prevalences) != len(self.types):
            raise ValueError("one prevalence per edge")

    def __len__(self) -> int:
        return len(self.types)

    def reversed(self) -> RelationalPath:
        return RelationalPath(self.nodes[::-1], self.types[::-1], self.prevalences[::-1])


def path_distance(types: Sequence[str] | RelationalPath, prevalence, max_depth: int) -> float:
    """Sum of ``exp(-P(type))`` over the edges, scaled by ``1 / max_depth``.

    ``prevalence`` is a mapping or a callable from type name to prevalence;
    it is ignored for paths that carry their own per-hop prevalences.
    """
    if isinstance(types, RelationalPath):
        if types.prevalences:
            return sum(math.exp(-p) for p in types.prevalences) / max_depth
        types = types.types
    get = prevalence if callable(prevalence) else prevalence.__getitem__
    return sum(math.exp(-get(t)) for t in types) / max_depth


def path_score(types: Sequence[str] | RelationalPath, prevalence, max_depth: int) -> float:
    return 1.0 - path_distance(types, prevalence, max_depth)


def relatedness(scores: Iterable[float]) -> float:
    """Mean of per-path scores; 0 without paths."""
    scores = list(scores)
    return sum(scores) / len(scores) if scores else 0.0


def sem_sim_rel_s4(tax_sim: float, rel_sim: float, related: float, alpha2: float = 0.12, beta: float = 0.55) -> float:
    if not (0.0 <= alpha2 and 0.0 <= beta and alpha2 + beta <= 1.0 + 1e-12):
        raise ValueError("need alpha2, beta >= 0 and alpha2 + beta <= 1")
    return (1.0 - alpha2 - beta) * tax_sim + alpha2 * rel_sim + beta * related


class PathIndex:
    """Bidirectional arc index over the non-taxonomic relation instances of a graph.

    Each instance contributes its forward arc and a reverse arc labelled with
    the inverse type (or the same type when none is declared). Arcs with the
    same endpoints and label collapse into one, weighted by the most prevalent
    instance behind them; an arc and its reverse always share that weight.
    Taxonomic and auxiliary edges are left out.
    """

    def __init__(self, graph: KnowledgeGraph):
        self.graph = graph
        types = graph.relation_types
        arcs: dict[tuple[str, str, str], float] = {}

        def add(u: str, v: str, label: str, p: float) -> None:
            key = (u, v, label)
            if p > arcs.get(key, -1.0):
                arcs[key] = p

        for inst in graph.instances:
            rt = types[inst.type]
            if rt.category != NON_TAXONOMIC:
                continue
            back = rt.inverse if rt.inverse in types else inst.type
            add(inst.subject, inst.object, inst.type, rt.prevalence)
            add(inst.object, inst.subject, back, rt.prevalence)
        names = sorted({u for u, _, _ in arcs} | {v for _, v, _ in arcs})
        self.ids: list[str] = names
        self.index = {n: i for i, n in enumerate(names)}
        self.type_names: list[str] = sorted({t for _, _, t in arcs})
        tcode = {t: k for k, t in enumerate(self.type_names)}
        adj: list[list[tuple[int, int, float]]] = [[] for _ in names]
        for (u, v, t), p in arcs.items():
            adj[self.index[u]].append((self.index[v], tcode[t], p))
        self.adj: list[tuple[tuple[int, int, float], ...]] = [tuple(sorted(a)) for a in adj]
        self.synonym_code = tcode.get(UNDIRECTED_TYPE, -1)
        self.arc_count = len(arcs)
        self._summaries: dict[tuple, tuple[float, int, bool]] = {}

    def _distances(self, targets: set[int], blocked: set[int], limit: int) -> dict[int, int]:
        # hop distance to the nearest target; blocked nodes get a distance but are not walked through
        dist = {t: 0 for t in targets}
        frontier = sorted(targets)
        d = 0
        while frontier and d < limit:
            d += 1
            nxt = []
            for u in frontier:
                for v, _, _ in self.adj[u]:
                    if v in dist:
                        continue
                    dist[v] = d
                    if v not in blocked:
                        nxt.append(v)
            frontier = nxt
        return dist

    def enumerate_nodes(
        self, sources: Iterable[str], targets: Iterable[str], max_len: int, max_paths: int = 1000
    ) -> tuple[list[RelationalPath], bool]:
        """All simple paths from any source to any target, shortest first then lexicographic.

        Intermediate nodes may not be sources or targets. Nodes on both sides
        are not endpoints at all: a shared synset links the words trivially and
        would otherwise spawn a copy of every path through it. A synonym edge
        only ever forms a whole one-edge path; inside a longer path it just
        swaps one sense for another of the same synset. Returns the paths and
        whether the cap truncated the enumeration.
        """
        src_all = {self.index[s] for s in sources if s in self.index}
        dst_all = {self.index[t] for t in targets if t in self.index}
        endpoints = src_all | dst_all
        shared = src_all & dst_all
        src = sorted(src_all - shared)
        dst = dst_all - shared
        if not src or not dst or max_len < 1 or max_paths < 1:
            return [], False
        dist = self._distances(dst, endpoints - dst, max_len)
        syn = self.synonym_code
        out: list[RelationalPath] = []
        for length in range(1, max_len + 1):
            for s in src:
                if dist.get(s, max_len + 1) > length:
                    continue
                if self._dfs(s, length, dst, endpoints, dist, syn, out, max_paths):
                    return out, True
        return out, False

    def _dfs(self, start, length, dst, endpoints, dist, syn, out, cap) -> bool:
        nodes = [start]
        types: list[int] = []
        prevs: list[float] = []
        on_path = {start}
        stack = [iter(self.adj[start])]
        while stack:
            step = next(stack[-1], None)
            if step is None:
                stack.pop()
                on_path.discard(nodes.pop())
                if types:
                    types.pop()
                    prevs.pop()
                continue
            v, t, p = step
            remaining = length - len(types) - 1
            if v in on_path or dist.get(v, length + 1) > remaining:
                continue
            if t == syn and (types or v not in dst):
                continue
            if v in dst:
                if remaining == 0:
                    out.append(
                        RelationalPath(
                            tuple(self.ids[n] for n in (*nodes, v)),
                            tuple(self.type_names[k] for k in (*types, t)),
                            (*prevs, p),
                        )
                    )
                    if len(out) >= cap:
                        return True
                continue
            if v in endpoints or remaining == 0:
                continue
            nodes.append(v)
            types.append(t)
            prevs.append(p)
            on_path.add(v)
            stack.append(iter(self.adj[v]))
        return False

    def enumerate_paths(
        self, word_a: str, word_b: str, max_len: int | None = None, max_paths: int = 1000
    ) -> tuple[list[RelationalPath], bool]:
        """Paths between any sense or synset of ``word_a`` and any of ``word_b``."""
        g = self.graph
        if max_len is None:
            max_len = g.max_depth()
        return self.enumerate_nodes(g.senses_of(word_a), g.senses_of(word_b), max_len, max_paths)

    def score(self, path: RelationalPath, max_depth: int | None = None) -> float:
        return path_score(path, self.graph.prevalence, max_depth or self.graph.max_depth())

    def summary(
        self, word_a: str, word_b: str, max_len: int | None = None, max_paths: int = 1000
    ) -> tuple[float, int, bool]:
        """``(relatedness, path count, truncated)`` for a word pair, memoized.

        The pair is put in a fixed order first, so the result (including which
        paths survive a cap) does not depend on argument order.
        """
        a, b = sorted((normalize_word(word_a), normalize_word(word_b)))
        key = (a, b, max_len, max_paths)
        hit = self._summaries.get(key)
        if hit is None:
            paths, truncated = self.enumerate_paths(a, b, max_len, max_paths)
            depth = self.graph.max_depth()
            hit = (relatedness(self.score(p, depth) for p in paths), len(paths), truncated)
            self._summaries[key] = hit
        return hit
