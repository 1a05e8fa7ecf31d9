"""Relation information content: per-type taxonomic and global-context terms, per-instance local term."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .graph import NON_TAXONOMIC, KnowledgeGraph, NotFoundError, RelationInstance
from .ic import IcParams, ic_table, minmax

__all__ = [
    "RicWeights",
    "WORDNET_WEIGHTS",
    "local_ic",
    "relation_ic_tax",
    "relation_ic_gc",
    "relation_ic_lc",
    "ric",
    "prevalence",
    "RicTable",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RicWeights:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("RIC weights must be non-negative")
        if self.alpha + self.beta + self.gamma <= 0:
            raise ValueError("at least one RIC weight must be positive")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


WORDNET_WEIGHTS = RicWeights(0.0, 0.0, 1.0)

# IC differences below this are rounding noise (equal sums taken in another
# order); the fractional exponent would blow them up to visible values
IC_EPS = 1e-12


def _abs_diff(a, b):
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    return np.where(d < IC_EPS, 0.0, d)


def local_ic(ic_a: float, ic_b: float, depth_a: int, depth_b: int) -> float:
    """``|ic_a - ic_b| ** (1 / (depth_a + depth_b))``, the shared shape of the GC and LC terms."""
    return float(_abs_diff(ic_a, ic_b)) ** (1.0 / (depth_a + depth_b))


def _norm_ic(graph: KnowledgeGraph, metric: str, params: IcParams | None) -> np.ndarray:
    return minmax(ic_table(graph.taxonomy, metric, params))


def relation_ic_tax(graph: KnowledgeGraph, rel_type: str, metric: str, params: IcParams | None = None) -> float:
    """IC of the relation type within the sub-property hierarchy; 0 when there is none."""
    graph.relation_type(rel_type)
    rt = graph.relation_taxonomy
    if rt is None or rel_type not in rt:
        return 0.0
    return float(ic_table(rt, metric, params)[rt.index(rel_type)])


def relation_ic_gc(
    graph: KnowledgeGraph,
    rel_type: str,
    metric: str,
    params: IcParams | None = None,
    *,
    norm_ic: np.ndarray | None = None,
) -> float:
    """Global-context IC from the declared domain and range; 0 when either is missing."""
    graph.relation_type(rel_type)
    dom, ran = graph.relation_domain.get(rel_type), graph.relation_range.get(rel_type)
    if dom is None or ran is None:
        return 0.0
    tax = graph.taxonomy
    if dom not in tax or ran not in tax:
        return 0.0
    values = _norm_ic(graph, metric, params) if norm_ic is None else norm_ic
    i, j = tax.index(dom), tax.index(ran)
    return local_ic(values[i], values[j], int(tax.depth_array[i]), int(tax.depth_array[j]))


def relation_ic_lc(
    graph: KnowledgeGraph,
    instance: RelationInstance,
    metric: str,
    params: IcParams | None = None,
    *,
    norm_ic: np.ndarray | None = None,
) -> float:
    """Local IC of one instance; sense endpoints take their synset's IC and depth."""
    tax = graph.taxonomy
    values = _norm_ic(graph, metric, params) if norm_ic is None else norm_ic
    i = tax.index(graph.synset_of(instance.subject))
    j = tax.index(graph.synset_of(instance.object))
    return local_ic(values[i], values[j], int(tax.depth_array[i]), int(tax.depth_array[j]))


def ric(
    graph: KnowledgeGraph,
    instance: RelationInstance,
    weights: RicWeights,
    metric: str,
    params: IcParams | None = None,
) -> float:
    w = weights
    total = 0.0
    if w.alpha:
        total += w.alpha * relation_ic_tax(graph, instance.type, metric, params)
    if w.beta:
        total += w.beta * relation_ic_gc(graph, instance.type, metric, params)
    if w.gamma:
        total += w.gamma * relation_ic_lc(graph, instance, metric, params)
    return total


def prevalence(graph: KnowledgeGraph, rel_type: str) -> float:
    return graph.prevalence(rel_type)


class RicTable:
    """RIC of every non-taxonomic instance of a graph, computed in one pass.

    Attributes
    ----------
    types
        Non-taxonomic type names in canonical order.
    type_code
        Per instance, the index into ``types``; -1 for auxiliary instances.
    ric
        Per-instance RIC (0 for auxiliary instances).
    prevalence
        Per-type prevalence, aligned with ``types``.
    """

    def __init__(
        self,
        graph: KnowledgeGraph,
        metric: str,
        weights: RicWeights = WORDNET_WEIGHTS,
        params: IcParams | None = None,
    ):
        self.metric = metric
        self.weights = weights
        self.types: list[str] = graph.non_taxonomic_types()
        code = {t: k for k, t in enumerate(self.types)}
        self.prevalence = np.array([graph.prevalence(t) for t in self.types], dtype=float)
        tax = graph.taxonomy
        norm = _norm_ic(graph, metric, params)
        self.norm_ic = norm
        type_tax = np.array([relation_ic_tax(graph, t, metric, params) for t in self.types], dtype=float)
        type_gc = np.array([relation_ic_gc(graph, t, metric, params, norm_ic=norm) for t in self.types], dtype=float)

        n = len(graph.instances)
        self.type_code = np.full(n, -1, dtype=np.int64)
        sub = np.zeros(n, dtype=np.int64)
        obj = np.zeros(n, dtype=np.int64)
        skipped = 0
        for k, inst in enumerate(graph.instances):
            c = code.get(inst.type)
            if c is None or graph.relation_types[inst.type].category != NON_TAXONOMIC:
                continue
            try:
                sub[k] = tax.index(graph.synset_of(inst.subject))
                obj[k] = tax.index(graph.synset_of(inst.object))
            except NotFoundError:
                skipped += 1
                continue
            self.type_code[k] = c
        self.skipped = skipped
        if skipped:
            log.warning("skipped %d relation instances with unresolvable endpoints", skipped)
        mask = self.type_code >= 0
        depth_sum = (tax.depth_array[sub] + tax.depth_array[obj]).astype(float)
        lc = np.zeros(n)
        lc[mask] = _abs_diff(norm[sub[mask]], norm[obj[mask]]) ** (1.0 / depth_sum[mask])
        codes = np.where(mask, self.type_code, 0)
        self.ic_lc = lc
        self.ic_tax = np.where(mask, type_tax[codes], 0.0)
        self.ic_gc = np.where(mask, type_gc[codes], 0.0)
        a, b, g = weights.as_tuple()
        self.ric = a * self.ic_tax + b * self.ic_gc + g * self.ic_lc
        self.weighted = np.where(mask, self.prevalence[codes] * self.ric, 0.0)

    _ARRAYS = ("prevalence", "norm_ic", "type_code", "ic_lc", "ic_tax", "ic_gc", "ric", "weighted")

    def to_arrays(self) -> dict[str, np.ndarray]:
        out = {k: getattr(self, k) for k in self._ARRAYS}
        out["skipped"] = np.array(self.skipped)
        return out

    @classmethod
    def from_arrays(cls, graph: KnowledgeGraph, metric: str, weights: RicWeights, arrays) -> RicTable:
        """Rebuild a table from :meth:`to_arrays` output without recomputing."""
        self = cls.__new__(cls)
        self.metric = metric
        self.weights = weights
        self.types = graph.non_taxonomic_types()
        for k in cls._ARRAYS:
            setattr(self, k, np.asarray(arrays[k]))
        self.skipped = int(arrays["skipped"])
        return self
