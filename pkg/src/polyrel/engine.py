"""Word-pair scoring that ties the taxonomic baseline to the relational strategies.

:class:`Scorer` owns the per-metric tables (IC, RIC, word profiles) and
produces a :class:`PairScore` holding every component of a pair's score, so
callers can recombine or audit the parts.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .cache import ArrayCache, cache_key
from .graph import UNDIRECTED_TYPE, KnowledgeGraph, normalize_word
from .ic import METRICS, IcParams, ic_table
from .paths import PathIndex, sem_sim_rel_s4
from .ric import WORDNET_WEIGHTS, RicTable, RicWeights
from .strategies import (
    Profile,
    alpha1,
    combine_semsim,
    common_types,
    node_profile,
    profile,
    rel_sim_s1,
    rel_sim_s2,
    rel_sim_s3,
)
from .taxsim import DEFAULT_MEASURE, MEASURES, SimParams, word_tax_sim

__all__ = ["STRATEGY_NAMES", "ScorerConfig", "PairScore", "Scorer"]

STRATEGY_NAMES = ("baseline", "s1", "s2", "s3", "s4")
NO_PATH_POLICIES = ("zero", "taxsim")


@dataclass(frozen=True)
class ScorerConfig:
    """Everything that changes a pair's score.

    Attributes
    ----------
    metric, measure
        IC metric and taxonomic similarity; ``measure=None`` picks the
        metric's usual partner from :data:`DEFAULT_MEASURE`.
    cai_alpha, cai_beta, zhang_log_base
        Similarity constants (see :class:`SimParams`).
    alpha2, beta
        Weights of RelSim and relatedness in the S4 blend.
    s4_rel
        Which strategy supplies the RelSim term of S4.
    max_path_len, max_paths
        Path enumeration caps; ``None`` length means the taxonomy depth.
    no_path
        Relatedness of a pair without paths: ``"zero"`` or the pair's TaxSim.
    profile_synonyms
        Whether synonym instances take part in the relational profiles behind
        S1-S3 (and the S4 RelSim term). Paths are unaffected.
    """

    metric: str = "seco"
    measure: str | None = None
    ic_params: IcParams = field(default_factory=IcParams)
    ric_weights: RicWeights = WORDNET_WEIGHTS
    cai_alpha: float = 0.5
    cai_beta: float = 0.5
    zhang_log_base: float | None = None
    alpha2: float = 0.12
    beta: float = 0.55
    s4_rel: str = "s3"
    max_path_len: int | None = None
    max_paths: int = 1000
    no_path: str = "zero"
    profile_synonyms: bool = True

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown IC metric {self.metric!r}; choose from {', '.join(METRICS)}")
        if self.measure is not None and self.measure not in MEASURES:
            raise ValueError(f"unknown similarity measure {self.measure!r}; choose from {', '.join(MEASURES)}")
        for name in ("alpha2", "beta", "cai_alpha", "cai_beta"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.alpha2 + self.beta > 1.0 + 1e-12:
            raise ValueError("alpha2 + beta must not exceed 1")
        if self.s4_rel not in ("s1", "s2", "s3"):
            raise ValueError("s4_rel must be one of s1, s2, s3")
        if self.max_paths < 1:
            raise ValueError("max_paths must be at least 1")
        if self.max_path_len is not None and self.max_path_len < 1:
            raise ValueError("max_path_len must be at least 1")
        if self.no_path not in NO_PATH_POLICIES:
            raise ValueError(f"no_path must be one of {', '.join(NO_PATH_POLICIES)}")
        if self.zhang_log_base is not None and (self.zhang_log_base <= 0 or self.zhang_log_base == 1):
            raise ValueError("zhang_log_base must be positive and not 1")

    @property
    def resolved_measure(self) -> str:
        return self.measure or DEFAULT_MEASURE[self.metric]

    def with_metric(self, metric: str) -> ScorerConfig:
        return replace(self, metric=metric)


@dataclass(frozen=True)
class PairScore:
    word_a: str
    word_b: str
    tax_sim: float
    synset_a: str
    synset_b: str
    lcs: str
    rel_s1: float
    rel_s2: float
    rel_s3: float | None
    alpha1: float
    common_types: tuple[str, ...]
    relatedness: float
    n_paths: int
    truncated: bool
    scores: dict[str, float]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["common_types"] = list(self.common_types)
        return d


class Scorer:
    """Scores word pairs under one IC metric.

    Parameters
    ----------
    graph
        A loaded :class:`KnowledgeGraph`.
    config
        Scoring parameters.
    paths
        A :class:`PathIndex` to share between scorers; path results do not
        depend on the metric, so one index serves a whole evaluation matrix.
    cache
        Optional on-disk cache for the IC and RIC tables.
    """

    def __init__(
        self,
        graph: KnowledgeGraph,
        config: ScorerConfig | None = None,
        *,
        paths: PathIndex | None = None,
        cache: ArrayCache | None = None,
    ):
        self.graph = graph
        self.config = cfg = config or ScorerConfig()
        self.measure = cfg.resolved_measure
        cache = cache or ArrayCache(None)
        key = cache_key(graph, "ic", metric=cfg.metric, params=cfg.ic_params)
        self.ic = cache.get_or_compute(key, lambda: {"ic": ic_table(graph.taxonomy, cfg.metric, cfg.ic_params)})["ic"]
        top = float(np.max(self.ic)) if self.ic.size else 0.0
        self.sim_params = SimParams(cfg.cai_alpha, cfg.cai_beta, cfg.zhang_log_base, top if top > 0 else 1.0)
        key = cache_key(graph, "ric", metric=cfg.metric, params=cfg.ic_params, weights=cfg.ric_weights)
        arrays = cache.get_or_compute(key, lambda: RicTable(graph, cfg.metric, cfg.ric_weights, cfg.ic_params).to_arrays())
        self.table = RicTable.from_arrays(graph, cfg.metric, cfg.ric_weights, arrays)
        self._paths = paths
        self._exclude = frozenset() if cfg.profile_synonyms else frozenset(
            i for i, t in enumerate(self.table.types) if t == UNDIRECTED_TYPE
        )
        self._profiles: dict[str, Profile] = {}
        self._semic_scale: float | None = None

    # -- components -------------------------------------------------------------
    @property
    def paths(self) -> PathIndex:
        if self._paths is None:
            self._paths = PathIndex(self.graph)
        return self._paths

    def profile(self, word: str) -> Profile:
        word = normalize_word(word)
        p = self._profiles.get(word)
        if p is None:
            p = self._profiles[word] = profile(self.graph, self.table, word, self._exclude)
        return p

    @property
    def semic_scale(self) -> float:
        """Largest concept-level SemIC in the graph; scales Resnik and JC under S1."""
        if self._semic_scale is None:
            g, tax = self.graph, self.graph.taxonomy
            mass = np.zeros(len(tax))
            for k in np.flatnonzero(self.table.type_code >= 0):
                if int(self.table.type_code[k]) in self._exclude:
                    continue
                inst = g.instances[k]
                a = tax.index(g.synset_of(inst.subject))
                mass[a] += self.table.weighted[k]
                if inst.type == UNDIRECTED_TYPE:
                    b = tax.index(g.synset_of(inst.object))
                    if b != a:
                        mass[b] += self.table.weighted[k]
            top = math.log(float(mass.max()) + 1.0) if mass.size else 0.0
            self._semic_scale = top if top > 0 else 1.0
        return self._semic_scale

    def _structure(self, a: int, b: int, lcs: int) -> dict:
        tax = self.graph.taxonomy
        if self.measure == "cai1":
            return {"path_len": tax.path_length_index(a, b), "max_depth": tax.max_depth()}
        if self.measure == "cai2":
            d = tax.depth_array
            return {"depth_a": int(d[a]), "depth_b": int(d[b]), "depth_lcs": int(d[lcs])}
        return {}

    def relatedness(self, word_a: str, word_b: str) -> tuple[float, int, bool]:
        """``(relatedness, paths, truncated)``; a word is fully related to itself."""
        if normalize_word(word_a) == normalize_word(word_b):
            return 1.0, 0, False
        cfg = self.config
        return self.paths.summary(word_a, word_b, cfg.max_path_len, cfg.max_paths)

    # -- scoring ----------------------------------------------------------------
    def pair(self, word_a: str, word_b: str) -> PairScore:
        """Full breakdown for one pair. Raises :class:`NotFoundError` for unknown words."""
        cfg, g = self.config, self.graph
        tax = g.taxonomy
        wa, wb = normalize_word(word_a), normalize_word(word_b)
        ws = word_tax_sim(self.measure, wa, wb, g, self.ic, self.sim_params)
        ia, ib, il = tax.index(ws.synset_a), tax.index(ws.synset_b), tax.index(ws.lcs)
        same = wa == wb
        pa, pb = self.profile(wa), self.profile(wb)
        p_lcs = node_profile(g, self.table, ws.lcs, self._exclude)

        s1_params = replace(self.sim_params, ic_scale=self.semic_scale)
        s1 = rel_sim_s1(self.measure, pa, pb, p_lcs, same=same, params=s1_params, **self._structure(ia, ib, il))
        s1 = min(1.0, max(0.0, s1))
        s2 = rel_sim_s2(pa, pb)
        s3 = rel_sim_s3(pa, pb, self.table.prevalence)
        a1 = alpha1(pa, pb, self.table.prevalence)
        shared = tuple(self.table.types[t] for t in common_types(pa, pb))

        related, n_paths, truncated = self.relatedness(wa, wb)
        tax_value = ws.value
        if n_paths == 0 and not same and cfg.no_path == "taxsim":
            related = tax_value
        rels = {"s1": s1, "s2": s2, "s3": s3}
        s4_rel = rels[cfg.s4_rel]
        if s4_rel is None or a1 <= 0.0:
            # no shared relation type: nothing relational to compare, so RelSim defers to TaxSim
            s4_rel = tax_value
        scores = {
            "baseline": tax_value,
            "s1": combine_semsim(tax_value, s1, a1),
            "s2": combine_semsim(tax_value, s2, a1),
            "s3": combine_semsim(tax_value, s3, a1),
            "s4": sem_sim_rel_s4(tax_value, s4_rel, related, cfg.alpha2, cfg.beta),
        }
        return PairScore(
            wa, wb, tax_value, ws.synset_a, ws.synset_b, ws.lcs,
            s1, s2, s3, a1, shared, related, n_paths, truncated, scores,
        )  # fmt: skip

    def score(self, word_a: str, word_b: str, strategy: str = "s4") -> float:
        if strategy not in STRATEGY_NAMES:
            raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGY_NAMES)}")
        return self.pair(word_a, word_b).scores[strategy]
