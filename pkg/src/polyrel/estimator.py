"""scikit-learn style wrapper: word pairs in, similarity scores out."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .cache import ArrayCache
from .engine import STRATEGY_NAMES, Scorer, ScorerConfig
from .evaluation import pearson, spearman
from .graph import KnowledgeGraph, NotFoundError
from .ic import METRICS, IcParams
from .ingest import load_graph
from .ric import RicWeights
from .taxsim import MEASURES
from .validation import check_choice, check_fraction, check_graph, check_positive_int, check_scores, check_word_pairs

__all__ = ["PolyRelationalSimilarity", "BREAKDOWN_COLUMNS"]

BREAKDOWN_COLUMNS = ("tax_sim", "rel_s1", "rel_s2", "rel_s3", "alpha1", "relatedness", "n_paths", "score")


class PolyRelationalSimilarity(BaseEstimator):
    """Word-pair similarity from taxonomic IC blended with non-taxonomic relations.

    Nothing is learned: :meth:`fit` validates the parameters and builds the
    IC, RIC and path tables for ``graph``. ``X`` is always a sequence of
    ``(word_a, word_b)`` pairs.

    Parameters
    ----------
    graph : KnowledgeGraph or path
        The graph to score against; a path is loaded as N-Triples.
    metric : str
        Intrinsic IC metric.
    measure : str or None
        Taxonomic similarity; ``None`` uses the metric's usual partner.
    strategy : {"baseline", "s1", "s2", "s3", "s4"}
        Which combined score :meth:`predict` returns.
    unknown : {"nan", "zero", "raise"}
        What :meth:`predict` does with a pair that has a word outside the graph.

    Attributes
    ----------
    scorer_ : Scorer
    config_ : ScorerConfig
    n_features_in_ : int
        Always 2 (the two words of a pair).
    """

    def __init__(
        self,
        graph=None,
        metric: str = "seco",
        measure: str | None = None,
        strategy: str = "s4",
        alpha2: float = 0.12,
        beta: float = 0.55,
        s4_rel: str = "s3",
        max_paths: int = 1000,
        max_path_len: int | None = None,
        no_path: str = "zero",
        profile_synonyms: bool = True,
        zhou_k: float = 0.5,
        leaf_counts_self: bool = True,
        zhang_sign: int = 1,
        cai_alpha: float = 0.5,
        cai_beta: float = 0.5,
        ric_weights: tuple[float, float, float] = (0.0, 0.0, 1.0),
        unknown: str = "nan",
        cache_dir: str | None = None,
    ):
        self.graph = graph
        self.metric = metric
        self.measure = measure
        self.strategy = strategy
        self.alpha2 = alpha2
        self.beta = beta
        self.s4_rel = s4_rel
        self.max_paths = max_paths
        self.max_path_len = max_path_len
        self.no_path = no_path
        self.profile_synonyms = profile_synonyms
        self.zhou_k = zhou_k
        self.leaf_counts_self = leaf_counts_self
        self.zhang_sign = zhang_sign
        self.cai_alpha = cai_alpha
        self.cai_beta = cai_beta
        self.ric_weights = ric_weights
        self.unknown = unknown
        self.cache_dir = cache_dir

    def _config(self) -> ScorerConfig:
        check_choice("metric", self.metric, METRICS)
        if self.measure is not None:
            check_choice("measure", self.measure, MEASURES)
        check_choice("strategy", self.strategy, STRATEGY_NAMES)
        check_choice("unknown", self.unknown, ("nan", "zero", "raise"))
        check_positive_int("max_paths", self.max_paths)
        check_positive_int("max_path_len", self.max_path_len, allow_none=True)
        for name in ("alpha2", "beta", "zhou_k", "cai_alpha", "cai_beta"):
            check_fraction(name, getattr(self, name))
        if len(self.ric_weights) != 3:
            raise ValueError("ric_weights needs three values (alpha, beta, gamma)")
        return ScorerConfig(
            metric=self.metric,
            measure=self.measure,
            ic_params=IcParams(self.zhou_k, bool(self.leaf_counts_self), int(self.zhang_sign)),
            ric_weights=RicWeights(*map(float, self.ric_weights)),
            cai_alpha=self.cai_alpha,
            cai_beta=self.cai_beta,
            alpha2=self.alpha2,
            beta=self.beta,
            s4_rel=self.s4_rel,
            max_path_len=self.max_path_len,
            max_paths=self.max_paths,
            no_path=self.no_path,
            profile_synonyms=bool(self.profile_synonyms),
        )

    def fit(self, X=None, y=None):
        """Validate parameters and precompute tables. ``X`` and ``y`` are only checked."""
        config = self._config()
        if self.graph is None:
            raise ValueError("graph is required")
        graph = self.graph if isinstance(self.graph, KnowledgeGraph) else load_graph(Path(self.graph))
        check_graph(graph)
        if X is not None:
            pairs = check_word_pairs(X)
            if y is not None:
                check_scores(y, len(pairs))
        self.config_ = config
        self.scorer_ = Scorer(graph, config, cache=ArrayCache(self.cache_dir))
        self.n_features_in_ = 2
        return self

    def _breakdowns(self, X):
        check_is_fitted(self, "scorer_")
        out = []
        for a, b in check_word_pairs(X):
            try:
                out.append(self.scorer_.pair(a, b))
            except NotFoundError:
                if self.unknown == "raise":
                    raise
                out.append(None)
        return out

    def predict(self, X) -> np.ndarray:
        """Combined score of the configured strategy for each pair."""
        fill = math.nan if self.unknown == "nan" else 0.0
        return np.array([fill if r is None else r.scores[self.strategy] for r in self._breakdowns(X)])

    def transform(self, X) -> np.ndarray:
        """Per-pair components, one column per name in :data:`BREAKDOWN_COLUMNS`."""
        fill = math.nan if self.unknown == "nan" else 0.0
        rows = []
        for r in self._breakdowns(X):
            if r is None:
                rows.append([fill] * len(BREAKDOWN_COLUMNS))
                continue
            s3 = math.nan if r.rel_s3 is None else r.rel_s3
            rows.append([r.tax_sim, r.rel_s1, r.rel_s2, s3, r.alpha1, r.relatedness, r.n_paths, r.scores[self.strategy]])
        return np.array(rows, dtype=float).reshape(-1, len(BREAKDOWN_COLUMNS))

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        return np.array(BREAKDOWN_COLUMNS, dtype=object)

    def score(self, X, y, method: str = "pearson") -> float:
        """Correlation of predictions with ``y`` over the pairs the graph knows."""
        pred = self.predict(X)
        gold = check_scores(y, len(pred))
        keep = np.isfinite(pred)
        fn = {"pearson": pearson, "spearman": spearman}[check_choice("method", method, ("pearson", "spearman"))]
        return fn(pred[keep], gold[keep])
