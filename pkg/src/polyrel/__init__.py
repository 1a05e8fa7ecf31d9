"""Poly-relational semantic similarity over WordNet-style knowledge graphs."""

from .engine import STRATEGY_NAMES, PairScore, Scorer, ScorerConfig
from .estimator import PolyRelationalSimilarity
from .evaluation import ReportRow, gain, pearson, render_report, spearman
from .graph import GraphInvariantError, KnowledgeGraph, NotFoundError, Taxonomy
from .harness import evaluate, evaluate_matrix
from .ic import METRICS, IcParams, ic_table
from .ingest import DataError, builtin_dataset, graph_stats, load_dataset, load_graph
from .paths import PathIndex, RelationalPath
from .ric import RicTable, RicWeights
from .taxsim import DEFAULT_MEASURE, MEASURES, SimParams

__version__ = "0.1.0"

__all__ = [
    "STRATEGY_NAMES",
    "PairScore",
    "Scorer",
    "ScorerConfig",
    "PolyRelationalSimilarity",
    "ReportRow",
    "gain",
    "pearson",
    "spearman",
    "render_report",
    "GraphInvariantError",
    "KnowledgeGraph",
    "NotFoundError",
    "Taxonomy",
    "evaluate",
    "evaluate_matrix",
    "METRICS",
    "IcParams",
    "ic_table",
    "DataError",
    "builtin_dataset",
    "graph_stats",
    "load_dataset",
    "load_graph",
    "PathIndex",
    "RelationalPath",
    "RicTable",
    "RicWeights",
    "DEFAULT_MEASURE",
    "MEASURES",
    "SimParams",
]
