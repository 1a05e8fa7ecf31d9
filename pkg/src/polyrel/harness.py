"""Dataset-level evaluation: score every pair, correlate with the gold scores, report gains.

Scoring fans out over a fork-based process pool when ``threads > 1``. Work is
split into contiguous chunks and merged back in input order, and every score
is a pure function of the pair, so the report does not depend on the worker
count.
"""

from __future__ import annotations

import logging
import math
import multiprocessing as mp
import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor

from .engine import STRATEGY_NAMES, PairScore, Scorer, ScorerConfig
from .evaluation import ReportRow, UndefinedCorrelationError, gain, pearson, spearman
from .graph import KnowledgeGraph, NotFoundError
from .ingest import GoldDataset
from .paths import PathIndex

__all__ = [
    "score_pairs",
    "warm_paths",
    "evaluate",
    "evaluate_matrix",
    "relevant_pairs",
    "default_threads",
]

log = logging.getLogger(__name__)

_worker: dict = {}


def default_threads() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


def _chunks(items: Sequence, n: int) -> list[Sequence]:
    size = max(1, math.ceil(len(items) / n))
    return [items[i : i + size] for i in range(0, len(items), size)]


def _pool_map(fn: Callable, items: Sequence, threads: int, state: dict) -> list:
    """``[fn(x) for x in items]``, optionally across forked workers sharing ``state``."""
    if threads <= 1 or len(items) < 2 or "fork" not in mp.get_all_start_methods():
        _worker.update(state)
        try:
            return [fn(x) for x in items]
        finally:
            _worker.clear()
    _worker.update(state)  # inherited by the forked children
    try:
        ctx = mp.get_context("fork")
        chunks = _chunks(items, threads * 4)
        with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as pool:
            parts = pool.map(_run_chunk, [fn] * len(chunks), chunks)
            return [r for part in parts for r in part]
    finally:
        _worker.clear()


def _run_chunk(fn: Callable, chunk: Sequence) -> list:
    return [fn(x) for x in chunk]


def _score_one(pair: tuple[str, str]) -> PairScore | None:
    try:
        return _worker["scorer"].pair(*pair)
    except NotFoundError:
        return None


def score_pairs(scorer: Scorer, pairs: Sequence[tuple[str, str]], threads: int = 1) -> list[PairScore | None]:
    """Breakdowns in input order; ``None`` where a word is missing from the graph."""
    if threads > 1:
        # path summaries are the expensive part; compute them once, in parallel, before forking again
        warm_paths(scorer.paths, pairs, scorer.config, threads)
    return _pool_map(_score_one, list(pairs), threads, {"scorer": scorer})


def _summary_one(pair: tuple[str, str]):
    index: PathIndex = _worker["paths"]
    cfg: ScorerConfig = _worker["config"]
    return index.summary(pair[0], pair[1], cfg.max_path_len, cfg.max_paths)


def warm_paths(index: PathIndex, pairs: Iterable[tuple[str, str]], config: ScorerConfig, threads: int = 1) -> None:
    """Fill the index's relatedness memo for ``pairs``."""
    todo = sorted({tuple(sorted((a, b))) for a, b in pairs if a != b})
    todo = [p for p in todo if (p[0], p[1], config.max_path_len, config.max_paths) not in index._summaries]
    if not todo:
        return
    results = _pool_map(_summary_one, todo, threads, {"paths": index, "config": config})
    for (a, b), res in zip(todo, results):
        index._summaries[(a, b, config.max_path_len, config.max_paths)] = res


def _corr(fn, xs, ys) -> float:
    try:
        return fn(xs, ys)
    except UndefinedCorrelationError:
        return math.nan


def _gain(poly: float, base: float) -> float:
    if math.isnan(poly) or math.isnan(base) or base == 0:
        return math.nan
    return gain(poly, base)


def relevant_pairs(results: Sequence[PairScore | None]) -> list[int]:
    """Indices of scored pairs with a shared relation type or a connecting path."""
    return [i for i, r in enumerate(results) if r is not None and (r.common_types or r.n_paths > 0)]


def evaluate(
    scorer: Scorer,
    dataset: GoldDataset,
    strategies: Sequence[str] = STRATEGY_NAMES,
    *,
    threads: int = 1,
    results: Sequence[PairScore | None] | None = None,
    subset: Sequence[int] | None = None,
    label: str | None = None,
) -> list[ReportRow]:
    """One report row per strategy for ``dataset`` under the scorer's metric.

    Gains compare each strategy with the same metric's taxonomic baseline.
    ``subset`` restricts the correlation to some pair indices (the rest count
    as skipped); ``results`` reuses breakdowns from :func:`score_pairs`.
    """
    for s in strategies:
        if s not in STRATEGY_NAMES:
            raise ValueError(f"unknown strategy {s!r}")
    if results is None:
        results = score_pairs(scorer, [(a, b) for a, b, _ in dataset.pairs], threads)
    keep = set(range(len(dataset.pairs))) if subset is None else set(subset)
    idx = [i for i, r in enumerate(results) if r is not None and i in keep]
    gold = [dataset.pairs[i][2] for i in idx]
    base_vals = [results[i].scores["baseline"] for i in idx]
    base_p, base_s = _corr(pearson, base_vals, gold), _corr(spearman, base_vals, gold)
    rows = []
    for s in strategies:
        vals = [results[i].scores[s] for i in idx]
        p, r = _corr(pearson, vals, gold), _corr(spearman, vals, gold)
        rows.append(
            ReportRow(
                dataset=label or dataset.name,
                baseline=scorer.config.metric,
                strategy=s,
                pearson=p,
                spearman=r,
                gain_pearson=_gain(p, base_p),
                gain_spearman=_gain(r, base_s),
                pairs_scored=len(idx),
                pairs_skipped=len(dataset.pairs) - len(idx),
            )
        )
    return rows


def evaluate_matrix(
    graph: KnowledgeGraph,
    datasets: Sequence[GoldDataset],
    metrics: Sequence[str],
    config: ScorerConfig | None = None,
    *,
    strategies: Sequence[str] = STRATEGY_NAMES,
    threads: int = 1,
    cache=None,
    paths: PathIndex | None = None,
    progress: Callable[[str], None] | None = None,
) -> list[ReportRow]:
    """Rows for every dataset x metric x strategy, in that nesting order."""
    config = config or ScorerConfig()
    paths = paths or PathIndex(graph)
    all_pairs = [(a, b) for d in datasets for a, b, _ in d.pairs]
    warm_paths(paths, all_pairs, config, threads)
    scorers = {m: Scorer(graph, config.with_metric(m), paths=paths, cache=cache) for m in metrics}
    rows: list[ReportRow] = []
    for d in datasets:
        pairs = [(a, b) for a, b, _ in d.pairs]
        for m in metrics:
            if progress:
                progress(f"{d.name} / {m}")
            results = score_pairs(scorers[m], pairs, threads)
            rows.extend(evaluate(scorers[m], d, strategies, results=results))
    return rows
