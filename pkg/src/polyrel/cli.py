"""Command line: ``polyrel {stats,ic,sim,relatedness,paths,eval}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 invariant violation.
Arguments are validated before the graph is loaded, so a bad flag fails fast.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from .cache import ArrayCache
from .engine import STRATEGY_NAMES, Scorer, ScorerConfig
from .evaluation import render_report, report_json
from .graph import GraphInvariantError, NotFoundError
from .harness import default_threads, evaluate_matrix, relevant_pairs, score_pairs, evaluate
from .ic import METRICS, IcParams
from .ingest import (
    BUILTIN_DATASETS,
    DataError,
    GoldDataset,
    PredicateMapping,
    builtin_dataset,
    graph_stats,
    load_dataset,
    load_graph,
)
from .ntriples import NTriplesError
from .paths import PathIndex
from .ric import RicWeights
from .taxsim import MEASURES

log = logging.getLogger("polyrel")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INVARIANT = 0, 1, 2, 3
REPORT_METRICS = ("seco", "zhou", "sebti", "meng", "cai", "sanchez")
GRAPH_ENV = "POLYREL_GRAPH"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2, which we reserve for data errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return v


def _weights(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers, e.g. 0,0,1")
    return tuple(float(p) for p in parts)  # type: ignore[return-value]


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("graph")
    g.add_argument("--graph", help=f"N-Triples dump, optionally gzipped (default: ${GRAPH_ENV})")
    g.add_argument("--mapping", help="predicate mapping TSV (default: bundled WordNet mapping)")
    g.add_argument("--pos", default="noun", help="part of speech to keep (default: noun)")
    g.add_argument("--strict", action="store_true", help="fail on predicates missing from the mapping")
    g.add_argument("--cache-dir", help="directory for cached IC/RIC tables")
    g.add_argument("--structured", action="store_true", help="emit JSON instead of text")


def _add_score_args(p: argparse.ArgumentParser, *, metric_default: str | None = "seco") -> None:
    s = p.add_argument_group("scoring")
    if metric_default is not None:
        s.add_argument("--metric", choices=METRICS, default=metric_default, help="intrinsic IC metric")
    s.add_argument("--measure", choices=MEASURES, help="taxonomic similarity (default: the metric's usual one)")
    s.add_argument("--zhou-k", type=_fraction, default=0.5)
    s.add_argument("--no-leaf-counts-self", action="store_true", help="a leaf does not count as its own leaf")
    s.add_argument("--zhang-sign", type=int, choices=(1, -1), default=1)
    s.add_argument("--cai-alpha", type=_fraction, default=0.5)
    s.add_argument("--cai-beta", type=_fraction, default=0.5)
    s.add_argument("--ric-weights", type=_weights, default=(0.0, 0.0, 1.0), help="alpha,beta,gamma")
    s.add_argument("--alpha2", type=_fraction, default=0.12)
    s.add_argument("--beta", type=_fraction, default=0.55)
    s.add_argument("--s4-rel", choices=("s1", "s2", "s3"), default="s3")
    s.add_argument("--max-paths", type=_positive, default=1000)
    s.add_argument("--max-path-len", type=_positive, help="default: taxonomy depth")
    s.add_argument("--no-path", choices=("zero", "taxsim"), default="zero", help="relatedness of unconnected pairs")
    s.add_argument("--no-profile-synonyms", action="store_true", help="leave synonyms out of relational profiles")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polyrel", description="Poly-relational semantic similarity over a WordNet-style graph.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", help="relation frequencies and prevalences")
    _add_graph_args(p)

    p = sub.add_parser("ic", help="IC of a word's synsets (or of a node id)")
    _add_graph_args(p)
    p.add_argument("term", help="word or synset id")
    p.add_argument("--metric", choices=(*METRICS, "all"), default="all")
    p.add_argument("--zhou-k", type=_fraction, default=0.5)
    p.add_argument("--no-leaf-counts-self", action="store_true")
    p.add_argument("--zhang-sign", type=int, choices=(1, -1), default=1)

    for name, text in (("sim", "full score breakdown for a word pair"), ("relatedness", "path relatedness of a word pair")):
        p = sub.add_parser(name, help=text)
        _add_graph_args(p)
        _add_score_args(p)
        p.add_argument("word_a")
        p.add_argument("word_b")
        if name == "sim":
            p.add_argument("--strategy", choices=STRATEGY_NAMES, default="s4")

    p = sub.add_parser("paths", help="list the relational paths between two words")
    _add_graph_args(p)
    p.add_argument("word_a")
    p.add_argument("word_b")
    p.add_argument("--max-paths", type=_positive, default=1000)
    p.add_argument("--max-path-len", type=_positive)

    p = sub.add_parser("eval", help="correlation report over gold-standard datasets")
    _add_graph_args(p)
    _add_score_args(p, metric_default=None)
    p.add_argument(
        "--dataset",
        action="append",
        metavar="NAME|NAME=PATH|PATH",
        help=f"gold standard; bundled: {', '.join(BUILTIN_DATASETS)} (default: all bundled)",
    )
    p.add_argument("--metrics", default=",".join(REPORT_METRICS), help="comma-separated IC metrics")
    p.add_argument("--strategies", default=",".join(STRATEGY_NAMES), help="comma-separated strategies")
    p.add_argument("--relevant", action="store_true", help="correlate only pairs with a shared relation type or a path")
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--threads", type=_positive, default=None, help="worker processes (default: all cores)")
    return parser


# -- argument checks (no graph needed) ------------------------------------------


def _graph_path(args) -> Path:
    raw = args.graph or os.environ.get(GRAPH_ENV)
    if not raw:
        raise UsageError(f"no graph given: pass --graph or set ${GRAPH_ENV}")
    path = Path(raw)
    if not path.is_file():
        raise DataError(f"graph file not found: {path}")
    if args.mapping and not Path(args.mapping).is_file():
        raise DataError(f"mapping file not found: {args.mapping}")
    return path


def _ic_params(args) -> IcParams:
    return IcParams(args.zhou_k, not args.no_leaf_counts_self, args.zhang_sign)


def _config(args, metric: str | None = None) -> ScorerConfig:
    try:
        return ScorerConfig(
            metric=metric or args.metric,
            measure=args.measure,
            ic_params=_ic_params(args),
            ric_weights=RicWeights(*args.ric_weights),
            cai_alpha=args.cai_alpha,
            cai_beta=args.cai_beta,
            alpha2=args.alpha2,
            beta=args.beta,
            s4_rel=args.s4_rel,
            max_path_len=args.max_path_len,
            max_paths=args.max_paths,
            no_path=args.no_path,
            profile_synonyms=not args.no_profile_synonyms,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _split(text: str, allowed, what: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    bad = [t for t in items if t not in allowed]
    if bad or not items:
        raise UsageError(f"unknown {what}: {', '.join(bad) or '(none)'}; choose from {', '.join(allowed)}")
    return items


def _datasets(specs: list[str] | None) -> list[GoldDataset]:
    out = []
    for spec in specs or list(BUILTIN_DATASETS):
        if spec in BUILTIN_DATASETS:
            out.append(builtin_dataset(spec))
            continue
        name, _, path = spec.partition("=") if "=" in spec else (None, "", spec)
        if not Path(path).is_file():
            raise DataError(f"dataset file not found: {path}")
        out.append(load_dataset(path, name or None))
    return out


# -- commands -------------------------------------------------------------------


def _load(args):
    path = _graph_path(args)
    mapping = PredicateMapping.from_tsv(args.mapping) if args.mapping else None
    t0 = time.perf_counter()
    graph = load_graph(path, mapping, args.pos, strict=args.strict)
    log.info("loaded %s in %.1fs", path, time.perf_counter() - t0)
    log.info("max taxonomy depth %d (used as the path length bound)", graph.max_depth())
    return graph


def _emit(args, payload: dict, text: str) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n" if args.structured else text)


def cmd_stats(args) -> int:
    stats = graph_stats(_load(args))
    sys.stdout.write(stats.to_json() + "\n" if args.structured else stats.render())
    return EXIT_OK


def cmd_ic(args) -> int:
    from .ic import ic_table

    metrics = list(METRICS) if args.metric == "all" else [args.metric]
    params = _ic_params(args)
    graph = _load(args)
    tax = graph.taxonomy
    nodes = [args.term] if args.term in tax else graph.synsets_of(args.term)
    if not nodes:
        raise NotFoundError(f"{args.term!r} is neither a word nor a synset in the graph")
    tables = {m: ic_table(tax, m, params) for m in metrics}
    rows = [
        {"node": n, "depth": tax.depth(n), **{m: float(tables[m][tax.index(n)]) for m in metrics}} for n in nodes
    ]
    lines = ["\t".join(["node", "depth", *metrics])]
    lines += ["\t".join([r["node"], str(r["depth"]), *(f"{r[m]:.6f}" for m in metrics)]) for r in rows]
    _emit(args, {"term": args.term, "rows": rows}, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sim(args) -> int:
    config = _config(args)
    graph = _load(args)
    scorer = Scorer(graph, config, cache=ArrayCache(args.cache_dir))
    r = scorer.pair(args.word_a, args.word_b)
    payload = {**r.to_dict(), "metric": config.metric, "measure": scorer.measure, "strategy": args.strategy,
               "alpha2": config.alpha2, "beta": config.beta, "score": r.scores[args.strategy]}  # fmt: skip
    s3 = "none" if r.rel_s3 is None else f"{r.rel_s3:.6f}"
    text = (
        f"{r.word_a} / {r.word_b}  ({config.metric}, {scorer.measure})\n"
        f"TaxSim       {r.tax_sim:.6f}  ({r.synset_a} ~ {r.synset_b}, lcs {r.lcs})\n"
        f"RelSim s1    {r.rel_s1:.6f}\n"
        f"RelSim s2    {r.rel_s2:.6f}\n"
        f"RelSim s3    {s3}\n"
        f"alpha1       {r.alpha1:.6f}  common types: {', '.join(r.common_types) or '-'}\n"
        f"Relatedness  {r.relatedness:.6f}  over {r.n_paths} path(s){' (capped)' if r.truncated else ''}\n"
        f"alpha2, beta {config.alpha2}, {config.beta}\n"
        + "".join(f"{k:<12} {v:.6f}\n" for k, v in r.scores.items())
        + f"score        {r.scores[args.strategy]:.6f}  [{args.strategy}]\n"
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_relatedness(args) -> int:
    config = _config(args)
    graph = _load(args)
    for w in (args.word_a, args.word_b):
        if not graph.has_word(w):
            raise NotFoundError(f"word {w!r} is not in the graph")
    scorer = Scorer(graph, config, cache=ArrayCache(args.cache_dir))
    value, n, truncated = scorer.relatedness(args.word_a, args.word_b)
    payload = {"word_a": args.word_a, "word_b": args.word_b, "relatedness": value, "n_paths": n, "truncated": truncated}
    _emit(args, payload, f"{value:.6f}\t{n} path(s){' (capped)' if truncated else ''}\n")
    return EXIT_OK


def cmd_paths(args) -> int:
    graph = _load(args)
    for w in (args.word_a, args.word_b):
        if not graph.has_word(w):
            raise NotFoundError(f"word {w!r} is not in the graph")
    index = PathIndex(graph)
    paths, truncated = index.enumerate_paths(args.word_a, args.word_b, args.max_path_len, args.max_paths)
    items = [{"nodes": list(p.nodes), "types": list(p.types), "score": index.score(p)} for p in paths]
    lines = [f"{it['score']:.4f}\t" + " ".join(_hops(it["nodes"], it["types"])) for it in items]
    lines.append(f"# {len(paths)} path(s){', capped' if truncated else ''}")
    _emit(args, {"paths": items, "truncated": truncated}, "\n".join(lines) + "\n")
    return EXIT_OK


def _hops(nodes, types):
    yield nodes[0]
    for t, n in zip(types, nodes[1:]):
        yield f"-[{t}]->"
        yield n


def cmd_eval(args) -> int:
    metrics = _split(args.metrics, METRICS, "metric")
    strategies = _split(args.strategies, STRATEGY_NAMES, "strategy")
    base = _config(args, metric=metrics[0])
    configs = {m: _config(args, metric=m) for m in metrics}
    datasets = _datasets(args.dataset)
    threads = args.threads or default_threads()
    graph = _load(args)
    cache = ArrayCache(args.cache_dir)
    t0 = time.perf_counter()
    if args.relevant:
        paths = PathIndex(graph)
        rows = []
        for d in datasets:
            for m in metrics:
                scorer = Scorer(graph, configs[m], paths=paths, cache=cache)
                results = score_pairs(scorer, [(a, b) for a, b, _ in d.pairs], threads)
                keep = relevant_pairs(results)
                log.info("%s: %d relevant pairs", d.name, len(keep))
                rows += evaluate(scorer, d, strategies, results=results, subset=keep, label=f"{d.name}:relevant")
    else:
        rows = evaluate_matrix(graph, datasets, metrics, base, strategies=strategies, threads=threads, cache=cache,
                               progress=lambda s: log.info("scoring %s", s))  # fmt: skip
    log.info("evaluated %d rows in %.1fs", len(rows), time.perf_counter() - t0)
    text = report_json(rows) if args.structured else render_report(rows, args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "stats": cmd_stats,
    "ic": cmd_ic,
    "sim": cmd_sim,
    "relatedness": cmd_relatedness,
    "paths": cmd_paths,
    "eval": cmd_eval,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error; report the code rather than exiting
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"polyrel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, NTriplesError, NotFoundError, FileNotFoundError, UnicodeDecodeError) as exc:
        print(f"polyrel: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (GraphInvariantError, AssertionError) as exc:
        print(f"polyrel: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
