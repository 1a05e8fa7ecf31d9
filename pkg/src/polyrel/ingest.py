"""Build a :class:`KnowledgeGraph` from N-Triples and load gold-standard word-pair files."""

from __future__ import annotations

import csv
import io
import json
import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import IO

from .graph import (
    AUXILIARY,
    CATEGORIES,
    ENTRY,
    IGNORE,
    NON_TAXONOMIC,
    SENSE,
    STRUCTURAL,
    SYNSET,
    TAXONOMIC,
    UNDIRECTED_TYPE,
    KnowledgeGraph,
    Node,
    NotFoundError,
    RelationInstance,
    RelationType,
    normalize_word,
)
from .ntriples import Literal, NTriplesError, read_triples

__all__ = [
    "DataError",
    "DatasetError",
    "UnmappedPredicateError",
    "MappingRow",
    "PredicateMapping",
    "GraphStats",
    "GoldDataset",
    "load_graph",
    "derive_synonym_edges",
    "graph_stats",
    "load_dataset",
    "builtin_dataset",
    "BUILTIN_DATASETS",
    "POS_ALIASES",
]

log = logging.getLogger(__name__)

# structural roles understood by the loader
MEMBER = "synset_member"
ENTRY_SENSE = "entry_sense"
LABEL = "label"
POS = "part_of_speech"
SUB_PROPERTY = "sub_property_of"
DOMAIN = "domain"
RANGE = "range"

POS_ALIASES = {
    "n": "noun",
    "noun": "noun",
    "v": "verb",
    "verb": "verb",
    "a": "adjective",
    "adjective": "adjective",
    "s": "adjective_satellite",
    "adjective_satellite": "adjective_satellite",
    "r": "adverb",
    "adverb": "adverb",
}


class DataError(ValueError):
    """Input data that cannot be turned into a graph or dataset."""


class UnmappedPredicateError(DataError):
    def __init__(self, iri: str, lineno: int):
        self.iri = iri
        self.lineno = lineno
        super().__init__(f"line {lineno}: predicate {iri} is not in the mapping (strict mode)")


class DatasetError(DataError):
    def __init__(self, index: int, reason: str, source: str = ""):
        self.index = index
        where = f"{source}: " if source else ""
        super().__init__(f"{where}row {index}: {reason}")


@dataclass(frozen=True, slots=True)
class MappingRow:
    iri: str
    name: str
    category: str
    inverse: str | None = None
    direction: str | None = None


class PredicateMapping:
    """Predicate IRI to canonical relation type, loaded from a TSV file.

    Columns are ``IRI, type, category`` with optional ``inverse`` and
    ``direction`` (``up``/``down``, taxonomic rows only). Several IRIs may
    map to the same canonical type. Non-taxonomic rows keep file order,
    which fixes the slot order of the type-averaged RIC vectors.
    """

    def __init__(self, rows: Iterable[MappingRow]):
        self.rows: list[MappingRow] = list(rows)
        self._by_iri: dict[str, MappingRow] = {}
        self._types: dict[str, MappingRow] = {}
        for row in self.rows:
            if row.category not in CATEGORIES:
                raise DataError(f"mapping: unknown category {row.category!r} for {row.iri}")
            if row.direction not in (None, "up", "down"):
                raise DataError(f"mapping: direction must be 'up' or 'down', got {row.direction!r}")
            if row.category == TAXONOMIC and row.direction is None:
                raise DataError(f"mapping: taxonomic type {row.name!r} needs a direction")
            if row.iri in self._by_iri:
                raise DataError(f"mapping: duplicate IRI {row.iri}")
            self._by_iri[row.iri] = row
            prev = self._types.setdefault(row.name, row)
            if prev.category != row.category:
                raise DataError(f"mapping: type {row.name!r} declared with two categories")

    @classmethod
    def from_tsv(cls, source: str | Path | IO[str]) -> PredicateMapping:
        text = source.read() if hasattr(source, "read") else Path(source).read_text(encoding="utf-8")  # type: ignore[union-attr]
        rows = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = [c.strip() for c in line.split("\t")]
            if len(cols) < 3:
                raise DataError(f"mapping line {lineno}: expected at least 3 tab-separated columns")
            cols += [""] * (5 - len(cols))
            iri = cols[0].strip("<>")
            rows.append(MappingRow(iri, cols[1], cols[2], cols[3] or None, cols[4] or None))
        return cls(rows)

    @classmethod
    def default(cls) -> PredicateMapping:
        """The bundled mapping for the WordNet RDF layout."""
        res = resources.files("polyrel").joinpath("data/wordnet_mapping.tsv")
        with res.open("r", encoding="utf-8") as fh:
            return cls.from_tsv(fh)

    def get(self, iri: str) -> MappingRow | None:
        return self._by_iri.get(iri)

    def relation_types(self) -> list[RelationType]:
        """Declared semantic types (taxonomic, non-taxonomic, auxiliary) in file order."""
        out = []
        for name, row in self._types.items():
            if row.category in (TAXONOMIC, NON_TAXONOMIC, AUXILIARY):
                out.append(RelationType(name, row.category, row.inverse, row.direction))
        return out

    def names(self, category: str) -> list[str]:
        return [n for n, r in self._types.items() if r.category == category]

    def has_undirected_synonym(self) -> bool:
        row = self._types.get(UNDIRECTED_TYPE)
        return row is not None and row.category == NON_TAXONOMIC


def derive_synonym_edges(sense_synset: Mapping[str, str]) -> list[RelationInstance]:
    """One undirected synonym instance per unordered pair of senses sharing a synset.

    A synset with ``n`` member senses contributes ``n*(n-1)/2`` edges. The
    subject is the lexicographically smaller sense id.
    """
    members: dict[str, list[str]] = defaultdict(list)
    for sense, syn in sense_synset.items():
        members[syn].append(sense)
    out = []
    for syn in sorted(members):
        for a, b in combinations(sorted(members[syn]), 2):
            out.append(RelationInstance(UNDIRECTED_TYPE, a, b))
    return out


@dataclass
class _Raw:
    senses: dict[str, str] = field(default_factory=dict)  # sense -> synset
    entry_senses: dict[str, list[str]] = field(default_factory=lambda: defaultdict(list))
    labels: dict[str, set[str]] = field(default_factory=lambda: defaultdict(set))
    pos: dict[str, str] = field(default_factory=dict)
    edges: list[tuple[str, str, str]] = field(default_factory=list)  # (type, s, o)
    sub_property: list[tuple[str, str]] = field(default_factory=list)
    domain: dict[str, str] = field(default_factory=dict)
    range: dict[str, str] = field(default_factory=dict)
    triples: int = 0
    retained: int = 0
    ignored: int = 0
    unmapped: Counter[str] = field(default_factory=Counter)


def _local_name(iri: str) -> str:
    for sep in ("#", "/"):
        if sep in iri:
            iri = iri.rsplit(sep, 1)[1]
    return iri


def _parse(source, mapping: PredicateMapping, strict: bool) -> _Raw:
    raw = _Raw()
    for lineno, s, p, o in read_triples(source):
        raw.triples += 1
        row = mapping.get(p)
        if row is None:
            if strict:
                raise UnmappedPredicateError(p, lineno)
            raw.unmapped[p] += 1
            continue
        cat = row.category
        if cat == IGNORE:
            raw.ignored += 1
            continue
        name = row.name
        if cat == STRUCTURAL:
            if name == LABEL:
                if not isinstance(o, Literal):
                    raise NTriplesError(lineno, f"{s} {p} {o}", "label object must be a literal")
                if o.language in (None, "en", "eng") or o.language.startswith("en"):
                    raw.labels[s].add(normalize_word(o.value))
            elif isinstance(o, Literal):
                raise NTriplesError(lineno, f"{s} {p} {o}", f"{name} object must be an IRI")
            elif name == MEMBER:
                prev = raw.senses.setdefault(s, o)
                if prev != o:
                    raise DataError(f"line {lineno}: sense {s} belongs to two synsets")
            elif name == ENTRY_SENSE:
                raw.entry_senses[s].append(o)
            elif name == POS:
                raw.pos[s] = _local_name(o)
            elif name == SUB_PROPERTY:
                raw.sub_property.append((s, o))
            elif name == DOMAIN:
                raw.domain[s] = o
            elif name == RANGE:
                raw.range[s] = o
            raw.retained += 1
            continue
        if isinstance(o, Literal):
            raise NTriplesError(lineno, f"{s} {p} {o}", "relation object must be an IRI")
        raw.edges.append((name, s, o))
        raw.retained += 1
    return raw


def _pos_filter(pos: str | Iterable[str] | None) -> set[str] | None:
    if pos is None:
        return None
    items = [pos] if isinstance(pos, str) else list(pos)
    out = set()
    for item in items:
        if item in ("all", "*"):
            return None
        try:
            out.add(POS_ALIASES[item.lower()])
        except KeyError:
            raise DataError(f"unknown part of speech {item!r}") from None
    return out


def load_graph(
    source: str | Path | IO[bytes] | IO[str],
    mapping: PredicateMapping | None = None,
    pos: str | Iterable[str] | None = "noun",
    *,
    strict: bool = False,
    synonym_count: str = "members",
) -> KnowledgeGraph:
    """Parse N-Triples into a frozen graph restricted to the requested parts of speech.

    Parameters
    ----------
    source
        Path or stream; gzip is detected from the magic bytes.
    mapping
        Predicate mapping, the bundled WordNet one by default.
    pos
        Part-of-speech filter (``"noun"``, ``"n"``, a collection, or ``None``
        for everything). Synsets without a part-of-speech triple are kept.
    strict
        Raise :class:`UnmappedPredicateError` on the first predicate missing
        from the mapping instead of counting it.
    synonym_count
        ``"members"`` counts one synonym instance per synset-membership link
        when computing prevalences; ``"pairs"`` counts the derived pairs.
        Traversal and RIC always use the derived pairs.
    """
    if synonym_count not in ("members", "pairs"):
        raise ValueError("synonym_count must be 'members' or 'pairs'")
    mapping = mapping or PredicateMapping.default()
    keep_pos = _pos_filter(pos)
    raw = _parse(source, mapping, strict)
    types = {t.name: t for t in mapping.relation_types()}

    entries = set(raw.entry_senses)
    senses = set(raw.senses) | {s for ss in raw.entry_senses.values() for s in ss}
    candidates = set(raw.senses.values()) | set(raw.pos)
    for _, s, o in raw.edges:
        for n in (s, o):
            if n not in senses and n not in entries:
                candidates.add(n)

    def pos_ok(n: str) -> bool:
        p = raw.pos.get(n)
        return p is None or keep_pos is None or p in keep_pos

    synsets = {n for n in candidates if pos_ok(n)}
    sense_synset = {s: syn for s, syn in raw.senses.items() if syn in synsets}

    sense_labels: dict[str, set[str]] = defaultdict(set)
    kept_entries = []
    for entry, ss in raw.entry_senses.items():
        kept = [s for s in ss if s in sense_synset]
        if not kept:
            continue
        kept_entries.append(entry)
        for s in kept:
            sense_labels[s] |= raw.labels.get(entry, set())

    nodes = [Node(n, SYNSET, frozenset(raw.labels.get(n, ()))) for n in sorted(synsets)]
    nodes += [Node(s, SENSE, frozenset(sense_labels[s] | raw.labels.get(s, set()))) for s in sorted(sense_synset)]
    nodes += [Node(e, ENTRY, frozenset(raw.labels.get(e, ()))) for e in sorted(kept_entries)]
    present = synsets | sense_synset.keys()

    instances = [RelationInstance(t, s, o) for t, s, o in raw.edges if s in present and o in present]
    overrides: dict[str, int] = {}
    if mapping.has_undirected_synonym():
        instances += derive_synonym_edges(sense_synset)
        if synonym_count == "members":
            overrides[UNDIRECTED_TYPE] = len(sense_synset)
        types.setdefault(UNDIRECTED_TYPE, RelationType(UNDIRECTED_TYPE, NON_TAXONOMIC, UNDIRECTED_TYPE))

    def rel_name(iri: str) -> str:
        row = mapping.get(iri)
        return row.name if row is not None else iri

    relation_parents: dict[str, list[str]] = defaultdict(list)
    for child, parent in raw.sub_property:
        relation_parents[rel_name(child)].append(rel_name(parent))
    graph = KnowledgeGraph(
        nodes,
        types.values(),
        instances,
        sense_synset,
        frequency_overrides=overrides,
        relation_parents=dict(relation_parents),
        relation_domain={rel_name(k): v for k, v in raw.domain.items()},
        relation_range={rel_name(k): v for k, v in raw.range.items()},
        virtual_root="__root__",
    )
    graph.load_info = {
        "triples": raw.triples,
        "retained": raw.retained,
        "ignored": raw.ignored,
        "unmapped": sum(raw.unmapped.values()),
        "unmapped_predicates": dict(sorted(raw.unmapped.items())),
    }
    if raw.unmapped:
        log.warning("dropped %d triples with %d unmapped predicates", sum(raw.unmapped.values()), len(raw.unmapped))
    return graph


@dataclass(frozen=True)
class RelationStat:
    name: str
    category: str
    frequency: int
    prevalence: float


@dataclass(frozen=True)
class GraphStats:
    relations: tuple[RelationStat, ...]
    synsets: int
    senses: int
    entries: int
    instances: int
    max_depth: int
    root: str

    @property
    def lexical_nodes(self) -> int:
        return self.senses + self.entries

    def category(self, category: str) -> list[RelationStat]:
        return [r for r in self.relations if r.category == category]

    def relation(self, name: str) -> RelationStat:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lexical_nodes"] = self.lexical_nodes
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def render(self) -> str:
        """Plain-text frequency/prevalence tables, one block per category."""
        lines = [
            f"synsets\t{self.synsets}",
            f"senses\t{self.senses}",
            f"entries\t{self.entries}",
            f"instance relations\t{self.instances}",
            f"max depth\t{self.max_depth}",
        ]
        for cat in (NON_TAXONOMIC, TAXONOMIC, AUXILIARY):
            rows = self.category(cat)
            if not rows:
                continue
            lines += ["", f"[{cat}]", "relation\tfrequency\tprevalence"]
            for r in rows:
                lines.append(f"{r.name}\t{r.frequency}\t{100 * r.prevalence:.2f}%")
            total = sum(r.frequency for r in rows)
            lines.append(f"total\t{total}\t{100 * sum(r.prevalence for r in rows):.2f}%")
        return "\n".join(lines) + "\n"


def graph_stats(graph: KnowledgeGraph) -> GraphStats:
    rels = tuple(
        RelationStat(t.name, t.category, t.frequency, t.prevalence) for t in graph.relation_types.values()
    )
    return GraphStats(
        relations=rels,
        synsets=len(graph.nodes(SYNSET)),
        senses=len(graph.nodes(SENSE)),
        entries=len(graph.nodes(ENTRY)),
        instances=sum(r.frequency for r in rels),
        max_depth=graph.max_depth(),
        root=graph.taxonomy.root,
    )


@dataclass(frozen=True)
class GoldDataset:
    """Human-scored word pairs. Scores stay in their native range."""

    name: str
    pairs: tuple[tuple[str, str, float], ...]
    score_range: tuple[float, float] | None = None

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def words(self) -> list[tuple[str, str]]:
        return [(a, b) for a, b, _ in self.pairs]

    @property
    def scores(self) -> list[float]:
        return [s for _, _, s in self.pairs]

    def split_known(self, graph: KnowledgeGraph) -> tuple[list[int], list[int]]:
        """Indices of pairs whose two words are in ``graph``, and of the rest."""
        known, unknown = [], []
        for i, (a, b, _) in enumerate(self.pairs):
            (known if graph.has_word(a) and graph.has_word(b) else unknown).append(i)
        return known, unknown


def load_dataset(
    source: str | Path | IO[str],
    name: str | None = None,
    *,
    delimiter: str | None = None,
    columns: Sequence[int] = (0, 1, 2),
    score_range: tuple[float, float] | None = None,
) -> GoldDataset:
    """Read ``word1, word2, score`` rows; ``#`` comments and a header line are skipped.

    The delimiter is sniffed (tab, comma, semicolon or whitespace) unless given.
    """
    if hasattr(source, "read"):
        text = source.read()  # type: ignore[union-attr]
        label = name or getattr(source, "name", "dataset")
    else:
        path = Path(source)
        text = path.read_text(encoding="utf-8-sig")
        label = name or path.stem
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        return GoldDataset(label, (), score_range)
    if delimiter is None:
        first = lines[0]
        delimiter = next((d for d in ("\t", ",", ";") if d in first), None)
    if delimiter is None:
        rows = [ln.split() for ln in lines]
    else:
        rows = list(csv.reader(io.StringIO("\n".join(lines)), delimiter=delimiter))
    ia, ib, isc = columns
    pairs = []
    for k, row in enumerate(rows):
        if len(row) <= max(ia, ib, isc):
            raise DatasetError(k, f"expected at least {max(ia, ib, isc) + 1} columns, got {len(row)}", label)
        a, b, raw_score = normalize_word(row[ia]), normalize_word(row[ib]), row[isc].strip()
        try:
            score = float(raw_score)
        except ValueError:
            if k == 0:
                continue  # header
            raise DatasetError(k, f"score {raw_score!r} is not numeric", label) from None
        if not a or not b:
            raise DatasetError(k, "empty word", label)
        if score_range is not None and not score_range[0] <= score <= score_range[1]:
            raise DatasetError(k, f"score {score} outside {score_range}", label)
        pairs.append((a, b, score))
    return GoldDataset(label, tuple(pairs), score_range)


BUILTIN_DATASETS = ("mc28", "rg65", "wordsim353")


def builtin_dataset(name: str) -> GoldDataset:
    """One of the bundled gold standards (see :data:`BUILTIN_DATASETS`)."""
    if name not in BUILTIN_DATASETS:
        raise NotFoundError(f"no bundled dataset {name!r}; bundled: {', '.join(BUILTIN_DATASETS)}")
    res = resources.files("polyrel").joinpath(f"data/datasets/{name}.tsv")
    with res.open("r", encoding="utf-8") as fh:
        return load_dataset(fh, name)
