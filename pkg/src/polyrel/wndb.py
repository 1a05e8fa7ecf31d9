"""Convert Princeton WordNet database files (``data.*``/``index.*``) to N-Triples.

The output follows the lemon layout of the WordNet RDF dumps: lexical
entries carry the written form, senses point at their synset, and every
pointer becomes one triple in the ``wn:`` ontology namespace. Lexical
pointers (antonymy, derivation) link senses; semantic pointers link synsets.

Usage::

    python -m polyrel.wndb /path/to/dict out.nt.gz
"""

from __future__ import annotations

import argparse
import gzip
import sys
from collections.abc import Iterator
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import quote

WN = "http://wordnet-rdf.princeton.edu/ontology#"
ONTOLEX = "http://www.w3.org/ns/lemon/ontolex#"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"

POINTERS = {
    "!": "antonym",
    "@": "hypernym",
    "@i": "instance_hypernym",
    "~": "hyponym",
    "~i": "instance_hyponym",
    "#m": "holo_member",
    "#s": "holo_substance",
    "#p": "holo_part",
    "%m": "mero_member",
    "%s": "mero_substance",
    "%p": "mero_part",
    "=": "attribute",
    "+": "derivation",
    ";c": "domain_topic",
    "-c": "domain_member_topic",
    ";r": "domain_region",
    "-r": "domain_member_region",
    ";u": "exemplifies",
    "-u": "is_exemplified_by",
    "*": "entails",
    ">": "causes",
    "^": "also",
    "$": "verb_group",
    "&": "similar",
    "<": "participle",
    "\\": "pertainym",
}
POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
POS_NAMES = {"n": "noun", "v": "verb", "a": "adjective", "s": "adjective_satellite", "r": "adverb"}


@dataclass
class Synset:
    offset: str
    pos: str
    words: list[str]
    gloss: str
    pointers: list[tuple[str, str, str, int, int]] = field(default_factory=list)

    @property
    def key(self) -> tuple[str, str]:
        # satellites share the adjective offset space
        return self.offset, "a" if self.pos == "s" else self.pos


def _clean_word(word: str) -> str:
    # adjective syntactic markers: "(a)", "(p)", "(ip)"
    if word.endswith(")") and "(" in word:
        word = word[: word.rindex("(")]
    return word


def parse_data_file(path: Path) -> Iterator[Synset]:
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            if line.startswith("  "):
                continue
            head, _, gloss = line.partition(" | ")
            f = head.split()
            offset, pos = f[0], f[2]
            n_words = int(f[3], 16)
            words = [_clean_word(f[4 + 2 * i]) for i in range(n_words)]
            i = 4 + 2 * n_words
            n_ptr = int(f[i])
            i += 1
            syn = Synset(offset, pos, words, gloss.strip())
            for _ in range(n_ptr):
                sym, target, tpos, st = f[i : i + 4]
                i += 4
                syn.pointers.append((sym, target, tpos, int(st[:2], 16), int(st[2:], 16)))
            yield syn


def parse_index_file(path: Path) -> dict[tuple[str, str], int]:
    """Map ``(lemma, offset)`` to the 1-based sense number of the lemma."""
    numbers: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            if line.startswith("  "):
                continue
            f = line.split()
            lemma = f[0]
            p_cnt = int(f[3])
            sense_cnt = int(f[2])
            offsets = f[4 + p_cnt + 2 :]
            for k, off in enumerate(offsets[:sense_cnt], start=1):
                numbers[(lemma, off)] = k
    return numbers


def _iri_part(text: str) -> str:
    return quote(text, safe="'.-_()!,:;=+*$&@~/")


def _lit(text: str) -> str:
    esc = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r")
    return f'"{esc}"@eng'


class Converter:
    def __init__(self, dict_dir: Path, base: str = "http://wordnet-rdf.princeton.edu/wn30/"):
        self.dict_dir = Path(dict_dir)
        self.base = base
        self.synsets: dict[tuple[str, str], Synset] = {}
        self.sense_numbers: dict[str, dict[tuple[str, str], int]] = {}

    def load(self, pos_letters: str = "nvar") -> None:
        for p in pos_letters:
            name = POS_FILES[p]
            data = self.dict_dir / f"data.{name}"
            if not data.exists():
                continue
            for syn in parse_data_file(data):
                self.synsets[syn.key] = syn
            self.sense_numbers[p] = parse_index_file(self.dict_dir / f"index.{name}")

    def synset_iri(self, syn: Synset) -> str:
        return f"<{self.base}{syn.offset}-{syn.pos}>"

    def _index_pos(self, syn: Synset) -> str:
        return "a" if syn.pos == "s" else syn.pos

    def sense_iri(self, syn: Synset, word_no: int) -> str:
        lemma = syn.words[word_no - 1].lower()
        p = self._index_pos(syn)
        k = self.sense_numbers.get(p, {}).get((lemma, syn.offset))
        if k is None:
            # lemma missing from the index; fall back to the offset so the IRI stays unique
            return f"<{self.base}{_iri_part(lemma)}-{p}#{syn.offset}>"
        return f"<{self.base}{_iri_part(lemma)}-{p}#{k}>"

    def entry_iri(self, syn: Synset, word_no: int) -> str:
        lemma = syn.words[word_no - 1].lower()
        return f"<{self.base}{_iri_part(lemma)}-{self._index_pos(syn)}>"

    def triples(self) -> Iterator[str]:
        seen_entries: set[str] = set()
        for syn in self.synsets.values():
            s = self.synset_iri(syn)
            yield f"{s} <{RDF_TYPE}> <{ONTOLEX}LexicalConcept> ."
            yield f"{s} <{WN}part_of_speech> <{WN}{POS_NAMES[syn.pos]}> ."
            yield f"{s} <{WN}gloss> {_lit(syn.gloss)} ."
            for w in range(1, len(syn.words) + 1):
                sense = self.sense_iri(syn, w)
                entry = self.entry_iri(syn, w)
                if entry not in seen_entries:
                    seen_entries.add(entry)
                    yield f"{entry} <{RDF_TYPE}> <{ONTOLEX}LexicalEntry> ."
                    yield f"{entry} <{RDFS_LABEL}> {_lit(syn.words[w - 1].lower().replace('_', ' '))} ."
                yield f"{entry} <{ONTOLEX}sense> {sense} ."
                yield f"{sense} <{RDF_TYPE}> <{ONTOLEX}LexicalSense> ."
                yield f"{sense} <{ONTOLEX}isLexicalizedSenseOf> {s} ."
            for sym, target, tpos, src, dst in syn.pointers:
                rel = POINTERS.get(sym)
                tkey = (target, "a" if tpos == "s" else tpos)
                other = self.synsets.get(tkey)
                if rel is None or other is None:
                    continue
                if src == 0 and dst == 0:
                    yield f"{s} <{WN}{rel}> {self.synset_iri(other)} ."
                else:
                    yield f"{self.sense_iri(syn, src)} <{WN}{rel}> {self.sense_iri(other, dst)} ."


def convert(dict_dir: str | Path, out: str | Path, pos_letters: str = "nvar") -> int:
    """Write the N-Triples rendering of a WordNet ``dict`` directory; return the triple count."""
    conv = Converter(Path(dict_dir))
    conv.load(pos_letters)
    out = Path(out)
    opener = gzip.open if out.suffix == ".gz" else open
    n = 0
    with opener(out, "wt", encoding="utf-8") as fh:  # type: ignore[operator]
        for line in conv.triples():
            fh.write(line)
            fh.write("\n")
            n += 1
    return n


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="python -m polyrel.wndb", description=__doc__.splitlines()[0])
    parser.add_argument("dict_dir", type=Path)
    parser.add_argument("output", type=Path)
    parser.add_argument("--pos", default="nvar", help="parts of speech to emit (default: nvar)")
    args = parser.parse_args(argv)
    n = convert(args.dict_dir, args.output, args.pos)
    print(f"wrote {n} triples to {args.output}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
