"""On-disk sidecar cache for IC and RIC tables.

Entries are ``.npz`` files named by a SHA-256 key over the graph content and
every parameter that affects the arrays, so a hit is bit-identical to a fresh
computation by construction.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from collections.abc import Callable, Mapping
from dataclasses import asdict, is_dataclass
from pathlib import Path

import numpy as np

from .graph import KnowledgeGraph

__all__ = ["graph_fingerprint", "cache_key", "ArrayCache"]

log = logging.getLogger(__name__)


def graph_fingerprint(graph: KnowledgeGraph) -> str:
    """Content hash of the nodes, taxonomy and relation instances; memoized on the graph."""
    cached = getattr(graph, "_fingerprint", None)
    if cached is not None:
        return cached
    h = hashlib.sha256()
    tax = graph.taxonomy
    for i, node in enumerate(tax.ids):
        h.update(node.encode())
        h.update(b"<")
        h.update(",".join(tax.ids[p] for p in tax.parents[i]).encode())
        h.update(b"\n")
    for inst in graph.instances:
        h.update(f"{inst.type}\t{inst.subject}\t{inst.object}\n".encode())
    for name, rt in sorted(graph.relation_types.items()):
        h.update(f"{name}\t{rt.category}\t{rt.frequency}\n".encode())
    digest = h.hexdigest()
    graph._fingerprint = digest  # type: ignore[attr-defined]
    return digest


def _plain(value):
    if is_dataclass(value) and not isinstance(value, type):
        return asdict(value)
    return value


def cache_key(graph: KnowledgeGraph, kind: str, **params) -> str:
    payload = {"graph": graph_fingerprint(graph), "kind": kind, **{k: _plain(v) for k, v in params.items()}}
    blob = json.dumps(payload, sort_keys=True, default=repr).encode()
    return hashlib.sha256(blob).hexdigest()


class ArrayCache:
    """Directory of ``<key>.npz`` files. ``None`` as directory disables caching."""

    def __init__(self, directory: str | os.PathLike | None):
        self.directory = Path(directory) if directory is not None else None
        self.hits = 0
        self.misses = 0

    def path(self, key: str) -> Path | None:
        return None if self.directory is None else self.directory / f"{key}.npz"

    def load(self, key: str) -> dict[str, np.ndarray] | None:
        path = self.path(key)
        if path is None or not path.exists():
            return None
        try:
            with np.load(path, allow_pickle=False) as data:
                return {k: data[k] for k in data.files}
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", path, exc)
            return None

    def store(self, key: str, arrays: Mapping[str, np.ndarray]) -> None:
        path = self.path(key)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        # write-then-rename so concurrent readers never see a partial file
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                np.savez(fh, **arrays)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def get_or_compute(self, key: str, compute: Callable[[], Mapping[str, np.ndarray]]) -> dict[str, np.ndarray]:
        found = self.load(key)
        if found is not None:
            self.hits += 1
            return found
        self.misses += 1
        arrays = {k: np.asarray(v) for k, v in compute().items()}
        self.store(key, arrays)
        return arrays
