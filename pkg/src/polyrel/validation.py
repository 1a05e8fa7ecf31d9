"""Input checks shared by the estimator, the harness and the command line."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence

import numpy as np

from .graph import KnowledgeGraph, normalize_word

__all__ = [
    "check_word_pairs",
    "check_scores",
    "check_fraction",
    "check_positive_int",
    "check_choice",
    "check_graph",
]


def check_word_pairs(X) -> list[tuple[str, str]]:
    """Coerce ``X`` to a list of normalized ``(word_a, word_b)`` tuples.

    Accepts any sequence of 2-sequences or an ``(n, 2)`` array of strings.
    """
    if isinstance(X, np.ndarray):
        if X.ndim != 2 or X.shape[1] != 2:
            raise ValueError(f"expected an (n, 2) array of words, got shape {X.shape}")
        rows: Iterable = X.tolist()
    elif isinstance(X, (str, bytes)):
        raise TypeError("expected a sequence of word pairs, got a single string")
    else:
        rows = X
    out = []
    for i, row in enumerate(rows):
        if isinstance(row, (str, bytes)) or len(row) != 2:
            raise ValueError(f"row {i}: expected two words, got {row!r}")
        a, b = row
        if not isinstance(a, str) or not isinstance(b, str):
            raise TypeError(f"row {i}: words must be strings, got {type(a).__name__}, {type(b).__name__}")
        a, b = normalize_word(a), normalize_word(b)
        if not a or not b:
            raise ValueError(f"row {i}: empty word")
        out.append((a, b))
    return out


def check_scores(y, n: int) -> np.ndarray:
    """1-d finite float array of length ``n``."""
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"expected {n} scores, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("scores must be finite")
    return arr


def check_fraction(name: str, value: float) -> float:
    v = float(value)
    if math.isnan(v) or not 0.0 <= v <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return v


def check_positive_int(name: str, value, *, allow_none: bool = False) -> int | None:
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_choice(name: str, value: str, choices: Sequence[str]) -> str:
    if value not in choices:
        raise ValueError(f"{name} must be one of {', '.join(choices)}; got {value!r}")
    return value


def check_graph(graph) -> KnowledgeGraph:
    if not isinstance(graph, KnowledgeGraph):
        raise TypeError(f"expected a KnowledgeGraph, got {type(graph).__name__}")
    return graph
