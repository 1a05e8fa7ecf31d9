"""Relational similarity from non-taxonomic edges (scalar, type-vector and instance-set SemIC).

A word's relational profile gathers every non-taxonomic instance incident to
its senses and their synsets. Three strategies compare two profiles; their
result is blended with taxonomic similarity by the prevalence mass of the
relation types both words share.
"""

from __future__ import annotations

import math
from collections.abc import Collection, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .graph import KnowledgeGraph
from .ric import RicTable
from .taxsim import SimParams, similarity_from_ic

__all__ = [
    "STRATEGIES",
    "Profile",
    "profile",
    "node_profile",
    "semic_s1",
    "mse",
    "rel_sim_s1",
    "rel_sim_s2",
    "rel_type_sim",
    "rel_sim_s3",
    "common_types",
    "alpha1",
    "combine_semsim",
]

STRATEGIES = ("s1", "s2", "s3", "s4")


@dataclass(frozen=True)
class Profile:
    """Non-taxonomic view of a set of nodes.

    ``by_type`` maps a type code to the RICs of the incident instances of
    that type, sorted descending.
    """

    instances: tuple[int, ...]
    weighted_sum: float
    by_type: dict[int, tuple[float, ...]] = field(default_factory=dict)
    n_types: int = 0

    @property
    def types(self) -> frozenset[int]:
        return frozenset(self.by_type)

    @property
    def semic(self) -> float:
        return math.log(self.weighted_sum + 1.0)

    def vector(self) -> np.ndarray:
        v = np.zeros(self.n_types)
        for t, rics in self.by_type.items():
            v[t] = sum(rics) / len(rics)
        return v


def _build(graph: KnowledgeGraph, table: RicTable, nodes: Iterable[str], exclude: Collection[int]) -> Profile:
    idx = [k for k in graph.incident(nodes) if table.type_code[k] >= 0 and int(table.type_code[k]) not in exclude]
    by_type: dict[int, list[float]] = {}
    total = 0.0
    for k in idx:
        by_type.setdefault(int(table.type_code[k]), []).append(float(table.ric[k]))
        total += float(table.weighted[k])
    return Profile(
        tuple(idx),
        total,
        {t: tuple(sorted(v, reverse=True)) for t, v in sorted(by_type.items())},
        len(table.types),
    )


def profile(graph: KnowledgeGraph, table: RicTable, word: str, exclude: Collection[int] = ()) -> Profile:
    """Profile of a word: its senses and their synsets together.

    ``exclude`` lists type codes (indices into ``table.types``) to leave out.
    """
    return _build(graph, table, graph.senses_of(word), exclude)


def node_profile(graph: KnowledgeGraph, table: RicTable, synset: str, exclude: Collection[int] = ()) -> Profile:
    """Profile of a concept: the synset and its member senses."""
    return _build(graph, table, [synset, *graph.members(synset)], exclude)


def semic_s1(p: Profile) -> float:
    return p.semic


def rel_sim_s1(
    measure: str,
    pa: Profile,
    pb: Profile,
    p_lcs: Profile,
    *,
    same: bool = False,
    path_len: int | None = None,
    max_depth: int | None = None,
    depth_a: int | None = None,
    depth_b: int | None = None,
    depth_lcs: int | None = None,
    params: SimParams | None = None,
) -> float:
    """Similarity formula evaluated on SemIC instead of IC.

    The LCS is the taxonomic one; its SemIC is capped at the smaller endpoint
    SemIC so ratio measures stay within range. Two zero SemICs give 0.
    """
    a, b = pa.semic, pb.semic
    if a == 0.0 and b == 0.0:
        return 0.0
    lcs = b if same else min(p_lcs.semic, a, b)
    return similarity_from_ic(
        measure,
        a,
        b,
        lcs,
        same=same,
        path_len=path_len,
        max_depth=max_depth,
        depth_a=depth_a,
        depth_b=depth_b,
        depth_lcs=depth_lcs,
        params=params,
    )


def mse(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"vectors differ in length: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.mean((a - b) ** 2))


def rel_sim_s2(pa: Profile, pb: Profile) -> float:
    return 1.0 - mse(pa.vector(), pb.vector())


def _padded(x: Sequence[float], n: int) -> list[float]:
    return list(x) + [0.0] * (n - len(x))


def rel_type_sim(rics_a: Sequence[float], rics_b: Sequence[float]) -> float:
    """1 - MSE of two descending RIC lists, the shorter zero-padded."""
    a = sorted(rics_a, reverse=True)
    b = sorted(rics_b, reverse=True)
    n = max(len(a), len(b))
    return 1.0 - mse(_padded(a, n), _padded(b, n))


def common_types(pa: Profile, pb: Profile) -> list[int]:
    return sorted(pa.types & pb.types)


def rel_sim_s3(pa: Profile, pb: Profile, prevalence: np.ndarray) -> float | None:
    """Prevalence-weighted mean of per-type similarities; ``None`` without a common type."""
    common = common_types(pa, pb)
    if not common:
        return None
    weights = np.array([prevalence[t] for t in common])
    sims = np.array([rel_type_sim(pa.by_type[t], pb.by_type[t]) for t in common])
    total = float(weights.sum())
    if total <= 0:
        return float(sims.mean())
    return float((weights * sims).sum() / total)


def alpha1(pa: Profile, pb: Profile, prevalence: np.ndarray) -> float:
    """Prevalence mass of the shared relation types, clamped to 1."""
    return min(1.0, float(sum(prevalence[t] for t in common_types(pa, pb))))


def combine_semsim(tax_sim: float, rel_sim: float | None, a1: float) -> float:
    """``(1 - a1) * tax_sim + a1 * rel_sim``; a missing relational signal leaves ``tax_sim``."""
    if rel_sim is None or a1 <= 0.0:
        return tax_sim
    return (1.0 - a1) * tax_sim + a1 * rel_sim
