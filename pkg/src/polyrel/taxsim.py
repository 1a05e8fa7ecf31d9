"""IC-based taxonomic similarity between concepts and between words."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .graph import KnowledgeGraph, NotFoundError, Taxonomy

__all__ = [
    "MEASURES",
    "DEFAULT_MEASURE",
    "SimParams",
    "similarity_from_ic",
    "tax_sim",
    "word_tax_sim",
    "WordSim",
]

MEASURES = ("resnik", "lin", "jc", "cai1", "cai2", "zhang")

TIE_EPS = 1e-12

# the similarity each IC baseline is reported with
DEFAULT_MEASURE = {
    "seco": "jc",
    "zhou": "jc",
    "sebti": "jc",
    "meng": "jc",
    "sanchez": "jc",
    "cai": "cai1",
    "zhang": "zhang",
}


@dataclass(frozen=True)
class SimParams:
    cai_alpha: float = 0.5
    cai_beta: float = 0.5
    zhang_log_base: float | None = None  # None: natural log
    ic_scale: float = 1.0  # Resnik and JC see ic / ic_scale; set to the max IC to land in [0, 1]

    def __post_init__(self):
        if not self.ic_scale > 0:
            raise ValueError("ic_scale must be positive")


def _ratio(num: float, den: float, same: bool) -> float:
    if den == 0:
        return 1.0 if same else 0.0
    return num / den


def similarity_from_ic(
    measure: str,
    ic_a: float,
    ic_b: float,
    ic_lcs: float,
    *,
    same: bool = False,
    path_len: int | None = None,
    max_depth: int | None = None,
    depth_a: int | None = None,
    depth_b: int | None = None,
    depth_lcs: int | None = None,
    params: SimParams | None = None,
) -> float:
    """Evaluate one similarity formula from precomputed IC values.

    Only the structural inputs a measure needs must be supplied: ``path_len``
    and ``max_depth`` for ``cai1``; the three depths for ``cai2``. ``same``
    resolves the 0/0 cases of the ratio measures (identical concepts score 1,
    anything else 0).
    """
    p = params or SimParams()
    if measure == "resnik":
        return ic_lcs / p.ic_scale
    if measure == "lin":
        return _ratio(2.0 * ic_lcs, ic_a + ic_b, same)
    if measure == "jc":
        return 1.0 - (ic_a + ic_b - 2.0 * ic_lcs) / (2.0 * p.ic_scale)
    spl_w = ic_a + ic_b - 2.0 * ic_lcs
    if measure == "cai1":
        if path_len is None or max_depth is None:
            raise ValueError("cai1 needs path_len and max_depth")
        return math.exp(-(p.cai_alpha * spl_w + p.cai_beta * path_len / (2.0 * max_depth)))
    if measure == "cai2":
        if depth_a is None or depth_b is None or depth_lcs is None:
            raise ValueError("cai2 needs depth_a, depth_b and depth_lcs")
        # min-depth over several parents can put a subsumer deeper than a descendant
        spl_o = max(math.log((depth_a + depth_b + 1.0) / (2.0 * depth_lcs + 1.0)), 0.0)
        return math.exp(-(p.cai_alpha * spl_w + p.cai_beta * spl_o))
    if measure == "zhang":
        # capped so the log argument stays in [1, 2]
        r = min(max(_ratio(2.0 * ic_lcs, ic_a + ic_b, same), 0.0), 1.0)
        arg = 2.0 - r
        lg = math.log(arg) if p.zhang_log_base is None else math.log(arg, p.zhang_log_base)
        return 1.0 - lg
    raise ValueError(f"unknown similarity measure {measure!r}; choose from {', '.join(MEASURES)}")


def _needs_structure(measure: str) -> bool:
    return measure in ("cai1", "cai2")


def concept_similarity(
    measure: str, a: int, b: int, tax: Taxonomy, ic: np.ndarray, params: SimParams | None = None
) -> tuple[float, int]:
    """Similarity of taxonomy indices ``a`` and ``b``; also returns the LCS index."""
    lcs = tax.lcs_index(a, b, ic)
    kw: dict = {}
    if measure == "cai1":
        kw = {"path_len": tax.path_length_index(a, b), "max_depth": tax.max_depth()}
    elif measure == "cai2":
        d = tax.depth_array
        kw = {"depth_a": int(d[a]), "depth_b": int(d[b]), "depth_lcs": int(d[lcs])}
    # a subsumer never says more than what it subsumes; non-monotone metrics (zhang) would break the ratios
    ic_a, ic_b = float(ic[a]), float(ic[b])
    ic_l = min(float(ic[lcs]), ic_a, ic_b)
    value = similarity_from_ic(measure, ic_a, ic_b, ic_l, same=a == b, params=params, **kw)
    return value, lcs


def tax_sim(
    measure: str, node_a: str, node_b: str, tax: Taxonomy, ic: np.ndarray, params: SimParams | None = None
) -> float:
    """Similarity of two taxonomy nodes (synset ids)."""
    return concept_similarity(measure, tax.index(node_a), tax.index(node_b), tax, ic, params)[0]


@dataclass(frozen=True)
class WordSim:
    value: float
    synset_a: str
    synset_b: str
    lcs: str


def word_tax_sim(
    measure: str,
    word_a: str,
    word_b: str,
    graph: KnowledgeGraph,
    ic: np.ndarray,
    params: SimParams | None = None,
) -> WordSim:
    """Best similarity over all synset pairs of two words (max-sense policy).

    Ties keep the first pair in sorted synset order; values within
    ``TIE_EPS`` count as tied so rounding cannot reorder them. Raises
    :class:`NotFoundError` when either word has no synset.
    """
    tax = graph.taxonomy
    sa, sb = graph.synsets_of(word_a), graph.synsets_of(word_b)
    if not sa:
        raise NotFoundError(f"word {word_a!r} is not in the graph")
    if not sb:
        raise NotFoundError(f"word {word_b!r} is not in the graph")
    best: WordSim | None = None
    for x, y in product(sa, sb):
        v, lcs = concept_similarity(measure, tax.index(x), tax.index(y), tax, ic, params)
        if best is None or v > best.value + TIE_EPS:
            best = WordSim(v, x, y, tax.ids[lcs])
    assert best is not None
    return best
