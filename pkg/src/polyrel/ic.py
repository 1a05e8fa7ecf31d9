"""Intrinsic information-content metrics computed from taxonomy structure alone.

Every metric returns a dense array aligned with :attr:`Taxonomy.ids`, so a
whole graph is scored in one pass and later lookups are array reads.
Natural logarithms throughout.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .graph import Taxonomy

__all__ = ["METRICS", "IcParams", "ic_table", "ic", "minmax"]

METRICS = ("seco", "zhou", "sebti", "meng", "sanchez", "cai", "zhang")


@dataclass(frozen=True)
class IcParams:
    """Metric constants.

    zhou_k
        Weight of the hyponym term in Zhou's metric.
    leaf_counts_self
        Whether a leaf is its own leaf in Sánchez's ``leaves(c)``.
    zhang_sign
        Sign of the sibling term in Zhang's metric. ``+1`` keeps the metric in
        ``[0, 1]``; ``-1`` is the formula as typeset, which dips below zero
        for leaves.
    """

    zhou_k: float = 0.5
    leaf_counts_self: bool = True
    zhang_sign: int = 1

    def __post_init__(self):
        if not 0.0 <= self.zhou_k <= 1.0:
            raise ValueError("zhou_k must lie in [0, 1]")
        if self.zhang_sign not in (1, -1):
            raise ValueError("zhang_sign must be +1 or -1")


def _safe_ratio(num: np.ndarray, den: float) -> np.ndarray:
    # a one-node taxonomy has log(max)=0; every ratio collapses to 0 there
    return num / den if den > 0 else np.zeros_like(num, dtype=float)


def _seco(tax: Taxonomy) -> np.ndarray:
    return 1.0 - _safe_ratio(np.log(tax.hypo_array + 1.0), np.log(tax.max_wn()))


def _depth_term(tax: Taxonomy) -> np.ndarray:
    return _safe_ratio(np.log(tax.depth_array.astype(float)), np.log(tax.max_depth()))


def _sebti(tax: Taxonomy) -> np.ndarray:
    log_children = np.log(np.maximum(tax.children_array, 1).astype(float))
    out = np.empty(len(tax))
    for i in range(len(tax)):
        anc = tax.subsumer_indices(i)
        out[i] = sum(log_children[a] for a in anc if a != i)
    return out


def _meng(tax: Taxonomy) -> np.ndarray:
    spread = 1.0 - _safe_ratio(np.log(tax.hypo_inv_depth_array + 1.0), np.log(tax.max_wn()))
    return _depth_term(tax) * spread


def _sanchez(tax: Taxonomy, leaf_counts_self: bool) -> np.ndarray:
    leaves = tax.leaves_array.astype(float)
    if not leaf_counts_self:
        leaves = leaves - tax.is_leaf_array
    ratio = leaves / tax.subsumer_count_array + 1.0
    return -np.log(ratio / (tax.max_leaves() + 1.0))


def _zhang(tax: Taxonomy, sign: int) -> np.ndarray:
    n = len(tax)
    hypo = tax.hypo_array.astype(float)
    hyper = tax.subsumer_count_array - 1.0
    with np.errstate(invalid="ignore", divide="ignore"):
        k = np.where(hyper + hypo > 0, hypo / (hyper + hypo), 1.0)
    inv_children = 1.0 / np.maximum(tax.children_array, 1)
    # product of 1/branching over every subsumer of a node, itself included
    chain = np.empty(n)
    for i in range(n):
        chain[i] = float(np.prod([inv_children[a] for a in tax.subsumer_indices(i)]))
    sib = np.zeros(n)
    for i in range(n):
        ps = tax.parents[i]
        if ps:
            sib[i] = np.mean([np.log(chain[p] + 1.0) for p in ps])
    return k * _seco(tax) + sign * (1.0 - k) * sib


_memo: weakref.WeakKeyDictionary[Taxonomy, dict] = weakref.WeakKeyDictionary()


def ic_table(tax: Taxonomy, metric: str, params: IcParams | None = None) -> np.ndarray:
    """IC of every node of ``tax`` under ``metric``, aligned with ``tax.ids``.

    Tables are memoized per taxonomy and returned read-only.
    """
    p = params or IcParams()
    per_tax = _memo.setdefault(tax, {})
    key = (metric, p)
    if key not in per_tax:
        table = np.asarray(_compute(tax, metric, p), dtype=float)
        table.setflags(write=False)
        per_tax[key] = table
    return per_tax[key]


def _compute(tax: Taxonomy, metric: str, p: IcParams) -> np.ndarray:
    if metric == "seco":
        return _seco(tax)
    if metric == "zhou":
        return p.zhou_k * _seco(tax) + (1.0 - p.zhou_k) * _depth_term(tax)
    if metric == "sebti":
        return _sebti(tax)
    if metric == "meng":
        return _meng(tax)
    if metric == "sanchez":
        return _sanchez(tax, p.leaf_counts_self)
    if metric == "cai":
        return _seco(tax) * np.tanh(tax.depth_array.astype(float))
    if metric == "zhang":
        return _zhang(tax, p.zhang_sign)
    raise ValueError(f"unknown IC metric {metric!r}; choose from {', '.join(METRICS)}")


def ic(metric: str, node: str, tax: Taxonomy, params: IcParams | None = None) -> float:
    """IC of a single node. Prefer :func:`ic_table` when scoring many nodes."""
    i = tax.index(node)
    return float(ic_table(tax, metric, params)[i])


def minmax(values: np.ndarray) -> np.ndarray:
    """Rescale to ``[0, 1]``; a constant array maps to zeros."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return values
    lo, hi = float(values.min()), float(values.max())
    if hi - lo <= 0:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)
