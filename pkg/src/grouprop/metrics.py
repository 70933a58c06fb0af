"""Partition comparison (NMI, NVI, ARI) and ranking quality (AUC)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import comb, xlogy
from scipy.stats import rankdata

from .graph import Partition


@dataclass(frozen=True)
class ContingencyTable:
    counts: sp.coo_matrix
    rows: np.ndarray
    cols: np.ndarray
    n: int


def _codes(x) -> np.ndarray:
    if isinstance(x, Partition):
        return x.codes()
    _, inv = np.unique(np.asarray(x), return_inverse=True)
    return inv.ravel()


def contingency(P, Q) -> ContingencyTable:
    a, b = _codes(P), _codes(Q)
    if len(a) != len(b):
        raise ValueError(f"partitions cover different node sets ({len(a)} vs {len(b)} nodes)")
    if len(a) == 0:
        raise ValueError("empty partitions")
    table = sp.coo_matrix(
        (np.ones(len(a), dtype=np.int64), (a, b)), shape=(a.max() + 1, b.max() + 1)
    )
    table.sum_duplicates()
    rows = np.bincount(a).astype(np.int64)
    cols = np.bincount(b).astype(np.int64)
    return ContingencyTable(table, rows, cols, len(a))


def _entropy(counts, n) -> float:
    return float(-np.sum(xlogy(counts, counts / n)) / n)


def _mutual_info(t: ContingencyTable) -> float:
    c = t.counts
    nab = c.data.astype(np.float64)
    expected = t.rows[c.row].astype(np.float64) * t.cols[c.col] / t.n
    return float(np.sum(nab * np.log(nab / expected)) / t.n)


def nmi(P, Q) -> float:
    """Normalized mutual information ``2 I / (H_P + H_Q)``."""
    t = contingency(P, Q)
    hp, hq = _entropy(t.rows, t.n), _entropy(t.cols, t.n)
    if hp == 0.0 and hq == 0.0:
        return 1.0
    if hp == 0.0 or hq == 0.0:
        return 0.0
    return float(min(1.0, max(0.0, 2.0 * _mutual_info(t) / (hp + hq))))


def nvi(P, Q) -> float:
    """Variation of information divided by ``ln n``."""
    t = contingency(P, Q)
    if t.n < 2:
        raise ValueError("need at least two nodes")
    hp, hq = _entropy(t.rows, t.n), _entropy(t.cols, t.n)
    vi = hp + hq - 2.0 * _mutual_info(t)
    return float(max(0.0, vi) / np.log(t.n))


def ari(P, Q) -> float:
    """Hubert-Arabie adjusted Rand index; may be negative."""
    t = contingency(P, Q)
    pairs = lambda x: comb(x, 2, exact=False)
    index = float(np.sum(pairs(t.counts.data.astype(np.float64))))
    a = float(np.sum(pairs(t.rows.astype(np.float64))))
    b = float(np.sum(pairs(t.cols.astype(np.float64))))
    total = pairs(float(t.n))
    expected = a * b / total if total else 0.0
    top = 0.5 * (a + b)
    if top == expected:
        return 1.0
    return float((index - expected) / (top - expected))


def auc(positive_scores, negative_scores) -> float:
    """Probability that a positive outscores a negative, ties counted half."""
    pos = np.asarray(positive_scores, dtype=np.float64).ravel()
    neg = np.asarray(negative_scores, dtype=np.float64).ravel()
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("need at least one positive and one negative score")
    ranks = rankdata(np.concatenate([pos, neg]))
    u = ranks[: len(pos)].sum() - len(pos) * (len(pos) + 1) / 2.0
    return float(u / (len(pos) * len(neg)))


def auc_pairwise(positive_scores, negative_scores) -> float:
    """Exact pair enumeration; quadratic, for checking :func:`auc`."""
    pos = np.asarray(positive_scores, dtype=np.float64).ravel()
    neg = np.asarray(negative_scores, dtype=np.float64).ravel()
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("need at least one positive and one negative score")
    diff = pos[:, None] - neg[None, :]
    return float(((diff > 0).sum() + 0.5 * (diff == 0).sum()) / diff.size)
