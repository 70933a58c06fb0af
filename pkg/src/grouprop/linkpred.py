"""Link prediction from group hierarchies, with two neighborhood baselines."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .graph import Graph
from .hierarchy import GroupHierarchy, HierarchyConfig, hpa, pair_probabilities
from .metrics import auc

SCORERS = ("hpa", "pa", "cn")


@dataclass(frozen=True)
class PredictionSplit:
    reduced: Graph
    positives: np.ndarray
    negatives: np.ndarray


def make_split(g: Graph, fraction: float = 0.05, seed=None) -> PredictionSplit:
    """Remove ``round(fraction * m)`` random links and sample as many non-links."""
    if not 0 < fraction < 1:
        raise ValueError("fraction must lie in (0, 1)")
    if g.m < 20:
        raise ValueError("graph needs at least 20 links")
    rng = np.random.default_rng(seed)
    edges = g.edges()
    k = int(round(fraction * g.m))
    pool = g.n * (g.n - 1) // 2 - g.m
    if pool < k:
        raise ValueError(f"only {pool} non-adjacent pairs, {k} negatives needed")
    chosen = np.sort(rng.choice(len(edges), size=k, replace=False))
    keep = np.ones(len(edges), dtype=bool)
    keep[chosen] = False
    reduced = Graph.from_edges(g.n, edges[keep], names=g.names)
    existing = set((edges[:, 0] * g.n + edges[:, 1]).tolist())
    negatives: list[int] = []
    taken = set()
    while len(negatives) < k:
        u, v = rng.integers(0, g.n, 2)
        if u == v:
            continue
        key = int(min(u, v) * g.n + max(u, v))
        if key in existing or key in taken:
            continue
        taken.add(key)
        negatives.append(key)
    neg = np.array([(x // g.n, x % g.n) for x in negatives], dtype=np.int64).reshape(-1, 2)
    return PredictionSplit(reduced, edges[chosen], neg)


def score_pairs(h: GroupHierarchy, pairs) -> np.ndarray:
    return pair_probabilities(h, pairs)


def baseline_pa(g: Graph, pairs) -> np.ndarray:
    """Degree products."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    deg = g.degrees
    return deg[pairs[:, 0]] * deg[pairs[:, 1]]


def baseline_cn(g: Graph, pairs) -> np.ndarray:
    """Common-neighbor counts."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    a = g.adjacency()
    rows = a[pairs[:, 0]]
    cols = a[pairs[:, 1]]
    return np.asarray(rows.multiply(cols).sum(axis=1)).ravel().astype(np.int64)


def realization(g: Graph, cfg: HierarchyConfig, fraction: float, seed) -> dict:
    """AUC of every scorer on one random split."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    split_seed, hpa_seed = ss.spawn(2)
    split = make_split(g, fraction, split_seed)
    hcfg = replace(cfg, propagation=replace(
        cfg.propagation, seed=int(hpa_seed.generate_state(1, dtype=np.uint32)[0])))
    h = hpa(split.reduced, hcfg)
    scores = {
        "hpa": (score_pairs(h, split.positives), score_pairs(h, split.negatives)),
        "pa": (baseline_pa(split.reduced, split.positives), baseline_pa(split.reduced, split.negatives)),
        "cn": (baseline_cn(split.reduced, split.positives), baseline_cn(split.reduced, split.negatives)),
    }
    return {name: auc(*scores[name]) for name in SCORERS}


def run_experiment(g: Graph, cfg: HierarchyConfig = HierarchyConfig(), realizations: int = 100,
                   fraction: float = 0.05, seed: int = 0):
    """Mean and standard deviation of AUC per scorer over independent splits.

    Returns ``(summary, per_realization)`` where ``summary`` maps each
    scorer to ``(mean, std)``.
    """
    if realizations < 1:
        raise ValueError("realizations must be positive")
    children = np.random.SeedSequence(seed).spawn(realizations)
    rows = [realization(g, cfg, fraction, child) for child in children]
    summary = {}
    for name in SCORERS:
        vals = np.array([r[name] for r in rows])
        summary[name] = (float(vals.mean()), float(vals.std()))
    return summary, rows
