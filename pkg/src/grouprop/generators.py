"""Benchmark graphs with planted groups, plus random null models.

Planted benchmarks are block models: every pair of nodes is linked
independently with a probability fixed by the pair of groups it joins.
"Structure" block pairs (inside a community, across a bipartite or
tripartite module configuration) carry the planted links; the mixing
parameter ``mu`` moves that fraction of the expected links to the
remaining pairs while leaving the expected total unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, Partition, load_edge_list, load_partition, partition_from_tokens


@dataclass(frozen=True)
class PlantedGraph:
    graph: Graph
    truth: Partition
    spec: dict = field(default_factory=dict)


def _check_mu(mu):
    if not 0.0 <= mu <= 1.0:
        raise ValueError("mu must lie in [0, 1]")


def block_model(sizes, probs, rng) -> tuple[Graph, np.ndarray]:
    """Sample a graph where nodes of groups ``a`` and ``b`` link with ``probs[a][b]``."""
    sizes = np.asarray(sizes, dtype=np.int64)
    probs = np.asarray(probs, dtype=np.float64)
    n = int(sizes.sum())
    groups = np.repeat(np.arange(len(sizes)), sizes)
    iu, ju = np.triu_indices(n, k=1)
    pr = probs[groups[iu], groups[ju]]
    hit = rng.random(len(iu)) < pr
    return Graph.from_edges(n, np.column_stack([iu[hit], ju[hit]])), groups


def _planted(name, sizes, probs, mu, seed, **extra) -> PlantedGraph:
    rng = np.random.default_rng(seed)
    g, groups = block_model(sizes, probs, rng)
    spec = {"generator": name, "mu": mu, "seed": seed, "sizes": list(map(int, sizes))}
    spec.update(extra)
    return PlantedGraph(g, Partition(groups.tolist()), spec)


def gn_benchmark(mu: float, seed=None) -> PlantedGraph:
    """Four groups of 32 with expected degree 16, a fraction ``mu`` of it external."""
    _check_mu(mu)
    p_in = 16 * (1 - mu) / 31
    p_out = 16 * mu / 96
    probs = np.full((4, 4), p_out)
    np.fill_diagonal(probs, p_in)
    return _planted("gn", [32] * 4, probs, mu, seed)


def gn2_benchmark(mu: float, seed=None) -> PlantedGraph:
    """Two communities of 32 and two modules of 32 wired as a bipartite pair.

    Groups 0 and 1 are communities, groups 2 and 3 the modules. External
    probabilities are set so every node has expected external degree
    ``16 mu``: module nodes have 31 internal candidate pairs instead of
    32 pairs in the other community.
    """
    _check_mu(mu)
    ext = 16 * mu / 96
    probs = np.full((4, 4), ext)
    probs[0, 0] = probs[1, 1] = 16 * (1 - mu) / 31
    probs[2, 3] = probs[3, 2] = 16 * (1 - mu) / 32
    probs[2, 2] = probs[3, 3] = (16 * mu - 64 * ext) / 31
    return _planted("gn2", [32] * 4, probs, mu, seed)


def configured_benchmark(name, communities, module_sets, target_m, mu, seed=None) -> PlantedGraph:
    """Block model with communities and multipartite module configurations.

    ``module_sets`` lists tuples of module sizes; members of one tuple link
    only across each other. Planted and noise probabilities are uniform and
    chosen so that the expected number of links is ``target_m`` for every
    ``mu``.
    """
    _check_mu(mu)
    sizes = list(communities) + [s for tup in module_sets for s in tup]
    k = len(sizes)
    structure = np.zeros((k, k), dtype=bool)
    for c in range(len(communities)):
        structure[c, c] = True
    start = len(communities)
    for tup in module_sets:
        ids = range(start, start + len(tup))
        for a in ids:
            for b in ids:
                if a != b:
                    structure[a, b] = True
        start += len(tup)
    s = np.asarray(sizes, dtype=np.float64)
    pairs = np.outer(s, s)
    np.fill_diagonal(pairs, s * (s - 1) / 2 * 2)
    n_struct = pairs[structure].sum() / 2
    n_other = pairs[~structure].sum() / 2
    p_in = target_m * (1 - mu) / n_struct
    p_out = target_m * mu / n_other
    if p_in > 1 or p_out > 1:
        raise ValueError("target link count unreachable with these group sizes")
    probs = np.where(structure, p_in, p_out)
    return _planted(name, sizes, probs, mu, seed, communities=list(communities),
                    modules=[list(t) for t in module_sets], target_m=target_m)


SBV_COMMUNITIES = (22, 26, 30)
SBV_MODULES = ((7, 10), (8, 9))
SBX_COMMUNITIES = (12, 16, 20)
SBX_MODULES = ((16, 22, 26),)


def sbv_benchmark(mu: float, seed=None, communities=SBV_COMMUNITIES, modules=SBV_MODULES) -> PlantedGraph:
    """Three communities and two bipartite module pairs, 112 nodes, about 936 links."""
    return configured_benchmark("sbv", communities, modules, 936, mu, seed)


def sbx_benchmark(mu: float, seed=None, communities=SBX_COMMUNITIES, modules=SBX_MODULES) -> PlantedGraph:
    """Three communities and one tripartite module triple, 112 nodes, about 1448 links."""
    return configured_benchmark("sbx", communities, modules, 1448, mu, seed)


def er_graph(n: int, mean_degree: float, seed=None) -> Graph:
    """Erdos-Renyi G(n, p) with ``p = mean_degree / (n - 1)``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 < mean_degree <= n - 1:
        raise ValueError("mean_degree must lie in (0, n - 1]")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    p = mean_degree / (n - 1)
    want = int(rng.binomial(total, p))
    if want == total:
        iu, ju = np.triu_indices(n, k=1)
        return Graph.from_edges(n, np.column_stack([iu, ju]))
    # uniform subset of `want` distinct pairs, equivalent to G(n, p) given the count
    keys = np.empty(0, dtype=np.int64)
    while len(keys) < want:
        extra = int((want - len(keys)) * 1.1) + 16
        u = rng.integers(0, n, extra)
        v = rng.integers(0, n, extra)
        ok = u != v
        lo, hi = np.minimum(u[ok], v[ok]), np.maximum(u[ok], v[ok])
        fresh = lo * n + hi
        keys = np.concatenate([keys, fresh])
        _, first = np.unique(keys, return_index=True)
        keys = keys[np.sort(first)]
    keys = keys[:want]
    return Graph.from_edges(n, np.column_stack([keys // n, keys % n]))


def forest_fire(n: int, p_forward: float = 0.35, seed=None) -> Graph:
    """Undirected forest-fire growth with forward burning only.

    Each new node links to a uniformly chosen ambassador and then, from
    every burned node, to a geometric number (mean ``p/(1-p)``) of its
    not yet burned neighbors.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 < p_forward < 1:
        raise ValueError("p_forward must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    adj: list[list[int]] = [[] for _ in range(n)]
    edges = []
    for v in range(1, n):
        amb = int(rng.integers(v))
        burned = {amb}
        frontier = [amb]
        while frontier:
            w = frontier.pop()
            edges.append((v, w))
            x = int(rng.geometric(1 - p_forward)) - 1
            if x == 0:
                continue
            cand = [u for u in adj[w] if u not in burned]
            if not cand:
                continue
            if x < len(cand):
                cand = [cand[c] for c in rng.choice(len(cand), x, replace=False)]
            for u in cand:
                burned.add(u)
                frontier.append(u)
        for w in burned:
            adj[w].append(v)
            adj[v].append(w)
    return Graph.from_edges(n, edges)


def load_planted(edge_file, truth_file) -> PlantedGraph:
    g = load_edge_list(edge_file)
    nodes, labels = load_partition(truth_file)
    return PlantedGraph(g, partition_from_tokens(g, nodes, labels), {"generator": "file"})
