"""Standard and degree-corrected clustering coefficients."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, links_among_neighbors, triangle_counts


@dataclass(frozen=True)
class ClusteringProfile:
    """Per-node and network clustering of a graph.

    Attributes
    ----------
    c, d : numpy.ndarray
        Standard and degree-corrected node clustering.
    C, D : float
        Network means of ``c`` and ``d``.
    r : float
        Expected clustering of a random graph with the same degree sequence.
    """

    c: np.ndarray
    d: np.ndarray
    C: float
    D: float
    r: float


def max_neighbor_links(g: Graph) -> np.ndarray:
    """Largest number of links the neighborhood of each node could hold.

    A neighbor ``j`` of ``i`` has ``k_j - 1`` stubs left after the link to
    ``i`` and can use at most ``k_i - 1`` of them inside the neighborhood.
    """
    deg = g.degrees
    rows = np.repeat(np.arange(g.n), deg)
    caps = np.minimum(deg[g.indices] - 1, deg[rows] - 1)
    return np.bincount(rows, weights=caps, minlength=g.n).astype(np.int64) // 2


def node_clustering(g: Graph, i: int) -> float:
    k = g.degree(i)
    if k < 2:
        return 0.0
    return links_among_neighbors(g, i) / (k * (k - 1) / 2)


def degree_corrected_clustering(g: Graph, i: int) -> float:
    deg = g.degrees
    nb = g.neighbors(i)
    cap = int(np.minimum(deg[nb] - 1, deg[i] - 1).sum()) // 2
    if cap == 0:
        return 0.0
    return links_among_neighbors(g, i) / cap


def random_expectation(g: Graph) -> float:
    """Clustering expected in a random graph with ``g``'s degree sequence."""
    if g.m == 0:
        raise ValueError("graph has no links")
    k = g.degrees.astype(np.float64)
    n = g.n
    mean_k = k.mean()
    return float((np.sum(k * k) - mean_k * n) ** 2 / (mean_k**3 * n**3))


def network_profile(g: Graph) -> ClusteringProfile:
    if g.m == 0:
        raise ValueError("graph has no links")
    t = triangle_counts(g).astype(np.float64)
    k = g.degrees.astype(np.float64)
    pairs = k * (k - 1) / 2
    c = np.divide(t, pairs, out=np.zeros(g.n), where=pairs > 0)
    cap = max_neighbor_links(g).astype(np.float64)
    d = np.divide(t, cap, out=np.zeros(g.n), where=cap > 0)
    return ClusteringProfile(c, d, float(c.mean()), float(d.mean()), random_expectation(g))
