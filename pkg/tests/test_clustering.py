import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, cycle, random_graph
from grouprop.clustering import (
    degree_corrected_clustering,
    max_neighbor_links,
    network_profile,
    node_clustering,
    random_expectation,
)
from grouprop.generators import er_graph
from grouprop.graph import Graph


def test_node_clustering_examples(k4_minus_edge):
    assert node_clustering(complete(3), 0) == 1.0
    star = Graph.from_edges(6, [(0, i) for i in range(1, 6)])
    assert node_clustering(star, 0) == 0.0
    assert node_clustering(k4_minus_edge, 0) == pytest.approx(2 / 3)
    assert node_clustering(star, 1) == 0.0


def test_degree_corrected_examples():
    assert degree_corrected_clustering(complete(3), 0) == 1.0
    star = Graph.from_edges(6, [(0, i) for i in range(1, 6)])
    assert max_neighbor_links(star)[0] == 0
    assert degree_corrected_clustering(star, 0) == 0.0
    # node 0 has degree 2; neighbors 1 and 2 are adjacent and have degree 3
    g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4)])
    assert max_neighbor_links(g)[0] == 1
    assert degree_corrected_clustering(g, 0) == 1.0


def test_max_neighbor_links_by_hand():
    # hub 0 of degree 3 with neighbors of degree 1, 2 and 4
    g = Graph.from_edges(7, [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (4, 6), (4, 3)])
    # floor((min(0,2) + min(1,2) + min(3,2)) / 2) = floor(3 / 2) = 1
    assert max_neighbor_links(g)[0] == 1


def test_regular_graph_expectation():
    # circulant C_100(1, 2) is 4-regular; (k - 1)^2 / (k n) = 9 / 400
    n = 100
    g = Graph.from_edges(n, [(i, (i + s) % n) for i in range(n) for s in (1, 2)])
    assert set(g.degrees) == {4}
    assert random_expectation(g) == pytest.approx(0.0225, rel=1e-12)


def test_complete_and_bipartite_profiles():
    prof = network_profile(complete(4))
    assert prof.C == 1.0 and prof.D == 1.0
    bip = Graph.from_edges(7, [(a, b) for a in range(3) for b in range(3, 7)])
    prof = network_profile(bip)
    assert prof.C == 0.0 and prof.D == 0.0


def test_edgeless_graph_has_no_profile():
    with pytest.raises(ValueError):
        network_profile(Graph.from_edges(3, []))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 60), st.floats(0.05, 0.6), st.integers(0, 10_000))
def test_corrected_coefficient_dominates(n, p, seed):
    g = random_graph(n, p, seed)
    if g.m == 0:
        return
    prof = network_profile(g)
    assert np.all((prof.c >= 0) & (prof.c <= 1))
    assert np.all((prof.d >= 0) & (prof.d <= 1))
    assert np.all(prof.c <= prof.d + 1e-12)
    assert prof.C == pytest.approx(prof.c.mean())
    assert prof.D == pytest.approx(prof.d.mean())
    assert prof.r >= 0


@settings(max_examples=20, deadline=None)
@given(st.integers(5, 40), st.integers(0, 10_000))
def test_expectation_ignores_relabeling(n, seed):
    g = random_graph(n, 0.3, seed)
    if g.m == 0:
        return
    perm = np.random.default_rng(seed).permutation(n)
    h = Graph.from_edges(n, perm[g.edges()])
    assert random_expectation(h) == pytest.approx(random_expectation(g), rel=1e-12)


def test_er_clustering_near_density():
    vals = [network_profile(er_graph(2000, 10, s)).C for s in range(20)]
    assert np.mean(vals) == pytest.approx(10 / 2000, rel=0.25)


def test_cycle_has_zero_clustering():
    prof = network_profile(cycle(7))
    assert prof.C == 0 and prof.D == 0
