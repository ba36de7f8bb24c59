import math

import numpy as np
import pytest

from lapsep.constructions import (
    bipartite_entangling_labeling,
    bipartite_separable_labeling,
    entangling_labeling_general,
    entangling_labeling_max_degree,
    entangling_labeling_min_degree,
    find_entangling_labeling,
)
from lapsep.entanglement import SEPARABLE, degree_criterion, degree_criterion_multipartite, edge_count_sufficient, verdict
from lapsep.errors import CompleteGraph, NotBipartiteDims, PreconditionUnmet, TrivialGraph
from lapsep.graph_core import Graph, complement, complete_bipartite, complete_graph, cycle_graph, empty_graph, star_graph
from lapsep.labeling import apply_labeling, decode, single_factor_splits

from conftest import graph_with_max_degree, graph_with_min_degree


def _entangled(g, dims, lab, i=None):
    h = apply_labeling(g, lab)
    if i is None:
        return degree_criterion_multipartite(h, dims) is not None
    return degree_criterion(h, dims, single_factor_splits(len(dims))[i]) is not None


def test_min_degree_star_leaf():
    g = star_graph(6)
    lab = entangling_labeling_min_degree(g, (2, 3), 0)
    assert _entangled(g, (2, 3), lab, 0)


def test_min_degree_single_edge():
    g = Graph.from_edges(6, [(2, 4)])
    lab = entangling_labeling_min_degree(g, (2, 3), 0)
    assert _entangled(g, (2, 3), lab)


def test_min_degree_places_w_and_neighbours_on_first_row():
    g = star_graph(6)  # leaf 1 has degree 1
    lab = entangling_labeling_min_degree(g, (2, 3), 0)
    w = int(lab.order()[0])
    assert g.degrees()[w] == 1
    nbr = int(np.flatnonzero(g.adj[w])[0])
    assert decode(lab.cells[nbr], (2, 3)) == (1, 2)


def test_min_degree_bound_and_errors():
    with pytest.raises(PreconditionUnmet):
        entangling_labeling_min_degree(complete_graph(4), (2, 2), 0)
    with pytest.raises(TrivialGraph):
        entangling_labeling_min_degree(empty_graph(6), (2, 3), 0)


def test_general_cycle():
    g = cycle_graph(6)
    assert _entangled(g, (2, 3), entangling_labeling_general(g, (2, 3), 0))


def test_general_complete_rejected():
    with pytest.raises(PreconditionUnmet):
        entangling_labeling_general(complete_graph(9), (3, 3), 0)
    with pytest.raises(PreconditionUnmet):
        entangling_labeling_general(cycle_graph(4), (2, 2), 0)


def test_max_degree_examples():
    g = Graph(complete_graph(6).adj.copy() - np.pad(np.array([[0, 1], [1, 0]]), (0, 4)))
    assert _entangled(g, (2, 3), entangling_labeling_max_degree(g, (2, 3), 0))
    k33 = complete_bipartite(3, 3)
    assert _entangled(k33, (2, 3), entangling_labeling_max_degree(k33, (2, 3), 0))
    with pytest.raises(CompleteGraph):
        entangling_labeling_max_degree(complete_graph(6), (2, 3), 0)


@pytest.mark.parametrize("dims", [(2, 3), (3, 2), (2, 4), (2, 2, 2), (3, 3)])
def test_min_degree_property(dims, rng):
    n = math.prod(dims)
    for i, p in enumerate(dims):
        q = n // p
        for _ in range(30):
            g = graph_with_min_degree(rng, n, int(rng.integers(0, q - 1)))
            assert _entangled(g, dims, entangling_labeling_min_degree(g, dims, i), i)


@pytest.mark.parametrize("dims", [(2, 3), (2, 4), (2, 2, 2), (3, 3)])
def test_general_property(dims, rng):
    n = math.prod(dims)
    for i, p in enumerate(dims):
        bound = p + n // p - 2
        for _ in range(30):
            g = graph_with_min_degree(rng, n, int(rng.integers(0, bound)))
            assert _entangled(g, dims, entangling_labeling_general(g, dims, i), i)


@pytest.mark.parametrize("dims", [(2, 3), (2, 4), (2, 2, 2), (3, 3)])
def test_max_degree_property(dims, rng):
    n = math.prod(dims)
    for i, p in enumerate(dims):
        low = n - p - n // p + 1
        for _ in range(30):
            g = graph_with_max_degree(rng, n, int(rng.integers(low + 1, n)))
            assert _entangled(g, dims, entangling_labeling_max_degree(g, dims, i), i)


@pytest.mark.parametrize("dims", [(2, 3), (2, 4), (2, 2, 2)])
def test_every_noncomplete_graph_covered_with_factor_two(dims, rng):
    # min degree <= n/2 - 1 or max degree >= n/2 always holds for noncomplete graphs
    n = math.prod(dims)
    for _ in range(100):
        g = graph_with_min_degree(rng, n, int(rng.integers(0, n - 1)))
        if g.is_complete():
            continue
        found = find_entangling_labeling(g, dims)
        assert found is not None
        assert _entangled(g, dims, found[0])


def test_find_returns_none_for_complete_and_trivial():
    assert find_entangling_labeling(complete_graph(6), (2, 3)) is None
    assert find_entangling_labeling(empty_graph(6), (2, 3)) is None


@pytest.mark.parametrize("r,dims", [(2, (2, 3)), (3, (2, 4)), (1, (2, 3)), (2, (2, 4)), (3, (3, 3)), (4, (3, 3)),
                                    (2, (3, 2)), (3, (4, 2))])
def test_bipartite_entangling(r, dims):
    n = math.prod(dims)
    lab = bipartite_entangling_labeling(r, dims)
    assert _entangled(complete_bipartite(r, n - r), dims, lab)


def test_bipartite_r_greater_than_p1_degree_bound():
    # r=3, dims (2,4): the first row vertex has degree n-r in G but at least n-p1 in G^pT
    lab = bipartite_entangling_labeling(3, (2, 4))
    h = apply_labeling(complete_bipartite(3, 5), lab)
    w = degree_criterion(h, (2, 4), single_factor_splits(2)[0])
    assert w is not None


def test_bipartite_entangling_errors():
    with pytest.raises(PreconditionUnmet):
        bipartite_entangling_labeling(1, (2, 2))
    with pytest.raises(NotBipartiteDims):
        bipartite_entangling_labeling(1, (2, 2, 2))


@pytest.mark.parametrize("r,dims", [(3, (2, 3)), (2, (2, 2)), (4, (2, 4)), (3, (3, 3)), (6, (3, 3))])
def test_bipartite_separable(r, dims):
    n = math.prod(dims)
    g = complete_bipartite(r, n - r)
    lab = bipartite_separable_labeling(r, dims)
    h = apply_labeling(g, lab)
    assert edge_count_sufficient(h, dims)
    assert verdict(g, dims, lab).status == SEPARABLE


def test_bipartite_separable_needs_multiple():
    with pytest.raises(PreconditionUnmet):
        bipartite_separable_labeling(2, (2, 3))


def test_complement_labeling_shared():
    g = graph_with_max_degree(np.random.default_rng(9), 9, 8)
    lab = entangling_labeling_max_degree(g, (3, 3), 0)
    assert _entangled(complement(g), (3, 3), lab, 0)
