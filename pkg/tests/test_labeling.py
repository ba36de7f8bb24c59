import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lapsep.errors import DimensionMismatch, OutOfRange
from lapsep.graph_core import Graph, path_graph, star_graph
from lapsep.labeling import (
    Bipartition,
    VertexLabeling,
    all_labelings,
    apply_labeling,
    as_dims,
    count_reduced_labelings,
    decode,
    encode,
    factor_grid,
    grid_symmetries,
    partial_transpose_graph,
    partial_transpose_matrix,
    random_labeling,
    reduced_labelings,
    single_factor_splits,
)

from conftest import random_graph

SPLIT_12 = Bipartition(frozenset({0}), frozenset({1}))


def test_decode_is_row_major_and_one_based():
    assert decode(0, (2, 3)) == (1, 1)
    assert decode(1, (2, 3)) == (1, 2)
    assert decode(3, (2, 3)) == (2, 1)
    assert decode(5, (2, 2, 2)) == (2, 1, 2)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2), (2, 2, 2), (3, 3), (2, 4)])
def test_encode_decode_roundtrip(dims):
    n = math.prod(dims)
    assert [encode(decode(k, dims), dims) for k in range(n)] == list(range(n))


def test_encode_decode_errors():
    with pytest.raises(OutOfRange):
        decode(6, (2, 3))
    with pytest.raises(OutOfRange):
        encode((3, 1), (2, 3))
    with pytest.raises(OutOfRange):
        encode((1,), (2, 3))


def test_as_dims_checks():
    with pytest.raises(DimensionMismatch):
        as_dims((6,))
    with pytest.raises(DimensionMismatch):
        as_dims((1, 6))
    with pytest.raises(DimensionMismatch):
        as_dims((2, 3), 8)


def test_labeling_must_be_bijection():
    with pytest.raises(DimensionMismatch):
        VertexLabeling((2, 2), (0, 1, 1, 3))


def test_labeling_json_roundtrip():
    lab = VertexLabeling((2, 3), (5, 0, 3, 1, 2, 4))
    data = lab.to_json()
    assert data["labeling"][0] == [2, 3]
    assert VertexLabeling.from_json(json.dumps(data)) == lab


def test_order_inverts_cells():
    lab = VertexLabeling((2, 2), (2, 0, 3, 1))
    assert lab.order().tolist() == [1, 3, 0, 2]
    assert VertexLabeling.from_order((2, 2), lab.order()) == lab


def test_apply_labeling_matches_permutation_matrix():
    rng = np.random.default_rng(3)
    g = random_graph(rng, 6)
    lab = random_labeling((2, 3), rng)
    P = np.zeros((6, 6))
    P[list(lab.cells), range(6)] = 1  # P e_v = e_{cell(v)}
    np.testing.assert_array_equal(apply_labeling(g, lab).adj, P @ g.adj @ P.T)


def test_apply_labeling_dims_mismatch():
    with pytest.raises(DimensionMismatch):
        apply_labeling(path_graph(4), VertexLabeling.identity((2, 2)), dims=(4, 1))


def _pt_by_edges(g, dims, split):
    # oracle: move every edge {(u,v),(w,y)} to {(u,y),(w,v)} on the right factors
    n = g.n
    out = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            if g.adj[a, b]:
                ia, ib = list(decode(a, dims)), list(decode(b, dims))
                for f in split.right:
                    ia[f], ib[f] = ib[f], ia[f]
                out[encode(ia, dims), encode(ib, dims)] = g.adj[a, b]
    return out


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([(2, 2), (2, 3), (3, 2), (2, 2, 2), (3, 3)]), st.integers(0, 2**32 - 1), st.booleans())
def test_pt_graph_matches_edge_oracle(dims, seed, weighted):
    g = random_graph(np.random.default_rng(seed), math.prod(dims), 0.5, weighted)
    for split in single_factor_splits(len(dims)):
        np.testing.assert_array_equal(partial_transpose_graph(g, dims, split).adj, _pt_by_edges(g, dims, split))


def test_pt_matrix_on_kron():
    rng = np.random.default_rng(0)
    A, B = rng.random((2, 2)), rng.random((3, 3))
    np.testing.assert_allclose(partial_transpose_matrix(np.kron(A, B), (2, 3), SPLIT_12), np.kron(A, B.T))
    left = Bipartition(frozenset({1}), frozenset({0}))
    np.testing.assert_allclose(partial_transpose_matrix(np.kron(A, B), (2, 3), left), np.kron(A.T, B))


def test_pt_is_involution():
    rng = np.random.default_rng(1)
    M = rng.random((8, 8))
    split = Bipartition(frozenset({0, 2}), frozenset({1}))
    twice = partial_transpose_matrix(partial_transpose_matrix(M, (2, 2, 2), split), (2, 2, 2), split)
    np.testing.assert_array_equal(twice, M)


def test_bipartition_str_and_check():
    assert str(SPLIT_12) == "{1}|{2}"
    with pytest.raises(DimensionMismatch):
        SPLIT_12.check(3)
    with pytest.raises(ValueError):
        Bipartition(frozenset(), frozenset({0}))


def test_grid_symmetries_group_size():
    assert len(grid_symmetries((2, 2))) == 2 * 2 * 2
    assert len(grid_symmetries((2, 3))) == 2 * 6
    assert len(grid_symmetries((2, 2, 2))) == 6 * 8
    assert len(grid_symmetries((3, 3))) == 2 * 36


@pytest.mark.parametrize("dims,expected", [((2, 2), 3), ((2, 3), 60), ((3, 2), 60), ((2, 4), 840),
                                            ((2, 2, 2), 840), ((3, 3), 5040)])
def test_reduced_labeling_counts(dims, expected):
    # expected = n! / |group|; the action on labelings is free
    assert count_reduced_labelings(dims) == expected
    if math.prod(dims) <= 8:
        assert sum(1 for _ in reduced_labelings(dims)) == expected


@pytest.mark.parametrize("dims", [(2, 2), (2, 3)])
def test_reduced_labelings_are_orbit_minima(dims):
    # oracle: brute-force orbit minimum of every labeling
    group = grid_symmetries(dims)
    minima = set()
    for lab in all_labelings(dims):
        cells = np.array(lab.cells)
        minima.add(min(tuple(row[cells]) for row in group))
    assert {lab.cells for lab in reduced_labelings(dims)} == minima


def test_symmetric_labelings_give_isomorphic_pt_degrees():
    # grid symmetries preserve the degree criterion outcome
    g = star_graph(6)
    base = random_labeling((2, 3), np.random.default_rng(5))
    for row in grid_symmetries((2, 3))[:6]:
        lab = VertexLabeling((2, 3), tuple(row[list(base.cells)]))
        h = apply_labeling(g, lab)
        pt = partial_transpose_graph(h, (2, 3), SPLIT_12)
        h0 = apply_labeling(g, base)
        pt0 = partial_transpose_graph(h0, (2, 3), SPLIT_12)
        assert sorted(pt.degrees() - h.degrees()) == sorted(pt0.degrees() - h0.degrees())


def test_factor_grid():
    assert factor_grid((2, 3), 0).tolist() == [[0, 1, 2], [3, 4, 5]]
    assert factor_grid((2, 3), 1).tolist() == [[0, 3], [1, 4], [2, 5]]
    grid = factor_grid((2, 2, 2), 1)
    assert sorted(grid.ravel().tolist()) == list(range(8))
    assert all(decode(c, (2, 2, 2))[1] == 2 for c in grid[1])


def test_all_labelings_count():
    assert sum(1 for _ in all_labelings((2, 2))) == 24
    assert len(set(itertools.islice((l.cells for l in all_labelings((2, 3))), 100))) == 100
