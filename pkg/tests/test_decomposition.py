import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lapsep.decomposition import (
    SeparableCertificate,
    certificate_checks,
    joint_decompose,
    kron_separable_certificate,
    verify_certificate,
)
from lapsep.entanglement import ppt_min_eigenvalue
from lapsep.errors import NegativeWeight, NotDiagonallyDominant, ZeroTrace
from lapsep.graph_core import complete_graph, density_of, normalize_density, path_graph
from lapsep.labeling import Bipartition

from conftest import random_graph


def random_rdd(rng, n):
    A = rng.normal(size=(n, n))
    A = (A + A.T) / 2
    if rng.random() < 0.5:
        A = np.abs(A)
        np.fill_diagonal(A, 0)
    d = np.abs(A).sum(axis=1) - np.abs(np.diag(A)) + np.diag(A) + rng.uniform(0, 1, n)
    return d, A


def test_diagonal_only():
    dec = joint_decompose(np.diag([3.0, 5.0]), np.zeros((2, 2)))
    np.testing.assert_allclose(dec.rebuild_D(), np.diag([3.0, 5.0]), atol=1e-12)
    np.testing.assert_allclose(dec.rebuild_A(), 0, atol=1e-12)
    assert np.all(dec.mu >= dec.lam - 1e-12)


def test_k2_eigenpairs():
    # [DERIVED] 2x2 oracle: eigenvalues +-1 with vectors (1, +-1)/sqrt(2), mu = r_1 = 1
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    dec = joint_decompose(np.eye(2), A)
    eig = sorted(zip(dec.lam[:2], dec.mu[:2]))
    assert eig == pytest.approx([(-1.0, 1.0), (1.0, 1.0)])
    v = dec.vectors[np.argmax(dec.lam[:2])]
    assert abs(v @ np.array([1, 1]) / math.sqrt(2)) == pytest.approx(1.0)


@pytest.mark.parametrize("method", ["eigen", "edge"])
@pytest.mark.parametrize("pivot", ["max", "first"])
def test_random_rdd_pairs_reconstruct(method, pivot, rng):
    for _ in range(100):
        n = int(rng.integers(1, 9))
        d, A = random_rdd(rng, n)
        if method == "edge":
            # the edge route needs D_ii >= sum_j |A_ij|, diagonal included
            d = d + 2 * np.abs(np.diag(A))
        dec = joint_decompose(d, A, method=method, pivot=pivot)
        assert np.max(np.abs(dec.rebuild_D() - np.diag(d))) < 1e-10
        assert np.max(np.abs(dec.rebuild_A() - A)) < 1e-10
        assert np.all(dec.mu >= dec.lam - 1e-12)
        if method == "edge":
            assert np.all(dec.mu >= np.abs(dec.lam) - 1e-12)


def test_gershgorin_and_adjacency_bound(rng):
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(2, 9)))
        A = g.adj
        dec = joint_decompose(g.degrees(), A, pivot="max")
        n = g.n
        r = dec.pivot
        assert np.all(dec.lam[:n] <= r + 1e-10)
        assert np.all(dec.lam[:n] >= -r - 1e-10)


def test_not_dominant_rejected():
    with pytest.raises(NotDiagonallyDominant):
        joint_decompose(np.array([0.5, 1.0]), np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_additivity(rng):
    for _ in range(30):
        n = int(rng.integers(2, 7))
        pairs = [random_rdd(rng, n) for _ in range(3)]
        d = sum(p[0] for p in pairs)
        A = sum(p[1] for p in pairs)
        dec = joint_decompose(d, A)
        assert np.max(np.abs(dec.rebuild_A() - A)) < 1e-10


def test_single_factor_certificate():
    g = path_graph(4)
    cert = kron_separable_certificate([[(g.degrees(), g.adj)]])
    assert cert.weights.min() >= -1e-12
    assert verify_certificate(cert, density_of(g)) < 1e-10


def test_k4_as_strong_product_of_k2():
    # L(K_4) = sum over R1, R2, R4 of kron(r(F1), r(F2)) - kron(F1, F2)
    K2, I2 = complete_graph(2).adj, np.eye(2)
    terms = [[(F1.sum(1), F1), (F2.sum(1), F2)] for F1, F2 in ((K2, K2), (K2, I2), (I2, K2))]
    cert = kron_separable_certificate(terms)
    target = (4 * np.eye(4) - np.ones((4, 4))) / 12
    assert verify_certificate(cert, target) < 1e-10
    assert certificate_checks(cert, target)["ok"]


def test_eigen_route_can_fail_on_irregular_factors():
    # P3 x P3 tensor term: the eigen route yields a negative weight, the edge route does not
    P = path_graph(3).adj
    terms = [[(P.sum(1), P), (P.sum(1), P)]]
    with pytest.raises(NegativeWeight):
        kron_separable_certificate(terms, method="eigen")
    cert = kron_separable_certificate(terms, method="auto")
    assert cert.meta["decomposition"] == ["edge"]
    assert cert.weights.min() >= 0


def test_zero_trace():
    with pytest.raises(ZeroTrace):
        kron_separable_certificate([[(np.zeros(2), np.zeros((2, 2))), (np.zeros(2), np.zeros((2, 2)))]])
    with pytest.raises(ZeroTrace):
        kron_separable_certificate([])


def test_hand_built_identity_certificate():
    e = np.eye(2)
    cert = SeparableCertificate((2, 2), np.full(4, 0.25), [e[[0, 0, 1, 1]], e[[0, 1, 0, 1]]])
    assert verify_certificate(cert, np.eye(4) / 4) < 1e-12


def test_perturbed_weight_residual():
    K2 = complete_graph(2).adj
    cert = kron_separable_certificate([[(K2.sum(1), K2), (np.ones(2), np.eye(2))]])
    target = cert.matrix()
    bumped = SeparableCertificate(cert.dims, cert.weights.copy(), cert.factors)
    bumped.weights[0] += 1e-3
    psi = cert.product_vectors()[0]
    assert verify_certificate(bumped, target) == pytest.approx(1e-3 * np.max(np.abs(np.outer(psi, psi))), rel=1e-6)


def test_certificate_json_roundtrip():
    K2 = complete_graph(2).adj
    cert = kron_separable_certificate([[(K2.sum(1), K2), (K2.sum(1), K2)]])
    data = cert.to_json(cert.matrix())
    assert data["residual"] < 1e-14
    back = SeparableCertificate.from_json(data)
    np.testing.assert_allclose(back.matrix(), cert.matrix(), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_kron_weights_nonnegative_for_graph_factors(n1, n2, seed):
    rng = np.random.default_rng(seed)
    g, h = random_graph(rng, n1), random_graph(rng, n2)
    if g.is_trivial() or h.is_trivial():
        return
    cert = kron_separable_certificate([[(g.degrees(), g.adj), (h.degrees(), h.adj)]])
    assert cert.weights.min() >= -1e-12
    rho = cert.matrix()
    # a valid certificate is PPT
    assert ppt_min_eigenvalue(rho, (n1, n2), Bipartition(frozenset({0}), frozenset({1}))) > -1e-10
    target = np.kron(np.diag(g.degrees()), np.diag(h.degrees())) - np.kron(g.adj, h.adj)
    assert verify_certificate(cert, normalize_density(target)) < 1e-10
