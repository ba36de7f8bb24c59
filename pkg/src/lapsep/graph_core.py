"""Graphs, Laplacians and density-matrix normalization.

Graphs are undirected, loop-free and carry real edge weights in ``[0, 1]``.
Everything is stored densely; the graphs of interest have at most a few
hundred vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    NonBinaryWeights,
    NotDensityMatrix,
    NotDiagonallyDominant,
    OutOfRange,
    ZeroTrace,
)

TRACE_TOL = 1e-12
PSD_TOL = 1e-10
RDD_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph given by a symmetric adjacency matrix."""

    adj: np.ndarray

    def __post_init__(self) -> None:
        adj = _frozen(self.adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] < 1:
            raise ValueError(f"adjacency must be a non-empty square matrix, got shape {adj.shape}")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix is not symmetric")
        if np.any(np.diag(adj) != 0):
            raise ValueError("self-loops are not allowed")
        if np.any(adj < 0) or np.any(adj > 1):
            raise ValueError("edge weights must lie in [0, 1]")
        object.__setattr__(self, "adj", adj)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple]) -> "Graph":
        """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples (0-indexed)."""
        adj = np.zeros((n, n))
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if not (0 <= u < n and 0 <= v < n):
                raise OutOfRange(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u, v] = adj[v, u] = w
        return cls(adj)

    def edges(self) -> list[tuple[int, int, float]]:
        iu, ju = np.triu_indices(self.n, 1)
        mask = self.adj[iu, ju] != 0
        return [(int(i), int(j), float(w)) for i, j, w in zip(iu[mask], ju[mask], self.adj[iu, ju][mask])]

    @property
    def num_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.adj, 1)))

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def is_unweighted(self) -> bool:
        return bool(np.all((self.adj == 0) | (self.adj == 1)))

    def is_trivial(self) -> bool:
        return not np.any(self.adj)

    def is_complete(self) -> bool:
        return bool(np.all(self.adj + np.eye(self.n) == 1))

    def permuted(self, order: np.ndarray) -> "Graph":
        """Graph whose vertex ``k`` is vertex ``order[k]`` of this graph."""
        order = np.asarray(order)
        return Graph(self.adj[np.ix_(order, order)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.adj.shape == other.adj.shape and bool(np.array_equal(self.adj, other.adj))

    def __hash__(self) -> int:
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Real symmetric, positive semidefinite, unit-trace matrix."""

    mat: np.ndarray

    def __post_init__(self) -> None:
        mat = _frozen(self.mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise NotDensityMatrix(f"not a square matrix: shape {mat.shape}")
        if not np.allclose(mat, mat.T, rtol=0, atol=1e-12):
            raise NotDensityMatrix("matrix is not symmetric")
        tr = np.trace(mat)
        if abs(tr - 1) > TRACE_TOL:
            raise NotDensityMatrix(f"trace is {tr!r}, expected 1")
        lam = np.linalg.eigvalsh(mat)[0]
        if lam < -PSD_TOL:
            raise NotDensityMatrix(f"minimum eigenvalue {lam:.3e} is negative")
        object.__setattr__(self, "mat", mat)

    @property
    def n(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True, eq=False)
class GeneralizedLaplacian:
    """``diag(D) - A`` with ``A`` real symmetric and the result row diagonally dominant."""

    D: np.ndarray
    A: np.ndarray

    def __post_init__(self) -> None:
        D = _frozen(self.D).reshape(-1)
        A = _frozen(self.A)
        if A.shape != (D.size, D.size):
            raise ValueError(f"shape mismatch: D has {D.size} entries, A is {A.shape}")
        if not np.array_equal(A, A.T):
            raise ValueError("A must be symmetric")
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "A", A)
        if not is_row_diagonally_dominant(self.matrix):
            raise NotDiagonallyDominant("diag(D) - A is not row diagonally dominant")

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.D) - self.A

    @classmethod
    def of_graph(cls, g: Graph) -> "GeneralizedLaplacian":
        return cls(g.degrees(), g.adj)


def is_row_diagonally_dominant(m: np.ndarray, tol: float = RDD_TOL) -> bool:
    m = np.asarray(m)
    off = np.abs(m).sum(axis=1) - np.abs(np.diag(m))
    return bool(np.all(np.real(np.diag(m)) >= off - tol))


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian ``D - A``."""
    return np.diag(g.degrees()) - g.adj


def normalize_density(m: np.ndarray) -> DensityMatrix:
    """Scale a PSD matrix to unit trace."""
    m = np.asarray(m, dtype=float)
    tr = np.trace(m)
    if tr == 0:
        raise ZeroTrace("matrix has zero trace and cannot be normalized")
    return DensityMatrix(m / tr)


def density_of(g: Graph) -> DensityMatrix:
    return normalize_density(laplacian(g))


def complement(g: Graph) -> Graph:
    if not g.is_unweighted():
        raise NonBinaryWeights("complement is only defined for unweighted graphs")
    return Graph(1 - np.eye(g.n) - g.adj)


def row_sum_diag(m: np.ndarray) -> np.ndarray:
    """Diagonal matrix of the row sums of ``m``."""
    return np.diag(np.asarray(m).sum(axis=1))


def degree(g: Graph, v: int) -> float:
    if not 0 <= v < g.n:
        raise OutOfRange(f"vertex {v} out of range for n={g.n}")
    return float(g.adj[v].sum())


# Standard families. Vertex numbering follows the usual conventions:
# the star centre is vertex 0 and K_{r,s} puts the r-side first.

def complete_graph(n: int) -> Graph:
    return Graph(1 - np.eye(n))


def empty_graph(n: int) -> Graph:
    return Graph(np.zeros((n, n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite(r: int, s: int) -> Graph:
    n = r + s
    adj = np.zeros((n, n))
    adj[:r, r:] = 1
    adj[r:, :r] = 1
    return Graph(adj)


def star_graph(n: int) -> Graph:
    """``K_{1,n-1}`` with the centre at vertex 0."""
    return complete_bipartite(1, n - 1)
