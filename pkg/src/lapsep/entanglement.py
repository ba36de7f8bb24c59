"""Separability tests for normalized Laplacians and the verdict ladder."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import DimensionMismatch, NotBipartiteDims
from .graph_core import DensityMatrix, Graph, density_of
from .labeling import (
    Bipartition,
    VertexLabeling,
    apply_labeling,
    as_dims,
    decode,
    partial_transpose_graph,
    partial_transpose_matrix,
    single_factor_splits,
)

PPT_TOL = 1e-10
DEGREE_TOL = 1e-12

ENTANGLED = "Entangled"
SEPARABLE = "Separable"
UNDECIDED = "Undecided"

# Dimensions in which a nonnegative partial transpose implies separability
# for every state, not just Laplacians.
_PPT_EXACT_DIMS = {(2, 2), (2, 3), (3, 2)}


@dataclass(frozen=True)
class DegreeWitness:
    """A vertex whose degree differs between G and its partial transpose graph."""

    vertex: int
    split: Bipartition
    deg_g: float
    deg_pt: float

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "split": self.split.to_json(), "deg_g": self.deg_g, "deg_pt": self.deg_pt}


def degree_criterion(g: Graph, dims: Sequence[int], split: Bipartition) -> DegreeWitness | None:
    """Compare every degree in ``g`` with the same vertex in the partial transpose graph.

    ``g`` must already be in grid order. Returns ``None`` when all degrees
    agree, otherwise the first vertex that disagrees. A disagreement proves
    the normalized Laplacian is entangled across ``split``.
    """
    dims = as_dims(dims, g.n)
    deg = g.degrees()
    deg_pt = partial_transpose_graph(g, dims, split).degrees()
    tol = 0.0 if g.is_unweighted() else DEGREE_TOL
    bad = np.flatnonzero(np.abs(deg - deg_pt) > tol)
    if bad.size == 0:
        return None
    v = int(bad[0])
    return DegreeWitness(v, split, float(deg[v]), float(deg_pt[v]))


def degree_criterion_multipartite(g: Graph, dims: Sequence[int]) -> DegreeWitness | None:
    """Degree criterion over each single-factor-vs-rest split, in factor order."""
    dims = as_dims(dims, g.n)
    for split in single_factor_splits(len(dims)):
        w = degree_criterion(g, dims, split)
        if w is not None:
            return w
    return None


def all_bipartitions(m: int) -> list[Bipartition]:
    """Every split of ``m`` factors, one per unordered pair {S, complement}."""
    out = []
    for size in range(1, m):
        for right in itertools.combinations(range(m), size):
            left = frozenset(range(m)) - set(right)
            if 0 in left:
                out.append(Bipartition(left, frozenset(right)))
    # single-factor splits first so reports line up with the degree criterion
    out.sort(key=lambda s: (min(len(s.left), len(s.right)), sorted(s.right)))
    return out


def ppt_min_eigenvalue(rho: DensityMatrix | np.ndarray, dims: Sequence[int], split: Bipartition) -> float:
    """Smallest eigenvalue of the partial transpose; below ``-1e-10`` means entangled."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho)
    dims = tuple(dims)
    if mat.shape[0] != math.prod(dims):
        raise DimensionMismatch(f"matrix of size {mat.shape[0]} does not match dims {dims}")
    pt = partial_transpose_matrix(mat, dims, split)
    return float(np.linalg.eigvalsh((pt + pt.T) / 2)[0])


def _edge_counts_balanced(adj: np.ndarray, p: int, q: int) -> bool:
    counts = adj.reshape(p, q, p, q).sum(axis=3)  # counts[i, k, j]: edges from (i,k) into row j
    return bool(np.array_equal(counts, counts.transpose(2, 1, 0)))


def edge_count_sufficient(g: Graph, dims: Sequence[int]) -> bool:
    """Row-balance condition that implies separability in ``C^p1 x C^p2``.

    For every pair of rows ``i != j`` and column ``k``, the number of edges
    from ``(i, k)`` into row ``j`` must equal the number from ``(j, k)`` into
    row ``i``. ``g`` must be unweighted and in grid order.
    """
    dims = tuple(dims)
    if len(dims) != 2:
        raise NotBipartiteDims(f"edge-count test needs exactly two factors, got {dims}")
    dims = as_dims(dims, g.n)
    if not g.is_unweighted():
        raise ValueError("edge-count test is defined for unweighted graphs only")
    return _edge_counts_balanced(g.adj, *dims)


def _swap_factors(g: Graph, dims: tuple[int, int]) -> Graph:
    p, q = dims
    order = np.arange(p * q).reshape(p, q).T.reshape(-1)
    return g.permuted(order)


@dataclass
class Verdict:
    status: str
    witness: DegreeWitness | None = None
    ppt: dict | None = None
    rule: str | None = None
    certificate: Any = None
    labeling: VertexLabeling | None = None
    tests: list[dict] = field(default_factory=list)
    disagreement: bool = False

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.status}
        if self.witness is not None:
            w = self.witness.to_json()
            if self.labeling is not None:
                # report the vertex of the input graph, not its grid cell
                cell = self.witness.vertex
                w["vertex"] = int(self.labeling.order()[cell])
                w["multi_index"] = list(decode(cell, self.labeling.dims))
            out["witness"] = w
        if self.ppt is not None:
            out["ppt"] = self.ppt
        if self.rule is not None:
            out["rule"] = self.rule
        if self.labeling is not None:
            out["labeling"] = self.labeling.to_json()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        out["tests"] = self.tests
        if self.disagreement:
            out["disagreement"] = True
        return out


def verdict(g: Graph, dims: Sequence[int], labeling: VertexLabeling | None = None) -> Verdict:
    """Run the decision ladder on ``g`` under ``labeling`` (identity if omitted).

    Order: degree criterion on every single-factor split, PPT on every split,
    the edge-count sufficiency test for two factors, and PPT sufficiency in
    ``C^2 x C^q``. Anything left over is Undecided.
    """
    dims = as_dims(dims, g.n)
    if labeling is None:
        labeling = VertexLabeling.identity(dims)
    elif labeling.dims != dims:
        raise DimensionMismatch(f"labeling dims {labeling.dims} differ from {dims}")
    h = apply_labeling(g, labeling)
    rho = density_of(h)
    tests: list[dict] = []

    witness = None
    for split in single_factor_splits(len(dims)):
        w = degree_criterion(h, dims, split)
        tests.append({"name": "degree", "split": str(split), "outcome": "pass" if w is None else "fail"})
        if w is not None:
            witness = w
            break

    ppt_fail = None
    for split in all_bipartitions(len(dims)):
        lam = ppt_min_eigenvalue(rho, dims, split)
        negative = lam < -PPT_TOL
        tests.append({"name": "ppt", "split": str(split), "min_eigenvalue": lam,
                      "outcome": "fail" if negative else "pass"})
        if negative:
            ppt_fail = {"split": split.to_json(), "min_eigenvalue": lam}
            break

    if witness is not None or ppt_fail is not None:
        # the two tests are expected to agree; flag it when they do not
        return Verdict(ENTANGLED, witness=witness, ppt=ppt_fail, labeling=labeling, tests=tests,
                       rule="degree" if witness is not None else "ppt",
                       disagreement=(witness is None) != (ppt_fail is None))

    if len(dims) == 2:
        if h.is_unweighted():
            holds = edge_count_sufficient(h, dims) or edge_count_sufficient(_swap_factors(h, dims), dims[::-1])
            tests.append({"name": "edge_count", "outcome": "holds" if holds else "fails"})
            if holds:
                return Verdict(SEPARABLE, rule="edge_count", labeling=labeling, tests=tests)
        if dims in _PPT_EXACT_DIMS or (2 in dims and h.is_unweighted()):
            return Verdict(SEPARABLE, rule="ppt_2xq", labeling=labeling, tests=tests)

    return Verdict(UNDECIDED, labeling=labeling, tests=tests)
