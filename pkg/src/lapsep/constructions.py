"""Labelings that force the degree criterion to fail (or to hold).

Each construction works on a two-group view of the grid: one factor ``i``
against all the others. In that view a cell is a pair ``(v, w)`` and the
partial transpose swaps the ``w`` coordinates across every edge. The
constructions pin down a handful of vertices so that some vertex gains an
extra neighbour in the partial transpose graph; every other vertex is then
placed on the first free cell. All results are checked with
:func:`degree_criterion` before they are returned.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .entanglement import degree_criterion, degree_criterion_multipartite, edge_count_sufficient
from .errors import (
    CompleteGraph,
    ConstructionFailed,
    NonBinaryWeights,
    NotBipartiteDims,
    PreconditionUnmet,
    TrivialGraph,
)
from .graph_core import Graph, complement, complete_bipartite
from .labeling import (
    Bipartition,
    VertexLabeling,
    apply_labeling,
    as_dims,
    factor_grid,
    single_factor_splits,
)


def _coords(dims: tuple[int, ...], factor: int, factor_is_row: bool) -> np.ndarray:
    """Cell table ``cells[v, w]`` for the view factor-vs-rest (or rest-vs-factor)."""
    grid = factor_grid(dims, factor)
    return grid if factor_is_row else grid.T


def _complete(dims: tuple[int, ...], placed: dict[int, int]) -> VertexLabeling:
    n = math.prod(dims)
    free_cells = iter(sorted(set(range(n)) - set(placed.values())))
    cells = [placed[v] if v in placed else next(free_cells) for v in range(n)]
    return VertexLabeling(dims, tuple(cells))


def _split_for(dims: tuple[int, ...], factor: int) -> Bipartition:
    return single_factor_splits(len(dims))[factor]


def _check_entangling(g: Graph, lab: VertexLabeling, factor: int) -> VertexLabeling:
    if degree_criterion(apply_labeling(g, lab), lab.dims, _split_for(lab.dims, factor)) is None:
        raise ConstructionFailed(f"labeling {lab.cells} does not violate the degree criterion")
    return lab


def _require_unweighted(g: Graph) -> None:
    if not g.is_unweighted():
        raise NonBinaryWeights("constructions are defined for unweighted graphs")


def _min_degree_placement(g: Graph, cell: np.ndarray) -> dict[int, int]:
    """Pin a minimum-degree vertex and its neighbourhood along row 0.

    Needs ``min degree < cell.shape[1] - 1``. The minimum-degree vertex
    ``w`` goes to (0, 0), its neighbours to (0, 1..d). One more vertex is
    placed so that ``w`` picks up an extra edge in the partial transpose:

    1. some ``u`` outside the closed neighbourhood has a neighbour ``y``
       also outside it: ``u -> (0, q-1)``, ``y -> (1, 0)``;
    2. otherwise such a ``u`` only touches ``N(w)``: ``u -> (1, 0)``.
    """
    deg = g.degrees()
    w = int(np.argmin(deg))
    nbrs = [int(x) for x in np.flatnonzero(g.adj[w])]
    placed = {w: cell[0, 0]}
    for j, x in enumerate(nbrs, start=1):
        placed[x] = cell[0, j]
    closed = set(placed)
    u = next(x for x in range(g.n) if x not in closed and deg[x] > 0)
    outside = [y for y in np.flatnonzero(g.adj[u]) if y not in closed]
    if outside:
        placed[u] = cell[0, cell.shape[1] - 1]
        placed[int(outside[0])] = cell[1, 0]
    else:
        placed[u] = cell[1, 0]
    return placed


def entangling_labeling_min_degree(g: Graph, dims: Sequence[int], i: int) -> VertexLabeling:
    """Entangling labeling when ``min degree < n / p_i - 1``."""
    dims = as_dims(dims, g.n)
    _require_unweighted(g)
    if g.is_trivial():
        raise TrivialGraph("graph has no edges")
    d = g.degrees().min()
    q = g.n // dims[i]
    if not d < q - 1:
        raise PreconditionUnmet(f"minimum degree {d:g} is not below n/p_i - 1 = {q - 1}")
    placed = _min_degree_placement(g, _coords(dims, i, factor_is_row=True))
    return _check_entangling(g, _complete(dims, placed), i)


def _general_placement(g: Graph, cell: np.ndarray) -> dict[int, int]:
    """Placement for ``q - 1 <= min degree < p + q - 2`` with ``q > 2``.

    ``w`` sits at (0, 0); ``q - 2`` neighbours (set A) fill row 0 and the
    rest (set B) fill column 0 from (1, 0) down. The B-vertex ``b`` at
    (1, 0) has another neighbour ``x``. If ``x`` is in A we are done; if in
    B it is swapped with the first A-vertex; otherwise it goes to
    (0, q - 1). Each case leaves an edge between row 0 and column 0 that
    does not touch ``w``, which becomes an extra partial-transpose edge at ``w``.
    """
    p, q = cell.shape
    deg = g.degrees()
    w = int(np.argmin(deg))
    nbrs = [int(x) for x in np.flatnonzero(g.adj[w])]
    set_a, set_b = nbrs[: q - 2], nbrs[q - 2:]
    placed = {w: cell[0, 0]}
    for j, x in enumerate(set_a, start=1):
        placed[x] = cell[0, j]
    for j, x in enumerate(set_b, start=1):
        placed[x] = cell[j, 0]
    b = set_b[0]
    x = next(int(y) for y in np.flatnonzero(g.adj[b]) if y != w)
    if x in set_b:
        a = set_a[0]
        placed[a], placed[x] = placed[x], placed[a]
    elif x not in set_a:
        placed[x] = cell[0, q - 1]
    return placed


def entangling_labeling_general(g: Graph, dims: Sequence[int], i: int) -> VertexLabeling:
    """Entangling labeling when ``n > 4`` and ``min degree < p_i + n / p_i - 2``."""
    dims = as_dims(dims, g.n)
    _require_unweighted(g)
    if g.is_trivial():
        raise TrivialGraph("graph has no edges")
    n = g.n
    if n <= 4:
        raise PreconditionUnmet("needs more than 4 vertices")
    d = g.degrees().min()
    a, b = dims[i], n // dims[i]
    if not d < a + b - 2:
        raise PreconditionUnmet(f"minimum degree {d:g} is not below p_i + n/p_i - 2 = {a + b - 2}")
    # the factor may play either role; prefer the simpler construction
    if d < b - 1:
        placed = _min_degree_placement(g, _coords(dims, i, factor_is_row=True))
    elif d < a - 1:
        placed = _min_degree_placement(g, _coords(dims, i, factor_is_row=False))
    else:
        placed = _general_placement(g, _coords(dims, i, factor_is_row=b >= a))
    return _check_entangling(g, _complete(dims, placed), i)


def entangling_labeling_max_degree(g: Graph, dims: Sequence[int], i: int) -> VertexLabeling:
    """Entangling labeling from a large maximum degree, built on the complement.

    Uses ``max degree > n - n/p_i`` when it holds, else
    ``max degree > n - p_i - n/p_i + 1`` (needs ``n > 4``). The degree
    criterion fails for a graph exactly when it fails for its complement.
    """
    dims = as_dims(dims, g.n)
    _require_unweighted(g)
    if g.is_complete():
        raise CompleteGraph("graph is complete")
    n = g.n
    top = g.degrees().max()
    gc = complement(g)
    if top > n - n // dims[i]:
        lab = entangling_labeling_min_degree(gc, dims, i)
    elif n > 4 and top > n - dims[i] - n // dims[i] + 1:
        lab = entangling_labeling_general(gc, dims, i)
    else:
        raise PreconditionUnmet(f"maximum degree {top:g} is too small for factor {i + 1}")
    return _check_entangling(g, lab, i)


def find_entangling_labeling(g: Graph, dims: Sequence[int]) -> tuple[VertexLabeling, str] | None:
    """Try every degree-threshold construction on every factor.

    Returns the first labeling found together with the name of the
    construction, or ``None`` when ``g`` escapes all hypotheses.
    """
    dims = as_dims(dims, g.n)
    if g.is_trivial() or g.is_complete():
        return None
    attempts = [
        ("min_degree", entangling_labeling_min_degree),
        ("general", entangling_labeling_general),
        ("max_degree", entangling_labeling_max_degree),
    ]
    for name, build in attempts:
        for i in range(len(dims)):
            try:
                return build(g, dims, i), name
            except PreconditionUnmet:
                continue
    return None


def _bipartite_dims(r: int, dims: Sequence[int]) -> tuple[tuple[int, int], int]:
    dims = tuple(int(p) for p in dims)
    if len(dims) != 2:
        raise NotBipartiteDims(f"expected two factors, got {dims}")
    dims = as_dims(dims)
    n = math.prod(dims)
    if not 0 < r < n:
        raise PreconditionUnmet(f"K_{{{r},{n - r}}} is trivial")
    return dims, n


def bipartite_entangling_labeling(r: int, dims: Sequence[int]) -> VertexLabeling:
    """Labeling under which ``K_{r, n-r}`` (r-side = vertices ``0..r-1``) is entangled."""
    dims, n = _bipartite_dims(r, dims)
    if n <= 4:
        raise PreconditionUnmet("needs more than 4 vertices")
    g = complete_bipartite(r, n - r)
    small = list(range(r)) if r <= n - r else list(range(r, n))
    large = [v for v in range(n) if v not in small]
    row_factor = int(np.argmin(dims))  # rows get the smaller factor
    cell = _coords(dims, row_factor, factor_is_row=True)
    p1, p2 = cell.shape
    s = len(small)
    placed: dict[int, int] = {}
    if s == p1:
        placed[small[0]] = cell[0, 1]
        for j, v in enumerate(small[1:], start=1):
            placed[v] = cell[j, 0]
        placed[large[0]] = cell[0, 0]
        placed[large[1]] = cell[0, 2]
    elif s > p1:
        for j in range(p1):
            placed[small[j]] = cell[j, 0]
        for j in range(1, p2):
            placed[large[j - 1]] = cell[0, j]
    # s < p1: every labeling is entangled
    return _check_entangling(g, _complete(dims, placed), row_factor)


def bipartite_separable_labeling(r: int, dims: Sequence[int]) -> VertexLabeling:
    """Put the r-side of ``K_{r, n-r}`` on ``r / p2`` whole rows; needs ``r % p2 == 0``."""
    dims, n = _bipartite_dims(r, dims)
    p1, p2 = dims
    if r % p2:
        raise PreconditionUnmet(f"r = {r} is not a multiple of p2 = {p2}")
    cell = np.arange(n).reshape(p1, p2)
    placed = {v: int(cell[v // p2, v % p2]) for v in range(r)}
    lab = _complete(dims, placed)
    g = apply_labeling(complete_bipartite(r, n - r), lab)
    if not edge_count_sufficient(g, dims) or degree_criterion_multipartite(g, dims) is not None:
        raise ConstructionFailed("block labeling does not satisfy the edge-count condition")
    return lab
