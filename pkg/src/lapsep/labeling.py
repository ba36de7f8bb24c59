"""Vertex labelings onto a tensor grid and the partial transpose graph.

A factorization ``n = p1 * ... * pm`` is passed around as a plain tuple of
ints (``dims``). Grid cells are numbered in mixed-radix row-major order, so
cell ``k`` is the ``k``-th basis vector of ``C^p1 (x) ... (x) C^pm`` under
``numpy.kron``. Multi-indices are 1-based to match the usual ``(v_i, w_j)``
notation; everything else is 0-based.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionMismatch, OutOfRange
from .graph_core import Graph

Dims = tuple[int, ...]


def as_dims(dims: Sequence[int], n: int | None = None) -> Dims:
    """Validate and normalize a factorization."""
    dims = tuple(int(p) for p in dims)
    if len(dims) < 2:
        raise DimensionMismatch(f"need at least two factors, got {dims}")
    if any(p < 2 for p in dims):
        raise DimensionMismatch(f"every factor must be >= 2, got {dims}")
    if n is not None and math.prod(dims) != n:
        raise DimensionMismatch(f"dims {dims} multiply to {math.prod(dims)}, graph has {n} vertices")
    return dims


def decode(k: int, dims: Sequence[int]) -> tuple[int, ...]:
    """Cell number -> 1-based multi-index."""
    n = math.prod(dims)
    if not 0 <= k < n:
        raise OutOfRange(f"cell {k} out of range for dims {tuple(dims)}")
    return tuple(int(i) + 1 for i in np.unravel_index(k, tuple(dims)))


def encode(multi_index: Sequence[int], dims: Sequence[int]) -> int:
    """1-based multi-index -> cell number."""
    if len(multi_index) != len(dims):
        raise OutOfRange(f"multi-index {tuple(multi_index)} has wrong length for dims {tuple(dims)}")
    for i, p in zip(multi_index, dims):
        if not 1 <= i <= p:
            raise OutOfRange(f"multi-index {tuple(multi_index)} out of range for dims {tuple(dims)}")
    return int(np.ravel_multi_index(tuple(i - 1 for i in multi_index), tuple(dims)))


@dataclass(frozen=True)
class VertexLabeling:
    """Bijection from vertices onto grid cells; ``cells[v]`` is the cell of vertex ``v``."""

    dims: Dims
    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = as_dims(self.dims)
        cells = tuple(int(c) for c in self.cells)
        if sorted(cells) != list(range(math.prod(dims))):
            raise DimensionMismatch(f"labeling is not a bijection onto the grid of {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "cells", cells)

    @property
    def n(self) -> int:
        return len(self.cells)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "VertexLabeling":
        return cls(tuple(dims), tuple(range(math.prod(dims))))

    @classmethod
    def from_order(cls, dims: Sequence[int], order: Sequence[int]) -> "VertexLabeling":
        """Labeling that puts vertex ``order[k]`` on cell ``k``."""
        cells = [0] * len(order)
        for k, v in enumerate(order):
            cells[v] = k
        return cls(tuple(dims), tuple(cells))

    @classmethod
    def from_multi_indices(cls, dims: Sequence[int], indices: Sequence[Sequence[int]]) -> "VertexLabeling":
        return cls(tuple(dims), tuple(encode(ix, dims) for ix in indices))

    def order(self) -> np.ndarray:
        """Inverse map: ``order()[k]`` is the vertex sitting on cell ``k``."""
        out = np.empty(self.n, dtype=int)
        out[list(self.cells)] = np.arange(self.n)
        return out

    def multi_indices(self) -> list[tuple[int, ...]]:
        return [decode(c, self.dims) for c in self.cells]

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "labeling": [list(ix) for ix in self.multi_indices()]}

    @classmethod
    def from_json(cls, data: dict | str) -> "VertexLabeling":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_multi_indices(data["dims"], data["labeling"])


@dataclass(frozen=True)
class Bipartition:
    """Split of the factor positions (0-based) into two non-empty groups."""

    left: frozenset[int]
    right: frozenset[int]

    def __post_init__(self) -> None:
        left, right = frozenset(self.left), frozenset(self.right)
        if not left or not right or left & right:
            raise ValueError(f"invalid bipartition {sorted(left)} | {sorted(right)}")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def check(self, m: int) -> None:
        if self.left | self.right != frozenset(range(m)):
            raise DimensionMismatch(f"bipartition {self} does not cover {m} factors")

    def to_json(self) -> dict:
        return {"left": sorted(i + 1 for i in self.left), "right": sorted(i + 1 for i in self.right)}

    def __str__(self) -> str:
        return "{%s}|{%s}" % (",".join(str(i + 1) for i in sorted(self.left)),
                              ",".join(str(i + 1) for i in sorted(self.right)))


def single_factor_splits(m: int) -> list[Bipartition]:
    """Factor ``i`` against the rest, for ``i = 0..m-1``."""
    return [Bipartition(frozenset({i}), frozenset(range(m)) - {i}) for i in range(m)]


def apply_labeling(g: Graph, lab: VertexLabeling, dims: Sequence[int] | None = None) -> Graph:
    """Reorder ``g`` so that vertex ``k`` of the result is the vertex labelled with cell ``k``."""
    if dims is not None and tuple(dims) != lab.dims:
        raise DimensionMismatch(f"labeling dims {lab.dims} differ from {tuple(dims)}")
    if lab.n != g.n:
        raise DimensionMismatch(f"labeling covers {lab.n} vertices, graph has {g.n}")
    return g.permuted(lab.order())


def partial_transpose_matrix(m: np.ndarray, dims: Sequence[int], split: Bipartition) -> np.ndarray:
    """Matrix partial transpose over the factors in ``split.right``."""
    dims = tuple(dims)
    k = len(dims)
    n = math.prod(dims)
    m = np.asarray(m)
    if m.shape != (n, n):
        raise DimensionMismatch(f"matrix of shape {m.shape} does not act on dims {dims}")
    split.check(k)
    axes = list(range(2 * k))
    for f in split.right:
        axes[f], axes[k + f] = axes[k + f], axes[f]
    return m.reshape(dims + dims).transpose(axes).reshape(n, n)


def partial_transpose_graph(g: Graph, dims: Sequence[int], split: Bipartition) -> Graph:
    """Partial transpose graph of a graph already in grid order.

    The edge ``{(u, v), (w, y)}`` becomes ``{(u, y), (w, v)}``, where the
    first coordinate collects the left factors and the second the right
    ones. Edges with ``u == w`` or ``v == y`` map to themselves; weights are
    carried along unchanged.
    """
    dims = as_dims(dims, g.n)
    return Graph(partial_transpose_matrix(g.adj, dims, split))


def grid_symmetries(dims: Sequence[int]) -> np.ndarray:
    """All grid permutations generated by within-factor relabelings and swaps of equal factors.

    Row ``t`` maps cell ``c`` to cell ``out[t, c]``.
    """
    dims = tuple(dims)
    k = len(dims)
    idx = np.array(np.unravel_index(np.arange(math.prod(dims)), dims))  # (k, n)
    factor_orders = [s for s in itertools.permutations(range(k)) if all(dims[s[j]] == dims[j] for j in range(k))]
    rows = []
    for sigma in factor_orders:
        for perms in itertools.product(*(itertools.permutations(range(p)) for p in dims)):
            new = [np.asarray(perms[j])[idx[sigma[j]]] for j in range(k)]
            rows.append(np.ravel_multi_index(new, dims))
    return np.array(rows)


def count_reduced_labelings(dims: Sequence[int]) -> int:
    dims = tuple(dims)
    return math.factorial(math.prod(dims)) // len(grid_symmetries(dims))


def reduced_labelings(dims: Sequence[int]) -> Iterator[VertexLabeling]:
    """One labeling per orbit of the grid symmetry group, in lexicographic order.

    A labeling is kept iff its cell sequence is the lexicographic minimum of
    its orbit. That holds exactly when every ``cells[v]`` is the smallest
    point of its orbit under the pointwise stabilizer of ``cells[:v]``, which
    lets the search prune without ever visiting non-minimal labelings.
    """
    dims = as_dims(dims)
    group = grid_symmetries(dims)
    n = group.shape[1]
    seq: list[int] = []
    used = np.zeros(n, dtype=bool)

    def extend(stab: np.ndarray) -> Iterator[VertexLabeling]:
        if len(seq) == n:
            yield VertexLabeling(dims, tuple(seq))
            return
        for c in range(n):
            if used[c] or stab[:, c].min() < c:
                continue
            seq.append(c)
            used[c] = True
            yield from extend(stab[stab[:, c] == c])
            used[c] = False
            seq.pop()

    yield from extend(group)


def all_labelings(dims: Sequence[int]) -> Iterator[VertexLabeling]:
    """Every labeling, lexicographic over permutations."""
    dims = as_dims(dims)
    for cells in itertools.permutations(range(math.prod(dims))):
        yield VertexLabeling(dims, cells)


def random_labeling(dims: Sequence[int], rng: np.random.Generator) -> VertexLabeling:
    dims = as_dims(dims)
    return VertexLabeling(dims, tuple(int(c) for c in rng.permutation(math.prod(dims))))


def factor_grid(dims: Sequence[int], factor: int) -> np.ndarray:
    """Cell lookup for the two-group view ``factor`` vs the remaining factors.

    ``grid[a, b]`` is the cell whose index along ``factor`` is ``a`` and
    whose remaining indices, read in order as a mixed-radix number, equal
    ``b`` (both 0-based).
    """
    dims = tuple(dims)
    rest = dims[:factor] + dims[factor + 1:]
    grid = np.empty((dims[factor], math.prod(rest)), dtype=int)
    for a in range(dims[factor]):
        for b in range(math.prod(rest)):
            ix = list(np.unravel_index(b, rest))
            ix.insert(factor, a)
            grid[a, b] = np.ravel_multi_index(tuple(ix), dims)
    return grid
