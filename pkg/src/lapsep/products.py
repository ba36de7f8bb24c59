"""The 256 binary graph products and their separable Laplacians.

A product of ``G`` and ``H`` joins ``(u, v)`` and ``(w, y)`` when at least one
of eight conditions holds, each pairing a relation between ``u, w`` in
``G`` with a relation between ``v, y`` in ``H``:

====  ===========  ===========  =====================
bit   u, w         v, y         adjacency term
====  ===========  ===========  =====================
R1    adjacent     adjacent     G (x) H
R2    adjacent     equal        G (x) I
R3    adjacent     non-adj.     G (x) (J - I - H)
R4    equal        adjacent     I (x) H
R5    equal        non-adj.     I (x) (J - I - H)
R6    non-adj.     adjacent     (J - I - G) (x) H
R7    non-adj.     equal        (J - I - G) (x) I
R8    non-adj.     non-adj.     (J - I - G) (x) (J - I - H)
====  ===========  ===========  =====================

Chains of more than two graphs are folded from the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .decomposition import SeparableCertificate, kron_separable_certificate, verify_certificate
from .errors import NonBinaryWeights, ParseError, UnknownName, ZeroTrace
from .graph_core import Graph, laplacian, normalize_density

ADJ, EQ, NON = "adj", "eq", "non"

CONDITIONS: dict[int, tuple[str, str]] = {
    1: (ADJ, ADJ),
    2: (ADJ, EQ),
    3: (ADJ, NON),
    4: (EQ, ADJ),
    5: (EQ, NON),
    6: (NON, ADJ),
    7: (NON, EQ),
    8: (NON, NON),
}

NAMED = {
    "tensor": (1,),
    "categorical": (1,),
    "direct": (1,),
    "cardinal": (1,),
    "strong": (1, 2, 4),
    "cartesian": (2, 4),
    "lexicographic": (1, 2, 3, 4),
    "lexicographical": (1, 2, 3, 4),
}


@dataclass(frozen=True, order=True)
class ProductMask:
    """Subset of ``{R1..R8}``; bit ``k-1`` stands for ``Rk``."""

    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= 255:
            raise ValueError(f"mask must be in 0..255, got {self.bits}")

    @classmethod
    def of(cls, conditions: Iterable[int]) -> "ProductMask":
        bits = 0
        for k in conditions:
            if k not in CONDITIONS:
                raise ValueError(f"no condition R{k}")
            bits |= 1 << (k - 1)
        return cls(bits)

    @classmethod
    def parse(cls, value: str | int) -> "ProductMask":
        """Accept a product name, ``"R1,R2,R4"`` or an integer ``0..255``."""
        if isinstance(value, int):
            return cls(value)
        text = value.strip().lower()
        if text in NAMED:
            return named_mask(text)
        if re.fullmatch(r"\d+", text):
            return cls(int(text))
        if text in ("", "none", "empty"):
            return cls(0)
        try:
            return cls.of(int(part.strip().lstrip("r")) for part in text.split(","))
        except ValueError as exc:
            raise ParseError(f"cannot parse mask {value!r}") from exc

    @property
    def conditions(self) -> tuple[int, ...]:
        return tuple(k for k in CONDITIONS if self.bits >> (k - 1) & 1)

    def __str__(self) -> str:
        return ",".join(f"R{k}" for k in self.conditions) or "{}"


FULL = ProductMask(255)


def named_mask(name: str) -> ProductMask:
    try:
        return ProductMask.of(NAMED[name.lower()])
    except KeyError:
        raise UnknownName(f"unknown product {name!r}; known: {', '.join(sorted(NAMED))}") from None


def complement_mask(mask: ProductMask) -> ProductMask:
    return ProductMask(255 ^ mask.bits)


def _binary_adj(g: Graph) -> np.ndarray:
    if not g.is_unweighted():
        raise NonBinaryWeights("graph products need unweighted factors")
    return g.adj


def _relation(adj: np.ndarray, kind: str) -> np.ndarray:
    n = adj.shape[0]
    if kind == ADJ:
        return adj
    if kind == EQ:
        return np.eye(n)
    return 1 - np.eye(n) - adj


def product_adjacency(mask: ProductMask, g: Graph, h: Graph) -> Graph:
    """Product graph on ``V(g) x V(h)``, vertex ``(u, v)`` at index ``u * |h| + v``."""
    G, H = _binary_adj(g), _binary_adj(h)
    adj = np.zeros((g.n * h.n, g.n * h.n))
    for k in mask.conditions:
        left, right = CONDITIONS[k]
        adj += np.kron(_relation(G, left), _relation(H, right))
    return Graph(adj)


def _level_masks(mask: ProductMask | Sequence[ProductMask], m: int) -> list[ProductMask]:
    if isinstance(mask, ProductMask):
        return [mask] * (m - 1)
    masks = list(mask)
    if len(masks) != m - 1:
        raise ValueError(f"need {m - 1} masks for {m} graphs, got {len(masks)}")
    return masks


def product_chain(mask: ProductMask | Sequence[ProductMask], graphs: Sequence[Graph]) -> Graph:
    """``((G1 . G2) . G3) ...``; a single mask is reused at every level."""
    if len(graphs) < 2:
        raise ValueError("a product needs at least two graphs")
    masks = _level_masks(mask, len(graphs))
    out = graphs[0]
    for mk, g in zip(masks, graphs[1:]):
        out = product_adjacency(mk, out, g)
    return out


def kron_terms(mask: ProductMask | Sequence[ProductMask], graphs: Sequence[Graph]) -> list[tuple[np.ndarray, ...]]:
    """Write the chain adjacency as ``sum_j F_1^j (x) ... (x) F_m^j``.

    Every ``F`` is one of ``G_i``, ``I`` or ``J - I - G_i``. The complement of
    an inner product ``P . G`` under mask ``M`` is ``P . G`` under the
    complementary mask, which lets non-adjacency at the inner level expand
    into factor-wise terms as well. Terms with an all-zero factor are dropped.
    """
    m = len(graphs)
    if m < 2:
        raise ValueError("a product needs at least two graphs")
    masks = _level_masks(mask, m)
    adjs = [_binary_adj(g) for g in graphs]

    def prefix(ell: int, kind: str) -> list[tuple[np.ndarray, ...]]:
        # terms for relation `kind` on the product of the first `ell` graphs
        if kind == EQ:
            return [tuple(np.eye(a.shape[0]) for a in adjs[:ell])]
        if ell == 1:
            return [(_relation(adjs[0], kind),)]
        top = masks[ell - 2] if kind == ADJ else complement_mask(masks[ell - 2])
        return level(ell, top)

    def level(ell: int, top: ProductMask) -> list[tuple[np.ndarray, ...]]:
        out = []
        for k in top.conditions:
            left, right = CONDITIONS[k]
            tail = _relation(adjs[ell - 1], right)
            out.extend(t + (tail,) for t in prefix(ell - 1, left))
        return out

    terms = level(m, masks[-1])
    return [t for t in terms if all(np.any(f) for f in t)]


def product_laplacian_certificate(mask: ProductMask | Sequence[ProductMask], graphs: Sequence[Graph],
                                  method: str = "auto") -> SeparableCertificate:
    """Separable certificate for the normalized Laplacian of a product chain.

    The adjacency is split into Kronecker terms ``(x)_i F_i^j``; since each
    ``F`` is nonnegative the row-sum diagonal factorizes too, so the Laplacian
    equals ``sum_j (x)_i r(F_i^j) - (x)_i F_i^j`` and each factor pair
    ``(r(F), F)`` is row diagonally dominant.
    """
    prod = product_chain(mask, graphs)
    if prod.is_trivial():
        raise ZeroTrace("product graph has no edges")
    terms = kron_terms(mask, graphs)
    pairs = [[(F.sum(axis=1), F) for F in t] for t in terms]
    cert = kron_separable_certificate(pairs, method=method)
    rho = normalize_density(laplacian(prod))
    residual = verify_certificate(cert, rho)
    if residual > 1e-10:
        raise ArithmeticError(f"certificate misses the product Laplacian by {residual:.3e}")
    masks = _level_masks(mask, len(graphs))
    cert.meta.update({"masks": [str(mk) for mk in masks], "fold": "left", "residual": residual})
    return cert
