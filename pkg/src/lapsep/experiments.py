"""Exhaustive labeling searches and small-graph censuses."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

import numpy as np

from .constructions import bipartite_separable_labeling, find_entangling_labeling
from .entanglement import ENTANGLED, SEPARABLE, UNDECIDED, verdict
from .errors import PreconditionUnmet, TooLarge
from .graph_core import Graph, complement, complete_bipartite
from .io import format_graph6
from .labeling import VertexLabeling, all_labelings, as_dims, reduced_labelings

MAX_EXHAUSTIVE_N = 9

ALL_SEPARABLE = "all_separable"
ALL_ENTANGLED = "all_entangled"
MIXED = "mixed"


@dataclass
class LabelingCensus:
    classification: str
    counts: dict[str, int]
    total: int
    entangling_labeling: VertexLabeling | None = None
    separable_labeling: VertexLabeling | None = None

    @property
    def undecided_present(self) -> bool:
        return self.counts.get(UNDECIDED, 0) > 0

    def to_json(self) -> dict:
        out: dict[str, Any] = {"classification": self.classification, "counts": dict(self.counts),
                               "total": self.total, "undecided_present": self.undecided_present}
        if self.entangling_labeling is not None:
            out["entangling_labeling"] = self.entangling_labeling.to_json()
        return out


def _check_size(n: int) -> None:
    if n > MAX_EXHAUSTIVE_N:
        raise TooLarge(f"exhaustive labeling search is limited to n <= {MAX_EXHAUSTIVE_N}, got {n}")


def all_labelings_verdict(g: Graph, dims: Sequence[int], reduced: bool = True) -> LabelingCensus:
    """Run :func:`verdict` on every labeling (one per symmetry orbit when ``reduced``)."""
    dims = as_dims(dims, g.n)
    _check_size(g.n)
    counts = Counter({ENTANGLED: 0, SEPARABLE: 0, UNDECIDED: 0})
    first_ent = first_sep = None
    labelings = reduced_labelings(dims) if reduced else all_labelings(dims)
    for lab in labelings:
        status = verdict(g, dims, lab).status
        counts[status] += 1
        if status == ENTANGLED and first_ent is None:
            first_ent = lab
        elif status == SEPARABLE and first_sep is None:
            first_sep = lab
    total = sum(counts.values())
    if counts[ENTANGLED] == total:
        cls = ALL_ENTANGLED
    elif counts[SEPARABLE] == total:
        cls = ALL_SEPARABLE
    else:
        cls = MIXED
    return LabelingCensus(cls, dict(counts), total, first_ent, first_sep)


def _degree_fails(adj: np.ndarray, dims: tuple[int, ...]) -> bool:
    # inlined single-factor degree test, skips Graph validation in hot loops
    k = len(dims)
    n = adj.shape[0]
    deg = adj.sum(axis=1)
    t = adj.reshape(dims + dims)
    for f in range(k):
        axes = list(range(2 * k))
        axes[f], axes[k + f] = axes[k + f], axes[f]
        if np.any(t.transpose(axes).reshape(n, n).sum(axis=1) != deg):
            return True
    return False


def search_entangling_labeling(g: Graph, dims: Sequence[int]) -> tuple[VertexLabeling | None, int]:
    """First reduced labeling whose degree criterion fails, and how many were tried."""
    dims = as_dims(dims, g.n)
    _check_size(g.n)
    tried = 0
    for lab in reduced_labelings(dims):
        tried += 1
        order = lab.order()
        if _degree_fails(g.adj[np.ix_(order, order)], dims):
            return lab, tried
    return None, tried


def canonical_form(g: Graph) -> tuple[int, ...]:
    """Lexicographically smallest upper-triangle bit string over all vertex orders."""
    n = g.n
    iu, ju = np.triu_indices(n, 1)
    adj = g.adj.astype(int)
    best = None
    for perm in itertools.permutations(range(n)):
        p = np.array(perm)
        key = tuple(adj[p[iu], p[ju]])
        if best is None or key < best:
            best = key
    return best


def census_n4() -> dict:
    """All graphs on 4 vertices up to isomorphism, classified over every labeling in ``C^2 x C^2``."""
    n, dims = 4, (2, 2)
    iu, ju = np.triu_indices(n, 1)
    classes: dict[tuple[int, ...], list[Graph]] = {}
    for bits in itertools.product((0, 1), repeat=len(iu)):
        adj = np.zeros((n, n))
        adj[iu, ju] = bits
        g = Graph(adj + adj.T)
        classes.setdefault(canonical_form(g), []).append(g)

    rows = []
    for key in sorted(classes, key=lambda k: (sum(k), k)):
        members = classes[key]
        g = members[0]
        row: dict[str, Any] = {"graph6": format_graph6(g), "edges": [e[:2] for e in g.edges()],
                               "labeled_copies": len(members)}
        if g.is_trivial():
            row["classification"] = "excluded_trivial"
        else:
            census = all_labelings_verdict(g, dims)
            degree_only = [not _degree_fails(g.permuted(lab.order()).adj, dims) for lab in reduced_labelings(dims)]
            row.update(census.to_json())
            row["degree_all_pass"] = all(degree_only)
            row["degree_agrees"] = all(degree_only) == (census.classification == ALL_SEPARABLE)
        rows.append(row)
    separable = [r for r in rows if r["classification"] == ALL_SEPARABLE]
    return {
        "dims": list(dims),
        "isomorphism_classes": len(rows),
        "nontrivial_classes": sum(r["classification"] != "excluded_trivial" for r in rows),
        "all_separable": [r["graph6"] for r in separable],
        "classes": rows,
    }


def bipartite_theorem_applies(r: int, dims: Sequence[int]) -> bool:
    """Hypothesis under which ``K_{r,n-r}`` is entangled for every labeling."""
    n = math.prod(dims)
    return any(1 <= r < n // p and r % p != 0 for p in dims)


def bipartite_experiment(n: int, dims_list: Sequence[Sequence[int]] | None = None) -> Iterator[dict]:
    """Classify ``K_{r,n-r}`` and its complement over every labeling, for each ``r <= n/2``."""
    _check_size(n)
    if dims_list is None:
        dims_list = [(p, n // p) for p in range(2, n // 2 + 1) if n % p == 0]
    for dims in dims_list:
        dims = as_dims(dims, n)
        for r in range(1, n // 2 + 1):
            g = complete_bipartite(r, n - r)
            for name, h in ((f"K_{{{r},{n - r}}}", g), (f"co-K_{{{r},{n - r}}}", complement(g))):
                census = all_labelings_verdict(h, dims)
                row = {"graph": name, "graph6": format_graph6(h), "n": n, "dims": list(dims), "r": r,
                       "theorem_applies": bipartite_theorem_applies(r, dims), **census.to_json()}
                if len(dims) == 2 and r % dims[1] == 0 and name.startswith("K"):
                    try:
                        lab = bipartite_separable_labeling(r, dims)
                        row["block_labeling_verdict"] = verdict(h, dims, lab).status
                    except PreconditionUnmet:
                        pass
                yield row


def _noncomplete_record(item: tuple[str, Graph, tuple[int, ...], bool]) -> dict:
    code, g, dims, exhaustive = item
    rec: dict[str, Any] = {"graph6": code, "n": g.n, "dims": list(dims)}
    if g.is_complete():
        return {**rec, "classification": "skipped", "reason": "complete"}
    if g.is_trivial():
        return {**rec, "classification": "skipped", "reason": "trivial"}
    found = find_entangling_labeling(g, dims)
    if found is not None:
        lab, name = found
        return {**rec, "classification": "entangled_labeling_found", "method": f"construction:{name}",
                "entangling_labeling": lab.to_json(), "counts": {"searched": 0}}
    if not exhaustive:
        return {**rec, "classification": "not_covered", "counts": {"searched": 0}}
    lab, tried = search_entangling_labeling(g, dims)
    if lab is None:
        return {**rec, "classification": "no_entangling_labeling", "method": "search", "counts": {"searched": tried}}
    return {**rec, "classification": "entangled_labeling_found", "method": "search",
            "entangling_labeling": lab.to_json(), "counts": {"searched": tried}}


def noncomplete_experiment(graphs: Iterable[tuple[str, Graph]], dims: Sequence[int], jobs: int = 1,
                           exhaustive: bool = True,
                           progress: Callable[[int, dict], None] | None = None) -> Iterator[dict]:
    """For each graph, find a labeling under which it is entangled.

    Degree-threshold constructions are tried first; only graphs outside all
    their hypotheses fall through to exhaustive search. Records come back in
    input order whatever the number of worker processes.
    """
    dims = tuple(dims)
    items = ((code, g, as_dims(dims, g.n), exhaustive) for code, g in graphs)
    if jobs <= 1:
        results: Iterable[dict] = map(_noncomplete_record, items)
        for i, rec in enumerate(results):
            if progress:
                progress(i, rec)
            yield rec
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for i, rec in enumerate(pool.map(_noncomplete_record, items, chunksize=1)):
            if progress:
                progress(i, rec)
            yield rec


@dataclass
class ExperimentSummary:
    total: int = 0
    skipped: int = 0
    by_construction: int = 0
    by_search: int = 0
    failures: list[str] = field(default_factory=list)

    def add(self, rec: dict) -> None:
        self.total += 1
        cls = rec["classification"]
        if cls == "skipped":
            self.skipped += 1
        elif cls == "entangled_labeling_found":
            if rec["method"] == "search":
                self.by_search += 1
            else:
                self.by_construction += 1
        else:
            self.failures.append(rec["graph6"])

    def to_json(self) -> dict:
        return {"summary": True, "total": self.total, "skipped": self.skipped,
                "by_construction": self.by_construction, "by_search": self.by_search,
                "failures": len(self.failures), "failed_graph6": self.failures}
