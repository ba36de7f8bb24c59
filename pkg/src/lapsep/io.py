"""Reading and writing graphs and labelings."""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Iterable, Iterator

import networkx as nx
import numpy as np

from .errors import BadGraph6, ParseError
from .graph_core import (
    Graph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
)
from .labeling import VertexLabeling

_N_DIRECTIVE = re.compile(r"#\s*n\s*=\s*(\d+)")


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v [w]`` lines (0-based). ``#`` starts a comment line.

    Isolated trailing vertices can be declared with a ``# n=<count>`` line.
    """
    edges = []
    n = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _N_DIRECTIVE.fullmatch(line)
            if m:
                n = max(n, int(m.group(1)))
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"line {lineno}: expected 'u v' or 'u v w', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if u < 0 or v < 0 or u == v or not 0 <= w <= 1:
            raise ParseError(f"line {lineno}: invalid edge {raw!r}")
        edges.append((u, v, w))
        n = max(n, u + 1, v + 1)
    if n == 0:
        raise ParseError("edge list declares no vertices")
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"# n={g.n}"]
    for u, v, w in g.edges():
        lines.append(f"{u} {v}" if w == 1 else f"{u} {v} {w:.17g}")
    return "\n".join(lines) + "\n"


def parse_graph6(line: str | bytes) -> Graph:
    data = line.encode() if isinstance(line, str) else line
    data = data.strip()
    try:
        nxg = nx.from_graph6_bytes(data)
    except (nx.NetworkXError, ValueError, IndexError, TypeError) as exc:
        raise BadGraph6(f"invalid graph6 string {data[:40]!r}: {exc}") from None
    return Graph(nx.to_numpy_array(nxg, nodelist=range(nxg.number_of_nodes())))


def format_graph6(g: Graph) -> str:
    if not g.is_unweighted():
        raise ValueError("graph6 only encodes unweighted graphs")
    nxg = nx.from_numpy_array(np.asarray(g.adj, dtype=int))
    return nx.to_graph6_bytes(nxg, nodes=range(g.n), header=False).decode().strip()


def iter_graph6(lines: Iterable[str]) -> Iterator[tuple[str, Graph]]:
    """Yield ``(graph6 string, graph)`` for every non-blank line."""
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith(">>graph6<<"):
            line = line[len(">>graph6<<"):]
        yield line, parse_graph6(line)


_NAMED = re.compile(r"(?P<kind>[KPCE])_?\{?(?P<a>\d+)(?:,(?P<b>\d+))?\}?", re.IGNORECASE)


def named_graph(name: str) -> Graph:
    """``K_n``, ``K_{r,s}``, ``P_n`` (path), ``C_n`` (cycle), ``E_n`` (no edges)."""
    m = _NAMED.fullmatch(name.strip())
    if not m:
        raise ParseError(f"unknown graph name {name!r}")
    kind, a, b = m.group("kind").upper(), int(m.group("a")), m.group("b")
    if b is not None:
        if kind != "K":
            raise ParseError(f"only K takes two sizes: {name!r}")
        return complete_bipartite(a, int(b))
    return {"K": complete_graph, "P": path_graph, "C": cycle_graph, "E": empty_graph}[kind](a)


def is_graph6_path(path: str | Path) -> bool:
    return Path(path).suffix.lower() in (".g6", ".graph6")


def read_graphs(source: str | Path) -> list[tuple[str, Graph]]:
    """Load graphs from a file, or build one from a name like ``K_4``.

    Returns ``(label, graph)`` pairs; the label is the graph6 string for
    graph6 input and the file name or graph name otherwise.
    """
    path = Path(source)
    if path.exists():
        text = path.read_text()
        if is_graph6_path(path):
            return list(iter_graph6(text.splitlines()))
        return [(str(source), parse_edge_list(text))]
    return [(str(source), named_graph(str(source)))]


def read_graph(source: str | Path) -> Graph:
    graphs = read_graphs(source)
    if len(graphs) != 1:
        raise ParseError(f"{source}: expected one graph, found {len(graphs)}")
    return graphs[0][1]


def read_labeling(path: str | Path) -> VertexLabeling:
    try:
        data = json.loads(Path(path).read_text())
        return VertexLabeling.from_json(data)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"{path}: invalid labeling file ({exc})") from None
