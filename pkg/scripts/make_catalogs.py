"""Regenerate the graph6 catalogs under tests/data/.

* graphs6.g6: every graph on 6 vertices up to isomorphism (156), taken
  from the networkx graph atlas.
* regular4_n9.g6: every 4-regular graph on 9 vertices (16). Each one splits
  into two edge-disjoint 2-factors, so it is enough to fix the first
  2-factor up to isomorphism (cycle types 9, 6+3, 5+4, 3+3+3) and try every
  labelled second 2-factor.
"""

import itertools
import sys
from pathlib import Path

import networkx as nx
import numpy as np

OUT = Path(__file__).resolve().parents[1] / "tests" / "data"


def atlas(n):
    return [g for g in nx.graph_atlas_g() if g.number_of_nodes() == n]


def cycle_edges(cycle):
    return {frozenset((cycle[i], cycle[(i + 1) % len(cycle)])) for i in range(len(cycle))}


def two_factors(n):
    seen = set()
    for perm in itertools.permutations(range(n)):
        edges, visited, ok = set(), set(), True
        for start in range(n):
            if start in visited:
                continue
            cyc, x = [], start
            while x not in visited:
                visited.add(x)
                cyc.append(x)
                x = perm[x]
            if len(cyc) < 3:
                ok = False
                break
            edges |= cycle_edges(cyc)
        if ok:
            key = frozenset(edges)
            if key not in seen:
                seen.add(key)
                yield key


def regular4_n9():
    n = 9
    firsts = []
    for parts in ([9], [6, 3], [5, 4], [3, 3, 3]):
        edges, start = set(), 0
        for k in parts:
            edges |= cycle_edges(list(range(start, start + k)))
            start += k
        firsts.append(edges)
    seconds = list(two_factors(n))
    reps = {}
    for f1 in firsts:
        for f2 in seconds:
            if f1 & f2:
                continue
            g = nx.Graph([tuple(e) for e in f1 | f2])
            key = tuple(np.round(np.linalg.eigvalsh(nx.to_numpy_array(g, nodelist=range(n))), 6))
            bucket = reps.setdefault(key, [])
            if not any(nx.is_isomorphic(g, h) for h in bucket):
                bucket.append(g)
    return [g for bucket in reps.values() for g in bucket]


def write(path, graphs):
    lines = [nx.to_graph6_bytes(g, nodes=sorted(g), header=False).decode().strip() for g in graphs]
    path.write_text("\n".join(sorted(lines)) + "\n")
    print(f"{path.name}: {len(lines)} graphs", file=sys.stderr)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    write(OUT / "graphs6.g6", atlas(6))
    write(OUT / "regular4_n9.g6", regular4_n9())
