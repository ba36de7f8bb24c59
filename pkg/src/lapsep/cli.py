"""Command-line interface.

JSON goes to stdout, progress and diagnostics to stderr. ``analyze`` exits
with 0 (Separable), 1 (Entangled) or 2 (Undecided); parse errors exit 3,
dimension mismatches 4 and any other library error 5.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .constructions import find_entangling_labeling
from .entanglement import ENTANGLED, SEPARABLE, verdict
from .errors import DimensionMismatch, LapSepError, ParseError
from .experiments import (
    ExperimentSummary,
    all_labelings_verdict,
    bipartite_experiment,
    census_n4,
    noncomplete_experiment,
    search_entangling_labeling,
)
from .graph_core import Graph, density_of
from .io import format_edge_list, read_graph, read_graphs, read_labeling
from .products import ProductMask, product_chain, product_laplacian_certificate

EXIT_CODES = {SEPARABLE: 0, ENTANGLED: 1}
EXIT_PARSE, EXIT_DIMS, EXIT_OTHER = 3, 4, 5


def _dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}; expected e.g. 2,3") from None


def _emit(obj: Any) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_analyze(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    labeling = read_labeling(args.labeling) if args.labeling else None
    dims = args.dims or (labeling.dims if labeling else None)
    if dims is None:
        raise DimensionMismatch("--dims is required without --labeling")
    if labeling is not None and labeling.dims != tuple(dims):
        raise DimensionMismatch(f"labeling dims {labeling.dims} differ from --dims {tuple(dims)}")
    if math.prod(dims) != g.n:
        raise DimensionMismatch(f"dims {tuple(dims)} multiply to {math.prod(dims)}, graph has {g.n} vertices")
    v = verdict(g, dims, labeling)
    _emit(v.to_json())
    return EXIT_CODES.get(v.status, 2)


def cmd_search(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    dims = args.dims
    if math.prod(dims) != g.n:
        raise DimensionMismatch(f"dims {tuple(dims)} multiply to {math.prod(dims)}, graph has {g.n} vertices")
    if args.mode == "all":
        _emit({"dims": list(dims), **all_labelings_verdict(g, dims).to_json()})
        return 0
    found = find_entangling_labeling(g, dims)
    out: dict[str, Any] = {"dims": list(dims)}
    if found is not None:
        lab, name = found
        out.update(found=True, method=f"construction:{name}")
    else:
        lab, tried = search_entangling_labeling(g, dims)
        out.update(found=lab is not None, method="search", searched=tried)
    if lab is not None:
        out["verdict"] = verdict(g, dims, lab).to_json()
    _emit(out)
    return 0 if lab is not None else 2


def cmd_product(args: argparse.Namespace) -> int:
    mask = ProductMask.parse(args.mask)
    graphs: list[Graph] = [read_graph(src) for src in args.graphs]
    if len(graphs) < 2:
        raise ParseError("product needs at least two graphs")
    prod = product_chain(mask, graphs)
    out: dict[str, Any] = {"mask": str(mask), "mask_bits": mask.bits, "fold": "left",
                           "dims": [g.n for g in graphs], "n": prod.n,
                           "edges": [[u, v] for u, v, _ in prod.edges()]}
    if args.edges_out:
        Path(args.edges_out).write_text(format_edge_list(prod))
    if args.certify:
        cert = product_laplacian_certificate(mask, graphs)
        out["certificate"] = cert.to_json(density_of(prod))
    _emit(out)
    return 0


def cmd_census(args: argparse.Namespace) -> int:
    exp = args.experiment
    if exp == "n4":
        report = census_n4()
        for row in report["classes"]:
            _emit(row)
        _emit({"summary": True, **{k: v for k, v in report.items() if k != "classes"}})
        return 0
    if exp == "bipartite":
        if args.n is None:
            raise ParseError("--n is required for the bipartite experiment")
        for row in bipartite_experiment(args.n, [args.dims] if args.dims else None):
            _emit(row)
        return 0

    if not args.input:
        raise ParseError(f"--in is required for the {exp} experiment")
    dims = args.dims or ((3, 3) if exp == "regular9" else None)
    if dims is None:
        raise ParseError("--dims is required for the noncomplete experiment")
    graphs = read_graphs(args.input)
    if exp == "regular9":
        graphs = [(c, g) for c, g in graphs if np.all(g.degrees() == 4)]
    summary = ExperimentSummary()

    def progress(i: int, rec: dict) -> None:
        _log(f"[{i + 1}/{len(graphs)}] {rec['graph6']}: {rec['classification']}")

    for rec in noncomplete_experiment(graphs, dims, jobs=args.jobs, exhaustive=not args.no_search,
                                      progress=progress if args.verbose else None):
        summary.add(rec)
        _emit(rec)
    _emit(summary.to_json())
    return 0 if not summary.failures else 1


def cmd_selftest(args: argparse.Namespace) -> int:
    """Randomized spot checks of the constructions and product certificates."""
    from .decomposition import certificate_checks
    from .graph_core import complete_graph, path_graph

    rng = np.random.default_rng(args.seed)
    checked = failures = 0
    for _ in range(args.count):
        dims = [(2, 3), (2, 4), (3, 3), (2, 2, 2)][rng.integers(4)]
        n = math.prod(dims)
        adj = np.triu(rng.random((n, n)) < rng.uniform(0.1, 0.9), 1).astype(float)
        g = Graph(adj + adj.T)
        found = find_entangling_labeling(g, dims)
        if found is not None:
            checked += 1
            failures += verdict(g, dims, found[0]).status != ENTANGLED
        pair = [path_graph(3), complete_graph(2)]
        mask = ProductMask(int(rng.integers(256)))
        prod = product_chain(mask, pair)
        if not prod.is_trivial():
            checked += 1
            failures += not certificate_checks(product_laplacian_certificate(mask, pair), density_of(prod))["ok"]
    _emit({"seed": args.seed, "checked": checked, "failures": failures})
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lapsep", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="verdict for one graph under one labeling")
    a.add_argument("graph", help="edge-list or graph6 file, or a name such as K_4 or K_{1,3}")
    a.add_argument("--dims", type=_dims)
    a.add_argument("--labeling", help="labeling JSON file")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("search", help="look for an entangling labeling, or classify all labelings")
    s.add_argument("graph")
    s.add_argument("--dims", type=_dims, required=True)
    s.add_argument("--mode", choices=("any", "all"), default="any")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_search)

    pr = sub.add_parser("product", help="graph product and optional separability certificate")
    pr.add_argument("--mask", required=True, help="name, R-list such as R1,R2,R4, or 0-255")
    pr.add_argument("graphs", nargs="+")
    pr.add_argument("--certify", action="store_true")
    pr.add_argument("--edges-out", help="also write the product as an edge list")
    pr.set_defaults(func=cmd_product)

    c = sub.add_parser("census", help="reproduction experiments (JSON lines)")
    c.add_argument("--experiment", choices=("n4", "bipartite", "regular9", "noncomplete"), required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--dims", type=_dims)
    c.add_argument("--in", dest="input")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--no-search", action="store_true", help="skip exhaustive search for uncovered graphs")
    c.add_argument("-v", "--verbose", action="store_true")
    c.set_defaults(func=cmd_census)

    t = sub.add_parser("selftest", help="randomized consistency checks")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--count", type=int, default=50)
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _log(f"error: {exc}")
        return EXIT_PARSE
    except DimensionMismatch as exc:
        _log(f"error: {exc}")
        return EXIT_DIMS
    except (LapSepError, OSError) as exc:
        _log(f"error: {exc}")
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
