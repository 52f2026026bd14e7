"""Command line front end: analysis commands, generators, experiment drivers.

Single-shot analyses emit JSON with keys in the order input, spectrum,
clustering, regularity; sweep experiments emit CSV.  All numbers are printed
with 17 significant digits so reports parse back to the exact float values
and reruns with identical flags are byte-identical.  Exit codes: 0 success,
2 usage or input error, 3 internal numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .errors import (
    EigenFailure,
    InternalNumericalError,
    ModspecError,
)
from .graph import WeightedGraph, dump_edge_list, load_edge_list
from .spectral import spectral_decomposition, spectral_gap, structural_count
from .clustering import Partition, k_variance, representatives, weighted_kmeans
from .quality import quality_report
from .regularity import regularity_certificate
from .generators import BlockModel, classical, generalized_random_graph
from .sampling import (
    dominant_vertex_ratio,
    k_variance_convergence,
    spectral_convergence,
    subspace_convergence,
)

DUALITY_TOL = 1e-10


def _fmt_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    xf = float(x)
    if not np.isfinite(xf):
        raise InternalNumericalError("non-finite value in JSON report")
    return format(xf, ".17g")


def render_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [f'{inner}{json.dumps(str(k))}: {render_json(v, indent + 1)}'
                 for k, v in value.items()]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        items = list(value)
        if not items:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in items):
            return "[" + ", ".join(_render_scalar(v) for v in items) + "]"
        parts = [f"{inner}{render_json(v, indent + 1)}" for v in items]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    return _render_scalar(value)


def _render_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    return _fmt_number(value)


def _load_graph(path: str, use_largest: bool):
    with open(path, "r", encoding="utf-8") as fh:
        raw = load_edge_list(fh.read())
    if use_largest:
        analyzed = raw.induced_subgraph(raw.largest_component())
    else:
        analyzed = raw
    return raw, analyzed


def _input_block(path: str, raw: WeightedGraph, analyzed: WeightedGraph,
                 use_largest: bool) -> dict:
    return {
        "path": path,
        "n": raw.n,
        "total_volume": float(raw.total_volume),
        "connected": raw.is_connected(),
        "largest_component_used": use_largest,
        "analyzed_n": analyzed.n,
        "dominant_vertex_ratio": dominant_vertex_ratio(analyzed),
    }


def _spectrum_block(dec, eps_list, top) -> dict:
    limit = dec.n if top is None else max(0, min(top, dec.n))
    counts = {}
    for eps in eps_list or []:
        counts[format(float(eps), "g")] = structural_count(dec, float(eps))
    return {
        "lambdas": [float(v) for v in dec.lambdas[:limit]],
        "mus": [float(v) for v in dec.mus[:limit]],
        "spectral_gap": spectral_gap(dec),
        "structural_counts": counts,
    }


def _trivial_partition(g: WeightedGraph) -> Partition:
    return Partition.from_labels(np.zeros(g.n, dtype=np.intp), 1, g.degrees)


def _cluster_blocks(g: WeightedGraph, dec, k: int, seed: int, restarts: int):
    if k == 1:
        part = _trivial_partition(g)
        value = 0.0
    else:
        reps = representatives(dec, g, k)
        part, value = weighted_kmeans(reps, k, restarts=restarts, seed=seed)
    report = quality_report(g, dec, part)
    if report.duality_residual > DUALITY_TOL:
        raise InternalNumericalError(
            f"duality residual {report.duality_residual:.3e} exceeds {DUALITY_TOL}")
    labels = {g.vertex_ids[i]: int(part.labels[i]) for i in range(g.n)}
    block = {
        "k": k,
        "seed": seed,
        "restarts": restarts,
        "labels": labels,
        "k_variance": float(value),
        "modularity": report.modularity_value,
        "normalized_cut": report.cut_value,
        "relaxation_upper": report.relaxation_upper,
        "relaxation_lower_cut": report.relaxation_lower_cut,
        "duality_residual": report.duality_residual,
    }
    return part, block


def _regularity_block(g: WeightedGraph, report) -> dict:
    pairs = []
    for pair in report.pairs:
        pairs.append({
            "a": pair.a,
            "b": pair.b,
            "rho": pair.rho,
            "alpha": pair.alpha,
            "method": pair.method,
            "vol_a": pair.vol_a,
            "vol_b": pair.vol_b,
            "ratio_to_bound": pair.ratio_to_bound,
            "witness_x": None if pair.witness_x is None
            else [g.vertex_ids[i] for i in pair.witness_x],
            "witness_y": None if pair.witness_y is None
            else [g.vertex_ids[i] for i in pair.witness_y],
        })
    return {
        "k": report.k,
        "s": report.s,
        "eps": report.eps,
        "bound": report.bound,
        "min_size_ratio": report.min_size_ratio,
        "pairs": pairs,
    }


def cmd_spectrum(args) -> int:
    raw, g = _load_graph(args.file, args.largest_component)
    dec = spectral_decomposition(g)
    report = {
        "input": _input_block(args.file, raw, g, args.largest_component),
        "spectrum": _spectrum_block(dec, args.eps, args.top),
    }
    print(render_json(report))
    return 0


def cmd_cluster(args) -> int:
    raw, g = _load_graph(args.file, args.largest_component)
    dec = spectral_decomposition(g)
    _, cluster_block = _cluster_blocks(g, dec, args.k, args.seed, args.restarts)
    report = {
        "input": _input_block(args.file, raw, g, args.largest_component),
        "spectrum": _spectrum_block(dec, args.eps, args.top),
        "clustering": cluster_block,
    }
    print(render_json(report))
    return 0


def cmd_regularity(args) -> int:
    raw, g = _load_graph(args.file, args.largest_component)
    g = g.normalize_volume()
    dec = spectral_decomposition(g)
    part, cluster_block = _cluster_blocks(g, dec, args.k, args.seed, args.restarts)
    cert = regularity_certificate(g, dec, part, args.k, exact_limit=args.exact_max,
                                  samples=args.samples, seed=args.seed)
    report = {
        "input": _input_block(args.file, raw, g, args.largest_component),
        "spectrum": _spectrum_block(dec, args.eps, args.top),
        "clustering": cluster_block,
        "regularity": _regularity_block(g, cert),
    }
    print(render_json(report))
    return 0


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"bad sizes {text!r}") from None


def _parse_probs(text: str) -> np.ndarray:
    try:
        rows = [[float(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError:
        raise ValueError(f"bad probability matrix {text!r}") from None
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise ValueError("probability matrix rows differ in length")
    return np.array(rows)


def cmd_generate(args) -> int:
    if args.kind == "block":
        if args.sizes is None or args.p is None or args.seed is None:
            raise ValueError("block generation needs --sizes, --p, and --seed")
        model = BlockModel(_parse_sizes(args.sizes), _parse_probs(args.p))
        g, _ = generalized_random_graph(model, args.seed)
    else:
        sizes = {
            "complete": ("n",), "path": ("n",),
            "complete_bipartite": ("a", "b"), "two_cliques_bridge": ("m",),
        }
        if args.name is None:
            raise ValueError("classical generation needs --name")
        needed = sizes[args.name]
        values = []
        for attr in needed:
            val = getattr(args, attr)
            if val is None:
                raise ValueError(f"classical {args.name} needs --{attr}")
            values.append(val)
        g = classical(args.name, *values)
    text = dump_edge_list(g)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    edges = int(np.count_nonzero(np.triu(g.weights, k=1)))
    print(f"n={g.n} edges={edges} -> {args.output}", file=sys.stderr)
    return 0


def _csv_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool) or isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def cmd_converge(args) -> int:
    _, g = _load_graph(args.file, False)
    schedule = _parse_sizes(args.schedule)
    if args.mode == "spectrum":
        if args.seed is None:
            raise ValueError("spectrum mode needs --seed")
        table = spectral_convergence(g, schedule, args.trials, args.j, args.seed,
                                     workers=args.threads)
    elif args.mode == "kvariance":
        if args.seed is None:
            raise ValueError("kvariance mode needs --seed")
        table = k_variance_convergence(g, schedule, args.trials, args.k, args.seed,
                                       restarts=args.restarts, workers=args.threads)
    else:
        table = subspace_convergence(g, schedule, args.k)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in list(table.rows) + list(table.medians):
            writer.writerow([_csv_cell(row[c]) for c in table.columns])
    total = len(table.rows) + len(table.medians)
    print(f"mode={table.mode} rows={total} -> {args.output}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modspec",
        description="Spectral clustering, regularity certificates, and sampling experiments "
                    "for edge-weighted graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_analysis_flags(p):
        p.add_argument("file", help="TSV edge list")
        p.add_argument("--eps", action="append", type=float, default=[],
                       help="report the count of eigenvalues above this magnitude (repeatable)")
        p.add_argument("--top", type=int, default=None,
                       help="emit only the first N eigenvalues per ordering")
        p.add_argument("--largest-component", action="store_true",
                       help="restrict analysis to the largest connected component")

    p_spec = sub.add_parser("spectrum", help="eigenvalues of the normalized modularity matrix")
    add_analysis_flags(p_spec)
    p_spec.set_defaults(func=cmd_spectrum)

    p_clu = sub.add_parser("cluster", help="spectral clustering with quality functionals")
    add_analysis_flags(p_clu)
    p_clu.add_argument("--k", type=int, required=True, help="cluster count")
    p_clu.add_argument("--seed", type=int, required=True, help="k-means seed")
    p_clu.add_argument("--restarts", type=int, default=20)
    p_clu.set_defaults(func=cmd_cluster)

    p_reg = sub.add_parser("regularity", help="volume-regularity certificate per cluster pair")
    add_analysis_flags(p_reg)
    p_reg.add_argument("--k", type=int, required=True)
    p_reg.add_argument("--seed", type=int, required=True)
    p_reg.add_argument("--restarts", type=int, default=20)
    p_reg.add_argument("--exact-max", type=int, default=24,
                       help="enumerate a pair exactly when |A|+|B| is at most this")
    p_reg.add_argument("--samples", type=int, default=2000,
                       help="sampled subset pairs per large pair; 0 skips them")
    p_reg.set_defaults(func=cmd_regularity)

    p_gen = sub.add_parser("generate", help="write generated graphs as TSV files")
    p_gen.add_argument("kind", choices=["block", "classical"])
    p_gen.add_argument("--sizes", help="comma-separated block sizes")
    p_gen.add_argument("--p", help="block probability matrix, rows semicolon-separated")
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--name", choices=["complete", "complete_bipartite",
                                          "path", "two_cliques_bridge"])
    p_gen.add_argument("--n", type=int, default=None)
    p_gen.add_argument("--a", type=int, default=None)
    p_gen.add_argument("--b", type=int, default=None)
    p_gen.add_argument("--m", type=int, default=None)
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_con = sub.add_parser("converge", help="sampling and blow-up convergence sweeps")
    p_con.add_argument("file")
    p_con.add_argument("--mode", choices=["spectrum", "kvariance", "blowup"], required=True)
    p_con.add_argument("--schedule", required=True,
                       help="comma-separated sample sizes (or blow-up factors)")
    p_con.add_argument("--trials", type=int, default=50)
    p_con.add_argument("--j", type=int, default=1, help="eigenvalues tracked (spectrum mode)")
    p_con.add_argument("--k", type=int, default=2, help="cluster count (kvariance, blowup)")
    p_con.add_argument("--seed", type=int, default=None)
    p_con.add_argument("--restarts", type=int, default=20)
    p_con.add_argument("--threads", type=int, default=1)
    p_con.add_argument("-o", "--output", required=True)
    p_con.set_defaults(func=cmd_converge)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EigenFailure, InternalNumericalError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ModspecError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
