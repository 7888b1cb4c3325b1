"""Command-line front end.

Exit codes: 0 success, 1 verification or claim failure, 2 usage or input
error, 3 solver resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .claims import (
    ClaimStatus,
    SolverOptions,
    conjecture_set,
    predicted_dimension,
    run_all_claims,
    sweep_specs,
    table1_predict,
)
from .generators import Family, GridSpec, InvalidGridSpec, build, is_vertex
from .graph import DiagGraph, DisconnectedGraphError, all_pairs, average_distance, degree_multiset, diameter, label_text
from .resolver import SolveResult, Status, exact_dimension, greedy_upper_bound, is_resolving

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

CLAIM_COLUMNS = ["claim_id", "family", "m", "n", "expected", "computed", "status"]
CONJECTURE_COLUMNS = ["family", "m", "n", "predicted", "set_resolves", "exact", "status"]
SURVEY_COLUMNS = [
    "family", "m", "n", "vertices", "edges", "diameter", "degree_multiset", "dim",
    "avg_distance_exact", "avg_distance_formula", "elapsed_ms",
]


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization

def to_edgelist(g: DiagGraph) -> str:
    lines = sorted(f"{label_text(g.coords[u])} {label_text(g.coords[v])}" for u, v in g.edges())
    return "".join(line + "\n" for line in lines)


def _dot_name(label) -> str:
    text = label_text(label).replace(",", "_").replace("-", "m")
    return f"v_{text}"


def to_dot(g: DiagGraph, name: str = "G") -> str:
    out = [f"graph {name} {{"]
    out += [f"  {_dot_name(c)};" for c in g.coords]
    out += [f"  {_dot_name(g.coords[u])} -- {_dot_name(g.coords[v])};" for u, v in g.edges()]
    out.append("}")
    return "\n".join(out) + "\n"


def to_json(g: DiagGraph, spec: GridSpec | None = None) -> str:
    doc = {
        "family": spec.family.value if spec else None,
        "m": spec.m if spec else None,
        "n": spec.n if spec else None,
        "vertices": [list(c) if isinstance(c, tuple) else c for c in g.coords],
        "edges": [[u, v] for u, v in g.edges()],
    }
    return json.dumps(doc) + "\n"


def _parse_label(token: str):
    parts = token.strip().strip("()").split(",")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        return token


def parse_graph(text: str) -> DiagGraph:
    """Read a graph from the JSON schema written by ``gen`` or from an edge list."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        labels = [tuple(v) if isinstance(v, list) else v for v in doc["vertices"]]
        edges = [(labels[a], labels[b]) for a, b in doc["edges"]]
        return DiagGraph.from_edges(labels, edges)
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ValueError(f"line {lineno}: expected two endpoints, got {len(tokens)}")
        edges.append((tokens[0], tokens[1]))
    labels = [_parse_label(t) for e in edges for t in e]
    if not all(isinstance(x, tuple) for x in labels):
        # mixed or opaque labels are kept verbatim
        return DiagGraph.from_edges([t for e in edges for t in e], edges)
    return DiagGraph.from_edges(labels, [(_parse_label(a), _parse_label(b)) for a, b in edges])


def write_table(rows: Sequence[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r[c] for c in columns} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({c: r[c] for c in columns})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument helpers

def _spec(family: str, m: int, n: int) -> GridSpec:
    try:
        return GridSpec(Family(family), m, n)
    except InvalidGridSpec as exc:
        raise UsageError(str(exc)) from None


def _int_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    return range(a, b + 1)


def _families(text: str) -> list[Family]:
    try:
        return [Family(f.strip()) for f in text.split(",") if f.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown family in {text!r}") from None


def _coord(text: str) -> tuple[int, int]:
    label = _parse_label(text)
    if not (isinstance(label, tuple) and len(label) == 2):
        raise argparse.ArgumentTypeError(f"expected x,y, got {text!r}")
    return label


def _parallel_map(fn: Callable, items: list, workers: int) -> list:
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _limit(value: float) -> float | None:
    return None if value <= 0 else value


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen(args, out) -> int:
    spec = _spec(args.family, args.m, args.n)
    g = build(spec)
    if args.format == "edgelist":
        out.write(to_edgelist(g))
    elif args.format == "dot":
        out.write(to_dot(g, f"{spec.family.value}_{spec.m}_{spec.n}"))
    else:
        out.write(to_json(g, spec))
    return EXIT_OK


def _result_record(g: DiagGraph, res: SolveResult, method: str) -> dict:
    return {
        "dim": res.dim,
        "basis": [label_text(g.coords[v]) for v in res.basis],
        "status": res.status.value,
        "method": method,
        "lower_bound": res.lower_bound,
        "upper_bound": res.upper_bound,
        "nodes_explored": res.nodes_explored,
        "elapsed_ms": round(res.elapsed * 1000, 3),
    }


def cmd_dim(args, out) -> int:
    if args.input:
        try:
            g = parse_graph(Path(args.input).read_text())
        except (OSError, ValueError, KeyError, IndexError) as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from None
    else:
        if args.family is None or args.m is None or args.n is None:
            raise UsageError("dim needs FAMILY M N or --input FILE")
        g = build(_spec(args.family, args.m, args.n))
    try:
        d = all_pairs(g)
    except DisconnectedGraphError as exc:
        raise UsageError(str(exc)) from None
    if args.greedy:
        start = time.monotonic()
        basis = greedy_upper_bound(d)
        res = SolveResult(len(basis), tuple(basis), Status.UPPER_BOUND_ONLY, 1 if len(basis) else 0,
                          len(basis), 0, time.monotonic() - start)
        method = "greedy"
    else:
        res = exact_dimension(g, d, max_k=args.max_k, time_limit=_limit(args.time_limit), node_limit=args.node_limit)
        method = "exact"
    rec = _result_record(g, res, method)
    if args.format == "json":
        out.write(json.dumps(rec) + "\n")
    elif args.format == "csv":
        rec = dict(rec, basis=" ".join(rec["basis"]))
        out.write(write_table([rec], list(rec), "csv"))
    else:
        out.write(f"dim: {res.dim}\n")
        out.write("basis: " + " ".join(f"({b})" for b in rec["basis"]) + "\n")
        out.write(f"status: {res.status.value}\n")
        out.write(f"bounds: {res.lower_bound}..{res.upper_bound}\n")
        out.write(f"nodes: {res.nodes_explored}\n")
        out.write(f"elapsed_ms: {rec['elapsed_ms']}\n")
    return EXIT_LIMIT if res.status is Status.TIMEOUT else EXIT_OK


def cmd_verify(args, out) -> int:
    spec = _spec(args.family, args.m, args.n)
    for c in args.landmarks:
        if not is_vertex(spec, c):
            raise UsageError(f"({label_text(c)}) is not a vertex of {spec}")
    if len(set(args.landmarks)) != len(args.landmarks):
        raise UsageError("duplicate landmark")
    g = build(spec)
    d = all_pairs(g)
    ok, witness = is_resolving(d, g.ids_of(args.landmarks))
    if args.format == "json":
        rec = {"resolving": ok,
               "witness": None if ok else [label_text(g.coords[w]) for w in witness]}
        out.write(json.dumps(rec) + "\n")
    elif ok:
        out.write("RESOLVING\n")
    else:
        a, b = (label_text(g.coords[w]) for w in witness)
        out.write(f"NOT RESOLVING\nwitness: ({a}) ({b})\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_check_paper(args, out) -> int:
    n_max = args.n_max if args.n_max is not None else 2 * args.m_max + 1
    specs = sweep_specs(args.families, args.m_max, n_max)
    opts = SolverOptions(_limit(args.time_limit), args.node_limit)
    reports = run_all_claims(specs, opts, workers=args.workers)
    out.write(write_table([r.as_row() for r in reports], CLAIM_COLUMNS, args.format))
    return EXIT_FAIL if any(r.status is ClaimStatus.FAIL for r in reports) else EXIT_OK


def _conjecture_row(task: tuple[GridSpec, SolverOptions]) -> dict:
    spec, opts = task
    g = build(spec)
    d = all_pairs(g)
    cs = conjecture_set(spec)
    resolves, _ = is_resolving(d, g.ids_of(cs.landmarks))
    res = exact_dimension(g, d, time_limit=opts.time_limit, node_limit=opts.node_limit)
    if res.exact:
        status = "agree" if res.dim == cs.predicted_dim else "disagree"
        exact = res.dim
    else:
        status, exact = "timeout", ""
    return {"family": spec.family.value, "m": spec.m, "n": spec.n, "predicted": cs.predicted_dim,
            "set_resolves": str(resolves and len(cs.landmarks) == cs.predicted_dim).lower(),
            "exact": exact, "status": status}


def cmd_conjecture(args, out) -> int:
    families = [Family.VG1, Family.VG2] if args.family == "both" else [Family(args.family)]
    specs = [s for s in sweep_specs(families, args.m_max, args.n_max, args.m_min, args.n_min)
             if s.n > 2 * s.m + 1]
    opts = SolverOptions(_limit(args.time_limit), args.node_limit)
    rows = _parallel_map(_conjecture_row, [(s, opts) for s in specs], args.workers)
    out.write(write_table(rows, CONJECTURE_COLUMNS, args.format))
    bad = any(r["set_resolves"] != "true" or r["status"] == "disagree" for r in rows)
    return EXIT_FAIL if bad else EXIT_OK


def _survey_row(task: tuple[GridSpec, SolverOptions, bool]) -> dict:
    spec, opts, timing = task
    start = time.monotonic()
    g = build(spec)
    d = all_pairs(g)
    res = exact_dimension(g, d, time_limit=opts.time_limit, node_limit=opts.node_limit)
    dim = str(res.dim) if res.exact else f"{res.status.value}[{res.lower_bound}..{res.upper_bound}]"
    pred = table1_predict(spec)
    avg = str(average_distance(g, d)) if g.vertex_count >= 2 else ""
    formula = str(pred.avg_distance) if pred.avg_distance is not None else ""
    elapsed = f"{(time.monotonic() - start) * 1000:.1f}" if timing else ""
    return {
        "family": spec.family.value, "m": spec.m, "n": spec.n, "vertices": g.vertex_count,
        "edges": g.edge_count, "diameter": diameter(g, d),
        "degree_multiset": ";".join(f"{k}:{v}" for k, v in degree_multiset(g).items()),
        "dim": dim, "avg_distance_exact": avg, "avg_distance_formula": formula, "elapsed_ms": elapsed,
    }


def cmd_survey(args, out) -> int:
    families = args.families or []
    if args.family:
        families = families + args.family
    if not families:
        raise UsageError("survey needs a family")
    m_range = args.m
    n_range = args.n if args.n is not None else m_range
    specs = sorted({
        GridSpec(f, m, n) for f in families for m in m_range for n in n_range if GridSpec.is_valid(f, m, n)
    })
    opts = SolverOptions(_limit(args.time_limit), args.node_limit)
    rows = _parallel_map(_survey_row, [(s, opts, not args.no_timing) for s in specs], args.workers)
    out.write(write_table(rows, SURVEY_COLUMNS, args.format))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _add_solver_flags(p: argparse.ArgumentParser, time_limit: float = 60.0) -> None:
    p.add_argument("--time-limit", type=float, default=time_limit,
                   help="seconds per instance, 0 for none (default %(default)s)")
    p.add_argument("--node-limit", type=int, default=None, help="deterministic search-node cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="villarceau", description="Villarceau grid metric dimension toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    fam_choices = [f.value for f in Family]

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("family", choices=fam_choices)
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=["edgelist", "dot", "json"], default="edgelist")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dim", help="metric dimension of a generated or ingested graph")
    p.add_argument("family", nargs="?", choices=fam_choices)
    p.add_argument("m", nargs="?", type=int)
    p.add_argument("n", nargs="?", type=int)
    p.add_argument("--input", help="edge list or JSON graph file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--greedy", action="store_true")
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("verify", help="check whether landmarks resolve a generated graph")
    p.add_argument("family", choices=fam_choices)
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("landmarks", nargs="+", type=_coord, metavar="X,Y")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-paper", help="check every published claim over a parameter sweep")
    p.add_argument("--families", type=_families, default=list(Family))
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=None, help="default 2*m-max+1")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_check_paper)

    p = sub.add_parser("conjecture", help="test the conjectured dimension beyond the theorem range")
    p.add_argument("--family", choices=["vg1", "vg2", "both"], default="both")
    p.add_argument("--m-min", type=int, default=1)
    p.add_argument("--m-max", type=int, default=2)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("survey", help="structural parameters per instance")
    p.add_argument("family", nargs="?", type=_families, help="family or comma list")
    p.add_argument("m", type=_int_range, help="M or A..B")
    p.add_argument("n", nargs="?", type=_int_range, help="N or A..B (default: same as M)")
    p.add_argument("--families", type=_families, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="leave elapsed_ms empty for reproducible output")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_survey)
    return parser


def main(argv: Iterable[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"villarceau {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
