"""Command-line interface.

Subcommands: embed, verify, gen, oracle, conjecture, bench.  Exit codes:
0 success, 1 input error, 2 hypothesis violation, 3 internal assertion
failure, 4 search budget exceeded.

Instance files are JSON documents:

    {
      "graph":  {"format": "edgelist" | "dimacs" | "graph6", "data": "..."},
      "forest": [ [[0,1],[1,2]], [], "0-1" ],
      "meta":   {"seed": ..., "spec": {...}}
    }

Each forest entry is one tree, either a list of [u, v] edges or an
``u-v,u-v`` string; an empty list or string is a single-vertex tree.
The environment variable FORESTWEAVE_BUDGET ("NODES" or "NODES:SECONDS")
overrides the default oracle budget.

``bench --csv`` writes the timing table and renders a log-log figure of
median embed time against n next to it (same stem, ``.png``).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from .conjecture_lab import enumerate_forests, iter_graph6_corpus, sweep
from .embedder import Embedding, embed_forest, verify_embedding
from .errors import (
    ForestweaveError,
    HypothesisViolation,
    InfeasibleSpec,
    InternalLogicError,
    ParseError,
)
from .forest_core import Forest, Tree, parse_tree_line
from .generators import GraphModel, InstanceSpec, gen_instance
from .graph_core import Graph, GraphFormat, parse_graph, serialize_graph
from .oracle import BUDGET_EXCEEDED, FOUND, SearchBudget, count_embeddings, oracle_embed

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_HYPOTHESIS = 2
EXIT_INTERNAL = 3
EXIT_BUDGET = 4


def _dump(doc: dict, compact: bool) -> str:
    if compact:
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return json.dumps(doc, sort_keys=True, indent=2)


def _tree_from_entry(entry) -> Tree:
    if isinstance(entry, str):
        return parse_tree_line(entry)
    edges = [tuple(e) for e in entry]
    if not edges:
        return Tree(1, [])
    k = max(max(u, v) for u, v in edges) + 1
    return Tree(k, edges)


def load_instance(path: str) -> tuple[Graph, Forest, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        gspec = doc["graph"]
        G = parse_graph(gspec["data"], GraphFormat(gspec["format"]))
        F = Forest([_tree_from_entry(t) for t in doc["forest"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed instance file: {exc}") from exc
    return G, F, doc.get("meta", {})


def instance_document(G: Graph, F: Forest, meta: dict | None = None) -> dict:
    return {
        "graph": {
            "format": GraphFormat.EDGE_LIST.value,
            "data": serialize_graph(G, GraphFormat.EDGE_LIST),
        },
        "forest": [[list(e) for e in sorted(t.edge_set())] for t in F.trees],
        "meta": meta or {},
    }


def budget_from_env(args=None) -> SearchBudget:
    nodes = getattr(args, "max_nodes", None) if args else None
    timeout = getattr(args, "timeout", None) if args else None
    env = os.environ.get("FORESTWEAVE_BUDGET")
    if env:
        parts = env.split(":")
        try:
            if nodes is None:
                nodes = int(parts[0])
            if timeout is None and len(parts) > 1:
                timeout = float(parts[1])
        except ValueError as exc:
            raise ParseError(f"bad FORESTWEAVE_BUDGET {env!r}") from exc
    default = SearchBudget()
    return SearchBudget(
        max_nodes=nodes if nodes is not None else default.max_nodes,
        timeout=timeout if timeout is not None else default.timeout,
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_embed(args) -> int:
    G, F, _meta = load_instance(args.instance)
    emb, cert = embed_forest(G, F)
    check = verify_embedding(G, F, emb)
    if not check:
        raise InternalLogicError(f"self-check failed: {check.violations}")
    doc = {
        "status": "ok",
        "n": G.n,
        "d": F.d,
        "p": F.p,
        "maps": emb.to_lists(),
    }
    if args.certificate:
        doc["certificate"] = cert.to_jsonable()["steps"]
    print(_dump(doc, args.json))
    return EXIT_OK


def cmd_verify(args) -> int:
    G, F, _meta = load_instance(args.instance)
    with open(args.embedding, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        emb = Embedding.from_lists(doc["maps"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed embedding file: {exc}") from exc
    result = verify_embedding(G, F, emb)
    print(_dump({"ok": result.ok, "violations": result.violations}, args.json))
    return EXIT_OK if result.ok else EXIT_INPUT


def cmd_gen(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int.from_bytes(os.urandom(8), "little")
    sizes = _parse_int_list(args.sizes)
    spec = InstanceSpec(args.n, tuple(sizes), GraphModel(args.model), seed)
    G, F = gen_instance(spec)
    doc = instance_document(G, F, meta={"seed": seed, "spec": spec.to_jsonable()})
    text = _dump(doc, args.json)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(_dump({"written": args.output, "seed": seed}, args.json))
    else:
        print(text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    G, F, _meta = load_instance(args.instance)
    budget = budget_from_env(args)
    if args.count:
        res = count_embeddings(G, F, budget)
        doc = {"status": res.status, "count": res.count, "nodes": res.nodes}
        print(_dump(doc, args.json))
        return EXIT_BUDGET if res.status == BUDGET_EXCEEDED else EXIT_OK
    res = oracle_embed(G, F, budget)
    doc = {"status": res.status, "nodes": res.nodes}
    if res.status == FOUND:
        doc["maps"] = res.embedding.to_lists()
    print(_dump(doc, args.json))
    return EXIT_BUDGET if res.status == BUDGET_EXCEEDED else EXIT_OK


def cmd_conjecture(args) -> int:
    budget = budget_from_env(args)
    with open(args.corpus, "r", encoding="utf-8") as fh:
        corpus = list(iter_graph6_corpus(fh.read()))
    d_values = range(args.d_min, args.d_max + 1)
    p_values = range(args.p_min, args.p_max + 1)
    forests = enumerate_forests(d_values, p_values, max_total=args.max_total)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout

    def write_verdict(record):
        out.write(json.dumps(record, sort_keys=True) + "\n")

    try:
        report = sweep(
            corpus,
            forests,
            budget,
            jobs=args.jobs,
            on_verdict=write_verdict,
            delta_restricted=args.delta_restricted,
        )
        summary = {"summary": report.to_jsonable(), "forests": len(forests), "graphs": len(corpus)}
        out.write(json.dumps(summary, sort_keys=True) + "\n")
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _parse_int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad integer list {text!r}") from exc


def fit_loglog_slope(ns, ts) -> float | None:
    """Least-squares slope of log(t) against log(n)."""
    pts = [(math.log(n), math.log(t)) for n, t in zip(ns, ts) if t > 0]
    if len(pts) < 2:
        return None
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    if sxx == 0:
        return None
    sxy = sum((x - mx) * (y - my) for x, y in pts)
    return sxy / sxx


def run_bench(n_values, d, p, seed, repeat, model=GraphModel.MIN_DEGREE_PAD):
    """Rows (n, d, p, seed, millis) plus per-n median milliseconds.

    Sizes split d as evenly as possible across p trees.  The same
    generated instance is timed `repeat` times.
    """
    base = d // p
    extra = d % p
    sizes = tuple(base + (1 if i < extra else 0) for i in range(p))
    rows = []
    medians = []
    for n in n_values:
        spec = InstanceSpec(n, sizes, model, seed)
        G, F = gen_instance(spec)
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            emb, _cert = embed_forest(G, F)
            dt = (time.perf_counter() - t0) * 1000.0
            times.append(dt)
            rows.append({"n": n, "d": d, "p": p, "seed": seed, "millis": round(dt, 4)})
        if not verify_embedding(G, F, emb):
            raise InternalLogicError("bench embedding failed verification")
        times.sort()
        medians.append((n, times[len(times) // 2], times[0], times[-1]))
    return rows, medians


def render_bench_figure(path: str, medians, slope) -> None:
    """Log-log scatter of median embed time against n, with the fit line."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ns = [m[0] for m in medians]
    ts = [m[1] for m in medians]
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.loglog(ns, ts, "o-", label="median embed time")
    if slope is not None and len(ns) >= 2 and all(t > 0 for t in ts):
        anchor = math.log(ts[0]) - slope * math.log(ns[0])
        fit = [math.exp(anchor + slope * math.log(n)) for n in ns]
        ax.loglog(ns, fit, "--", label=f"fit slope {slope:.2f}")
    ax.set_xlabel("host vertices n")
    ax.set_ylabel("embed time (ms)")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_bench(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int.from_bytes(os.urandom(8), "little")
    n_values = _parse_int_list(args.n)
    rows, medians = run_bench(
        n_values, args.d, args.p, seed, args.repeat, GraphModel(args.model)
    )
    header = "n,d,p,seed,millis"
    csv_lines = [header] + [
        f"{r['n']},{r['d']},{r['p']},{r['seed']},{r['millis']}" for r in rows
    ]
    csv_text = "\n".join(csv_lines) + "\n"
    slope = fit_loglog_slope([m[0] for m in medians], [m[1] for m in medians])
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        plot_path = args.plot or os.path.splitext(args.csv)[0] + ".png"
        if not args.no_plot:
            render_bench_figure(plot_path, medians, slope)
    else:
        sys.stdout.write(csv_text)
        if args.plot and not args.no_plot:
            render_bench_figure(args.plot, medians, slope)
    summary = {
        "seed": seed,
        "slope": slope,
        "medians": [
            {"n": n, "median_ms": round(med, 4), "min_ms": round(lo, 4), "max_ms": round(hi, 4)}
            for n, med, lo, hi in medians
        ],
    }
    print(_dump(summary, args.json))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="forestweave",
        description="Forest embedding under a minimum-degree floor: embedder, "
        "oracle, generators, conjecture sweeps, benchmarks.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="compact canonical JSON output")

    p = sub.add_parser("embed", help="embed the instance's forest into its graph")
    p.add_argument("instance")
    p.add_argument("--certificate", action="store_true", help="include the route certificate")
    add_json(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="check an embedding produced by `embed`")
    p.add_argument("instance")
    p.add_argument("--embedding", required=True, help="JSON file with a `maps` field")
    add_json(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sizes", required=True, help="comma-separated tree sizes, e.g. 3,2,1")
    p.add_argument("--model", default=GraphModel.MIN_DEGREE_PAD.value,
                   choices=[m.value for m in GraphModel])
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed; auto-chosen and reported when omitted")
    p.add_argument("-o", "--output", default=None)
    add_json(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="exact backtracking search on the instance")
    p.add_argument("instance")
    p.add_argument("--count", action="store_true", help="count embeddings instead")
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--timeout", type=float, default=None)
    add_json(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("conjecture", help="sweep a graph6 corpus against enumerated forests")
    p.add_argument("--corpus", required=True, help="graph6 file, one graph per line")
    p.add_argument("--d-min", type=int, default=0)
    p.add_argument("--d-max", type=int, default=6)
    p.add_argument("--p-min", type=int, default=1)
    p.add_argument("--p-max", type=int, default=7)
    p.add_argument("--max-total", type=int, default=7, help="cap on d+p")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--delta-restricted", action="store_true",
                   help="only judge pairs meeting the minimum-degree floor")
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--timeout", type=float, default=None)
    p.add_argument("--out", default=None, help="write NDJSON verdicts here instead of stdout")
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("bench", help="time embed_forest across host sizes")
    p.add_argument("--n", required=True, help="comma-separated host sizes")
    p.add_argument("--d", type=int, default=16)
    p.add_argument("--p", type=int, default=4)
    p.add_argument("--model", default=GraphModel.MIN_DEGREE_PAD.value,
                   choices=[m.value for m in GraphModel])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed; auto-chosen and reported when omitted")
    p.add_argument("--csv", default=None, help="write the timing table here")
    p.add_argument("--plot", default=None, help="figure path (default: csv stem + .png)")
    p.add_argument("--no-plot", action="store_true")
    add_json(p)
    p.set_defaults(func=cmd_bench)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisViolation as exc:
        print(_dump({"status": "hypothesis_violation", "reason": exc.reason,
                     "detail": exc.detail}, getattr(args, "json", False)))
        return EXIT_HYPOTHESIS
    except InternalLogicError as exc:
        print(_dump({"status": "internal_assertion", "error": type(exc).__name__,
                     "detail": str(exc)}, getattr(args, "json", False)))
        return EXIT_INTERNAL
    except (ParseError, InfeasibleSpec, ForestweaveError, json.JSONDecodeError, OSError) as exc:
        print(_dump({"status": "input_error", "error": type(exc).__name__,
                     "detail": str(exc)}, getattr(args, "json", False)))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
