"""Desk-scale counterexample search for the average-degree strengthening.

The question: does replacing the minimum-degree floor d by an average
degree of at least d still force every forest of total size d and p trees
into any host with at least d+p vertices?  Each (graph, forest) instance
is judged by the exact oracle; the average-degree comparison is done on
integers (2m >= d*n), never floats.  Instances failing the hypothesis are
vacuous and never reach the oracle.

The minimum-degree restriction of the sweep is exactly the constructive
embedder's guarantee, so a candidate there is promoted to an assertion
failure instead of a report.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations_with_replacement, product

from .errors import CountingBreach
from .forest_core import Forest, tree_line
from .graph_core import Graph, graph6_encode, parse_graph6_stream
from .oracle import (
    BUDGET_EXCEEDED,
    FOUND,
    SearchBudget,
    enumerate_trees,
    oracle_embed,
)


class VerdictStatus(str, Enum):
    CONSISTENT = "consistent"
    COUNTEREXAMPLE_CANDIDATE = "counterexample_candidate"
    SKIPPED = "skipped"


@dataclass
class ConjectureVerdict:
    instance_id: str
    hypothesis_holds: bool
    embedding_found: bool
    status: VerdictStatus
    graph6: str
    forest: list[str]
    n: int
    d: int
    p: int
    min_degree: int
    budget: SearchBudget
    seed: object = None

    def to_record(self) -> dict:
        return {
            "id": self.instance_id,
            "hypothesis_holds": self.hypothesis_holds,
            "embedding_found": self.embedding_found,
            "status": self.status.value,
            "graph6": self.graph6,
            "forest": self.forest,
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "min_degree": self.min_degree,
            "budget": {"max_nodes": self.budget.max_nodes, "timeout": self.budget.timeout},
            "seed": self.seed,
        }


def check_conjecture(
    G: Graph,
    F: Forest,
    budget: SearchBudget | None = None,
    instance_id: str = "",
    seed=None,
) -> ConjectureVerdict:
    """Judge one instance; the oracle runs only when the hypothesis holds."""
    budget = budget or SearchBudget()
    n, d, p = G.n, F.d, F.p
    avg_ok = 2 * G.edge_count() >= d * n
    hypothesis = avg_ok and n >= d + p
    md = min(G.deg) if n else 0
    g6 = graph6_encode(G) if n < 63 else ""
    forest_enc = [tree_line(t) for t in F.trees]
    if not hypothesis:
        return ConjectureVerdict(
            instance_id, False, False, VerdictStatus.CONSISTENT,
            g6, forest_enc, n, d, p, md, budget, seed,
        )
    res = oracle_embed(G, F, budget)
    if res.status == FOUND:
        status, found = VerdictStatus.CONSISTENT, True
    elif res.status == BUDGET_EXCEEDED:
        status, found = VerdictStatus.SKIPPED, False
    else:
        status, found = VerdictStatus.COUNTEREXAMPLE_CANDIDATE, False
    return ConjectureVerdict(
        instance_id, True, found, status, g6, forest_enc, n, d, p, md, budget, seed
    )


# ---------------------------------------------------------------------------
# forest enumeration up to isomorphism


def _partitions_desc(total: int, parts: int):
    """Partitions of `total` into exactly `parts` non-negative descending
    parts, in decreasing lexicographic order."""

    def rec(remaining: int, parts_left: int, cap: int):
        if parts_left == 0:
            if remaining == 0:
                yield ()
            return
        hi = min(cap, remaining)
        for first in range(hi, -1, -1):
            if first * parts_left < remaining:
                break
            for tail in rec(remaining - first, parts_left - 1, first):
                yield (first,) + tail

    yield from rec(total, parts, total)


def enumerate_forests(d_values, p_values, max_total: int | None = None) -> list[Forest]:
    """All non-isomorphic forests with the given total sizes and tree counts.

    For each (d, p), partitions of d into p descending sizes are expanded
    into multisets of non-isomorphic trees of those sizes.
    """
    forests = []
    for d in d_values:
        for p in p_values:
            if max_total is not None and d + p > max_total:
                continue
            for sizes in _partitions_desc(d, p):
                groups = []
                run_size = None
                run = 0
                for a in sizes:
                    if a == run_size:
                        run += 1
                    else:
                        if run:
                            groups.append((run_size, run))
                        run_size, run = a, 1
                if run:
                    groups.append((run_size, run))
                choice_sets = [
                    list(combinations_with_replacement(enumerate_trees(a + 1), r))
                    for a, r in groups
                ]
                for combo in product(*choice_sets):
                    trees = [t for group in combo for t in group]
                    forests.append(Forest(trees))
    return forests


# ---------------------------------------------------------------------------
# the sweep


@dataclass
class SweepReport:
    total: int = 0
    consistent: int = 0
    skipped: int = 0
    vacuous: int = 0
    candidates: list[dict] = field(default_factory=list)

    def absorb(self, record: dict):
        self.total += 1
        status = record["status"]
        if not record["hypothesis_holds"]:
            self.vacuous += 1
        if status == VerdictStatus.CONSISTENT.value:
            self.consistent += 1
        elif status == VerdictStatus.SKIPPED.value:
            self.skipped += 1
        else:
            self.candidates.append(record)

    def to_jsonable(self) -> dict:
        return {
            "total": self.total,
            "consistent": self.consistent,
            "skipped": self.skipped,
            "vacuous": self.vacuous,
            "counterexample_candidates": self.candidates,
        }


def _judge_chunk(args):
    g6_lines, forests_enc, budget_tuple, delta_restricted = args
    from .forest_core import parse_tree_line
    from .graph_core import graph6_decode

    budget = SearchBudget(*budget_tuple)
    forests = [Forest([parse_tree_line(line) for line in enc]) for enc in forests_enc]
    out = []
    for gi, line in g6_lines:
        G = graph6_decode(line)
        md = min(G.deg) if G.n else 0
        for fi, F in enumerate(forests):
            if delta_restricted and md < F.d:
                continue
            verdict = check_conjecture(G, F, budget, instance_id=f"g{gi}:f{fi}")
            out.append(verdict.to_record())
    return out


def sweep(
    graphs,
    forests,
    budget: SearchBudget | None = None,
    jobs: int = 1,
    on_verdict=None,
    delta_restricted: bool = False,
) -> SweepReport:
    """Judge every (graph, forest) pair; order-independent aggregation.

    `graphs` is an iterable of (index, graph6-line) pairs (see
    ``iter_graph6_corpus``); `forests` a list of Forest.  With
    delta_restricted=True only pairs meeting the minimum-degree floor are
    judged, and any candidate raises CountingBreach since the embedder
    guarantees that case.  Candidates whose instance meets the
    minimum-degree floor are likewise promoted to CountingBreach in
    unrestricted sweeps.
    """
    budget = budget or SearchBudget()
    report = SweepReport()
    forests = list(forests)
    forests_enc = [[tree_line(t) for t in F.trees] for F in forests]
    graph_items = list(graphs)
    chunks = []
    if jobs <= 1:
        chunk_inputs = [graph_items]
    else:
        size = max(1, (len(graph_items) + jobs - 1) // jobs)
        chunk_inputs = [
            graph_items[i : i + size] for i in range(0, len(graph_items), size)
        ]
    args = [
        (chunk, forests_enc, (budget.max_nodes, budget.timeout), delta_restricted)
        for chunk in chunk_inputs
    ]
    if jobs <= 1:
        chunks = [_judge_chunk(a) for a in args]
    else:
        with multiprocessing.Pool(jobs) as pool:
            chunks = pool.map(_judge_chunk, args)
    for chunk in chunks:
        for record in chunk:
            if record["status"] == VerdictStatus.COUNTEREXAMPLE_CANDIDATE.value:
                if delta_restricted or record["min_degree"] >= record["d"]:
                    raise CountingBreach(
                        "embedding missing although the minimum-degree floor holds: "
                        f"{record['id']} graph6={record['graph6']} forest={record['forest']}"
                    )
            report.absorb(record)
            if on_verdict is not None:
                on_verdict(record)
    report.candidates.sort(key=lambda r: r["id"])
    return report


def iter_graph6_corpus(text: str):
    """(index, graph6-line) pairs from corpus text, one graph per line."""
    for i, (_no, line, _G) in enumerate(parse_graph6_stream(text)):
        yield i, line
