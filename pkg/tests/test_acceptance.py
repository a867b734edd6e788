"""End-to-end acceptance suite.

Each criterion prints one PASS/FAIL line (visible with ``pytest -s``).
Run as: ``pytest tests/test_acceptance.py -v -s``.
"""

import hashlib
import json
import random
import time

import pytest

from _support import naive_exists
from forestweave.bitset import bits
from forestweave.cli import fit_loglog_slope, run_bench
from forestweave.conjecture_lab import VerdictStatus, check_conjecture, sweep
from forestweave.embedder import embed_forest, greedy_extend, verify_embedding
from forestweave.errors import InternalLogicError
from forestweave.forest_core import Forest
from forestweave.generators import (
    GraphModel,
    InstanceSpec,
    Stuck,
    find_naive_failure,
    gen_instance,
    naive_sequential_embed,
)
from forestweave.graph_core import graph6_decode, min_degree
from forestweave.oracle import FOUND, SearchBudget, oracle_embed

MASTER_SEED = 20260810
SUITE1_COUNT = 10_000
SUITE1_MODELS = [GraphModel.MIN_DEGREE_PAD, GraphModel.NEAR_REGULAR, GraphModel.TIGHT_ORDER]

# pinned by a find_naive_failure run (seed=2): minimum-degree 7 host on 10
# vertices where the no-backtracking pass strands the third tree
NAIVE_FAILURE_GRAPH6 = "I^t{~^uyw"
NAIVE_FAILURE_FOREST = "0-2,1-2\n0-1,0-2\n0-2,1-2,2-3\n"


def _report(num: int, ok: bool, detail: str):
    print(f"ACCEPTANCE criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def suite1_spec(i: int) -> InstanceSpec:
    rng = random.Random(f"{MASTER_SEED}:{i}")
    model = SUITE1_MODELS[i % 3]
    p = 1 + rng.randrange(6)
    sizes = []
    for _ in range(p):
        cap = 20 - sum(sizes)
        sizes.append(rng.randrange(0, min(7, cap + 1)) if cap > 0 else 0)
    d = sum(sizes)
    if model is GraphModel.TIGHT_ORDER:
        n = d + p
    else:
        n = min(60, max(d + p, d + 1) + rng.randrange(0, 25))
    return InstanceSpec(n, tuple(sizes), model, seed=rng.getrandbits(48))


def _run_suite1(collect_contexts: bool):
    """One full pass over the 10,000 instances.

    Returns (sha256 digest over canonical embeddings+certificates,
    failures, [(G, context)] if collecting, internal_errors)."""
    digest = hashlib.sha256()
    failures = []
    contexts = []
    internal_errors = 0
    for i in range(SUITE1_COUNT):
        spec = suite1_spec(i)
        G, F = gen_instance(spec)
        sink = (lambda ctx, G=G: contexts.append((G, ctx))) if collect_contexts else None
        try:
            emb, cert = embed_forest(G, F, on_phase_two=sink)
        except InternalLogicError as exc:
            internal_errors += 1
            failures.append((i, f"internal: {exc}"))
            continue
        if not verify_embedding(G, F, emb):
            failures.append((i, "verification failed"))
            continue
        payload = json.dumps(
            {"i": i, "maps": emb.to_lists(), "cert": cert.steps},
            sort_keys=True,
            separators=(",", ":"),
        )
        digest.update(payload.encode())
    return digest.hexdigest(), failures, contexts, internal_errors


@pytest.fixture(scope="module")
def suite1():
    t0 = time.perf_counter()
    digest, failures, contexts, internal_errors = _run_suite1(collect_contexts=True)
    elapsed = time.perf_counter() - t0
    return {
        "digest": digest,
        "failures": failures,
        "contexts": contexts,
        "internal_errors": internal_errors,
        "elapsed": elapsed,
    }


def test_criterion_1_randomized_guarantee_suite(suite1):
    ok = not suite1["failures"]
    _report(
        1,
        ok,
        f"{SUITE1_COUNT - len(suite1['failures'])}/{SUITE1_COUNT} random instances "
        f"embedded and verified in {suite1['elapsed']:.1f}s"
        + (f"; first failures: {suite1['failures'][:3]}" if suite1["failures"] else ""),
    )


def test_criterion_2_exhaustive_oracle_equivalence(atlas_corpus, small_forests):
    t0 = time.perf_counter()
    checked = 0
    problems = []
    budget = SearchBudget()
    for line, G in atlas_corpus:
        md = min(G.deg)
        for F in small_forests:
            if md < F.d or G.n < F.d + F.p:
                continue
            checked += 1
            try:
                emb, _cert = embed_forest(G, F)
            except Exception as exc:  # noqa: BLE001 - collected for the report
                problems.append((line, F.sizes, f"embed raised {exc}"))
                continue
            if not verify_embedding(G, F, emb):
                problems.append((line, F.sizes, "verify failed"))
                continue
            res = oracle_embed(G, F, budget)
            if res.status != FOUND:
                problems.append((line, F.sizes, f"oracle {res.status}"))
    elapsed = time.perf_counter() - t0
    _report(
        2,
        not problems,
        f"{checked} hypothesis-satisfying (graph, forest) pairs over the "
        f"exhaustive n<=7 corpus agreed with the oracle in {elapsed:.1f}s"
        + (f"; first: {problems[:3]}" if problems else ""),
    )


def test_criterion_3_route_invariant_suites(suite1):
    problems = []

    # greedy extension under the degree floor: 5,000 random
    # connected-prefix cases must never get stuck
    from test_embedder import random_prefix_case, valid_tree_map

    rng = random.Random(f"{MASTER_SEED}:prefix-cases")
    for case in range(5000):
        G, T, partial = random_prefix_case(rng)
        try:
            out = greedy_extend(G, T, partial)
            valid_tree_map(G, T, out)
        except Exception as exc:  # noqa: BLE001
            problems.append(f"prefix case {case}: {exc}")
            if len(problems) > 3:
                break

    # the no-universal branch re-check and the counting assertions are
    # enforced inside embed_forest; suite 1 must have seen zero failures
    if suite1["internal_errors"]:
        problems.append(f"{suite1['internal_errors']} internal assertion failures in suite 1")

    # the class-count floor and the degree-split bound, re-verified from
    # outside on every instrumented phase-two context (fallback fixture
    # appended below)
    contexts = list(suite1["contexts"])
    contexts.append(_fallback_fixture_context())
    fallback_seen = 0
    for G, ctx in contexts:
        if ctx.q1 + ctx.q2 + ctx.q3 + ctx.q4 != ctx.p - 1:
            problems.append(f"class counts do not sum to p-1: {ctx}")
        if ctx.Y.bit_count() != ctx.p - 2:
            problems.append(f"|Y| != p-2: {ctx}")
        if ctx.q1 < 1 + ctx.q4:
            problems.append(f"q1 floor violated: {ctx}")
        recomputed = _reclassify(ctx)
        if recomputed != (ctx.q1, ctx.q2, ctx.q3, ctx.q4):
            problems.append(f"independent reclassification mismatch: {ctx}")
        if ctx.fallback_min_degree is not None:
            fallback_seen += 1
            for s in bits(ctx.S):
                in_k = (G.adj[s] & ctx.K).bit_count()
                in_xy = (G.adj[s] & (ctx.X | ctx.Y)).bit_count()
                in_s = (G.adj[s] & ctx.S).bit_count()
                if in_k != 0:
                    problems.append(f"fallback vertex {s} touches the clique")
                if in_s < ctx.d - in_k - in_xy:
                    problems.append(f"degree split undercounts S at {s}")
                if in_s < ctx.a + ctx.q1 - ctx.q4:
                    problems.append(f"S-degree bound violated at {s}")
            if ctx.fallback_min_degree < ctx.a + 1:
                problems.append(f"fallback min degree {ctx.fallback_min_degree} < a+1")

    _report(
        3,
        not problems,
        f"route invariants: 5000 greedy extensions never stuck, "
        f"{len(contexts)} phase-two contexts re-verified "
        f"({fallback_seen} with the greedy-in-S fallback), zero internal assertions"
        + (f"; first: {problems[:3]}" if problems else ""),
    )


def _reclassify(ctx):
    counts = [0, 0, 0, 0]
    for img in ctx.tree_images:
        inside = (img & ctx.X).bit_count()
        outside = (img & ~ctx.X).bit_count()
        if outside == 0:
            counts[0] += 1
        elif inside == 0:
            counts[3] += 1
        elif inside == 1:
            counts[2] += 1
        else:
            counts[1] += 1
    return tuple(counts)


def _fallback_fixture_context():
    """Two disjoint complete blocks force the greedy-in-S route."""
    from forestweave.forest_core import Tree
    from forestweave.graph_core import Graph

    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    edges += [(i, j) for i in range(4, 8) for j in range(i + 1, 8)]
    G = Graph.from_edges(8, edges)
    F = Forest([Tree(3, [(0, 1), (1, 2)]), Tree(2, [(0, 1)])])
    got = []
    emb, _ = embed_forest(G, F, on_phase_two=lambda c: got.append(c))
    assert verify_embedding(G, F, emb)
    (ctx,) = got
    assert ctx.fallback_min_degree is not None
    return G, ctx


def test_criterion_4_naive_failure_exhibit():
    t0 = time.perf_counter()
    # fixture replay: the pinned instance still exhibits the gap
    G = graph6_decode(NAIVE_FAILURE_GRAPH6)
    F = Forest.from_text(NAIVE_FAILURE_FOREST)
    hypothesis = G.n >= F.d + F.p and min_degree(G) >= F.d
    stuck = naive_sequential_embed(G, F)
    emb, _cert = embed_forest(G, F)
    replay_ok = hypothesis and isinstance(stuck, Stuck) and bool(verify_embedding(G, F, emb))
    replay_time = time.perf_counter() - t0

    # fresh search within a small slice of the allowed budget
    t1 = time.perf_counter()
    exhibit = find_naive_failure(SearchBudget(max_nodes=1_000_000, timeout=240), seed=2)
    search_time = time.perf_counter() - t1
    search_ok = exhibit is not None
    if search_ok:
        res = naive_sequential_embed(exhibit.graph, exhibit.forest)
        emb2, _ = embed_forest(exhibit.graph, exhibit.forest)
        search_ok = isinstance(res, Stuck) and bool(
            verify_embedding(exhibit.graph, exhibit.forest, emb2)
        )
    _report(
        4,
        replay_ok and search_ok,
        f"fixture replay {replay_time * 1000:.0f}ms (stuck={stuck}), fresh search found "
        f"an exhibit after {exhibit.tries if exhibit else '-'} tries in {search_time:.2f}s",
    )


def test_criterion_5_quadratic_bench():
    t0 = time.perf_counter()
    _rows, medians = run_bench([2000, 4000, 8000, 16000], 16, 4, seed=MASTER_SEED, repeat=5)
    slope = fit_loglog_slope([m[0] for m in medians], [m[1] for m in medians])
    elapsed = time.perf_counter() - t0
    ok = slope is not None and slope <= 2.3
    med_text = ", ".join(f"n={n}: {med:.1f}ms" for n, med, _lo, _hi in medians)
    _report(5, ok, f"log-log slope {slope:.3f} <= 2.3 ({med_text}) in {elapsed:.1f}s")


def test_criterion_6_conjecture_sweep(atlas_corpus, small_forests):
    """As stated this criterion expects zero counterexample candidates.

    The sweep is itself the oracle here, and it finds genuine candidates:
    the average-degree variant fails at n = 6 already (complete graph on 5
    vertices plus an isolated vertex versus three disjoint edges, among
    others).  Every candidate below is certified non-embeddable by the
    independent all-injections enumerator before being published, and the
    degree-floor-restricted sub-sweep stays at zero unconditionally, so
    the red result reports a property of the conjecture, not of the code.
    """
    t0 = time.perf_counter()
    corpus = [(i, line) for i, (line, _G) in enumerate(atlas_corpus)]
    report = sweep(corpus, small_forests)
    # the sweep itself promotes any candidate meeting the degree floor to
    # CountingBreach; the restricted pass re-checks the proved case
    restricted = sweep(corpus, small_forests, delta_restricted=True)
    elapsed = time.perf_counter() - t0

    assert not restricted.candidates, "degree-floor sub-sweep must stay at zero"
    assert report.skipped == 0 and restricted.skipped == 0, "searches must be complete"

    from forestweave.forest_core import parse_tree_line

    certified = []
    for cand in report.candidates:
        G = graph6_decode(cand["graph6"])
        F = Forest([parse_tree_line(t) for t in cand["forest"]])
        assert not naive_exists(G, F), f"oracle/enumerator disagreement on {cand['id']}"
        certified.append((cand["graph6"], cand["forest"]))
    for g6, forest in certified:
        print(f"    counterexample candidate: graph6={g6!r} forest={forest}")

    ok = not report.candidates
    _report(
        6,
        ok,
        f"{report.total} average-degree instances, {restricted.total} floor-restricted "
        f"instances (zero candidates there), complete searches in {elapsed:.1f}s; "
        f"{len(certified)} certified counterexample candidates to the average-degree "
        f"variant: {[g6 for g6, _ in certified]}",
    )


def test_criterion_7_determinism(suite1):
    t0 = time.perf_counter()
    digest2, failures, _contexts, _errors = _run_suite1(collect_contexts=False)
    elapsed = time.perf_counter() - t0
    ok = not failures and digest2 == suite1["digest"]
    _report(
        7,
        ok,
        f"second pass over all {SUITE1_COUNT} instances reproduced byte-identical "
        f"embeddings and certificates (sha256 {digest2[:12]}...) in {elapsed:.1f}s",
    )
