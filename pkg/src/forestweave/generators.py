"""Reproducible instance generation.

All randomness comes from Python's Mersenne Twister (``random.Random``),
which is stable across platforms and versions for the primitives used
here.  Streams are split per component by reseeding with the string
``f"{seed}/{stream}"`` so that, for example, the graph and the forest of
one instance are independent but each fully determined by the seed.

Graph models:

* ``min_degree_pad``: a sparse random seed graph, then repeatedly join
  the lowest-index minimum-degree vertex to a uniformly random
  non-neighbor until the degree floor d is met;
* ``near_regular``: a label-shuffled circulant of degree ~d plus a few
  random extra edges;
* ``disjoint_cliques``: disjoint copies of the complete graph on d+1
  vertices (n must be a multiple of d+1, otherwise the truncated block
  would fall below the degree floor);
* ``tight_order``: exactly d+p vertices; the complement of a random
  graph with maximum degree p-1, so the degree floor holds with no
  vertices to spare.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .embedder import Embedding, greedy_extend
from .errors import ExtensionStuck, InfeasibleSpec
from .forest_core import Forest, Tree, prufer_decode
from .graph_core import Graph
from .oracle import SearchBudget


class GraphModel(str, Enum):
    MIN_DEGREE_PAD = "min_degree_pad"
    NEAR_REGULAR = "near_regular"
    DISJOINT_CLIQUES = "disjoint_cliques"
    TIGHT_ORDER = "tight_order"


@dataclass(frozen=True)
class InstanceSpec:
    """Everything needed to regenerate one (graph, forest) instance."""

    n: int
    sizes: tuple[int, ...]
    model: GraphModel
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        object.__setattr__(self, "model", GraphModel(self.model))

    @property
    def d(self) -> int:
        return sum(self.sizes)

    @property
    def p(self) -> int:
        return len(self.sizes)

    def to_jsonable(self) -> dict:
        return {
            "n": self.n,
            "sizes": list(self.sizes),
            "model": self.model.value,
            "seed": self.seed,
        }


def _rng(seed, stream: str) -> random.Random:
    return random.Random(f"{seed}/{stream}")


def random_forest(sizes, seed) -> Forest:
    """Forest whose i-th tree is uniform over labeled trees of size sizes[i]."""
    rng = _rng(seed, "forest")
    trees = []
    for a in sizes:
        if a < 0:
            raise InfeasibleSpec(f"negative tree size {a}")
        k = a + 1
        if k <= 2:
            trees.append(Tree(k, [(0, 1)] if k == 2 else []))
        else:
            seq = [rng.randrange(k) for _ in range(k - 2)]
            trees.append(prufer_decode(seq, k))
    return Forest(trees)


def _pad_to_min_degree(n: int, nbrs: list[set[int]], d: int, rng: random.Random):
    """Join lowest-index minimum-degree vertices to random non-neighbors
    until every degree reaches d.  Requires n >= d+1.

    A lazy heap of (degree, vertex) entries keeps each pick O(log n); ties
    resolve to the lowest index, matching a linear min scan.
    """
    import heapq

    deg = [len(s) for s in nbrs]
    heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    while heap:
        dv, lo = heap[0]
        if dv != deg[lo]:
            heapq.heappop(heap)
            continue
        if dv >= d:
            return
        while True:
            u = rng.randrange(n)
            if u != lo and u not in nbrs[lo]:
                break
        nbrs[lo].add(u)
        nbrs[u].add(lo)
        deg[lo] += 1
        deg[u] += 1
        heapq.heappush(heap, (deg[lo], lo))
        heapq.heappush(heap, (deg[u], u))


def _graph_from_sets(n: int, nbrs: list[set[int]]) -> Graph:
    edges = []
    for u in range(n):
        for v in nbrs[u]:
            if u < v:
                edges.append((u, v))
    return Graph.from_edges(n, edges)


def _gen_min_degree_pad(n: int, d: int, rng: random.Random) -> Graph:
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for _ in range(n):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            nbrs[u].add(v)
            nbrs[v].add(u)
    _pad_to_min_degree(n, nbrs, d, rng)
    return _graph_from_sets(n, nbrs)


def _gen_near_regular(n: int, d: int, rng: random.Random) -> Graph:
    perm = list(range(n))
    rng.shuffle(perm)
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for off in range(1, (d + 1) // 2 + 1):
        for i in range(n):
            u, v = perm[i], perm[(i + off) % n]
            if u != v:
                nbrs[u].add(v)
                nbrs[v].add(u)
    for _ in range(n // 4):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            nbrs[u].add(v)
            nbrs[v].add(u)
    _pad_to_min_degree(n, nbrs, d, rng)  # no-op except at saturation corner cases
    return _graph_from_sets(n, nbrs)


def _gen_disjoint_cliques(n: int, d: int) -> Graph:
    block = d + 1
    if n % block != 0:
        raise InfeasibleSpec(
            f"disjoint_cliques needs n divisible by d+1={block}; a truncated "
            f"block would drop below the degree floor"
        )
    edges = []
    for start in range(0, n, block):
        for i in range(start, start + block):
            for j in range(i + 1, start + block):
                edges.append((i, j))
    return Graph.from_edges(n, edges)


def _gen_tight_order(n: int, d: int, p: int, rng: random.Random) -> Graph:
    if n != d + p:
        raise InfeasibleSpec(f"tight_order requires n = d+p = {d + p}, got n={n}")
    # complement construction: a missing-edge graph with max degree p-1
    missing: list[set[int]] = [set() for _ in range(n)]
    cap = p - 1
    for _ in range(n * max(cap, 1)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or v in missing[u]:
            continue
        if len(missing[u]) < cap and len(missing[v]) < cap:
            missing[u].add(v)
            missing[v].add(u)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if v not in missing[u]:
                edges.append((u, v))
    return Graph.from_edges(n, edges)


def gen_instance(spec: InstanceSpec) -> tuple[Graph, Forest]:
    """Graph meeting the degree floor plus a random forest of the given sizes."""
    d, p = spec.d, spec.p
    if spec.n < d + p:
        raise InfeasibleSpec(f"n={spec.n} below the vertex floor d+p={d + p}")
    if spec.n < d + 1:
        raise InfeasibleSpec(f"n={spec.n} cannot have minimum degree {d}")
    forest = random_forest(spec.sizes, spec.seed)
    rng = _rng(spec.seed, "graph")
    model = GraphModel(spec.model)
    if model is GraphModel.MIN_DEGREE_PAD:
        G = _gen_min_degree_pad(spec.n, d, rng)
    elif model is GraphModel.NEAR_REGULAR:
        G = _gen_near_regular(spec.n, d, rng)
    elif model is GraphModel.DISJOINT_CLIQUES:
        G = _gen_disjoint_cliques(spec.n, d)
    else:
        G = _gen_tight_order(spec.n, d, p, rng)
    return G, forest


# ---------------------------------------------------------------------------
# the no-backtracking strawman and the search for its failures


@dataclass(frozen=True)
class Stuck:
    """Exact point where the straightforward greedy pass died."""

    tree_index: int
    tree_vertex: int


def naive_sequential_embed(G: Graph, F: Forest) -> Embedding | Stuck:
    """Embed trees in the given order, each by its traversal order, every
    vertex at the lowest-index free (neighbor) vertex, no backtracking."""
    maps: list[dict[int, int]] = []
    used = 0
    for i, T in enumerate(F.trees):
        try:
            mapping = greedy_extend(G, T, {}, forbidden=used)
        except ExtensionStuck as exc:
            return Stuck(i, exc.tree_vertex)
        maps.append(mapping)
        for gv in mapping.values():
            used |= 1 << gv
    return Embedding(maps, used)


@dataclass
class NaiveFailure:
    graph: Graph
    forest: Forest
    stuck: Stuck
    tries: int


def _hypothesis_holds(G: Graph, F: Forest) -> bool:
    return G.n >= F.d + F.p and (G.n > 0 and min(G.deg) >= F.d)


def _delete_vertex(G: Graph, v: int) -> Graph:
    keep = [u for u in range(G.n) if u != v]
    index = {u: i for i, u in enumerate(keep)}
    edges = [
        (index[a], index[b]) for a, b in G.edges() if a != v and b != v
    ]
    return Graph.from_edges(G.n - 1, edges)


def _delete_edge(G: Graph, a: int, b: int) -> Graph:
    edges = [(u, v) for u, v in G.edges() if (u, v) != (a, b)]
    return Graph.from_edges(G.n, edges)


def _minimize_failure(G: Graph, F: Forest) -> Graph:
    """Greedy vertex then edge deletion preserving hypothesis + stuckness."""

    def still_fails(H: Graph) -> bool:
        return _hypothesis_holds(H, F) and isinstance(naive_sequential_embed(H, F), Stuck)

    changed = True
    while changed:
        changed = False
        for v in range(G.n):
            if G.n - 1 < F.d + F.p:
                break
            H = _delete_vertex(G, v)
            if still_fails(H):
                G = H
                changed = True
                break
        if changed:
            continue
        for a, b in list(G.edges()):
            H = _delete_edge(G, a, b)
            if still_fails(H):
                G = H
                changed = True
                break
    return G


def find_naive_failure(
    budget: SearchBudget, seed, minimize: bool = True
) -> NaiveFailure | None:
    """Hypothesis-satisfying instance on which the no-backtracking pass is
    Stuck, or None within budget.  budget.max_nodes counts instances tried.
    """
    import time

    deadline = time.monotonic() + budget.timeout
    master = _rng(seed, "naive-failure")
    for attempt in range(budget.max_nodes):
        if attempt % 256 == 0 and time.monotonic() > deadline:
            return None
        sub = master.getrandbits(48)
        rng = _rng(sub, "shape")
        p = 2 + rng.randrange(3)
        sizes = tuple(1 + rng.randrange(3) for _ in range(p))
        d = sum(sizes)
        n = d + p + rng.randrange(7)
        try:
            G, F = gen_instance(InstanceSpec(n, sizes, GraphModel.MIN_DEGREE_PAD, sub))
        except InfeasibleSpec:
            continue
        res = naive_sequential_embed(G, F)
        if isinstance(res, Stuck):
            if minimize:
                G = _minimize_failure(G, F)
                res = naive_sequential_embed(G, F)
                assert isinstance(res, Stuck)
            return NaiveFailure(G, F, res, attempt + 1)
    return None
