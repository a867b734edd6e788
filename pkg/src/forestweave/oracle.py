"""Exact backtracking decision and counting search for forest embeddings.

Ground truth on small instances: no degree hypothesis required, complete
within the given budget.  Pruning is limited to what cannot lose
solutions: trees are processed largest-first, vertices of each tree in
connected-prefix order, candidate images filtered by degree and by
adjacency to the one already-placed tree-neighbor, and identical trees
(equal canonical form) are forced into lexicographically increasing
first-image order.

``count_embeddings`` counts complete assignments under that symmetry
rule, so its result equals the number of injective edge-preserving maps
divided by prod(r!) over groups of r identical trees.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

from .bitset import bits
from .forest_core import Forest, Tree, connected_prefix_order, prufer_decode
from .graph_core import Graph

FOUND = "found"
NOT_FOUND = "not_found"
COUNTED = "counted"
BUDGET_EXCEEDED = "budget_exceeded"

_STOP = 0  # budget exhausted
_DONE = 1  # solution found, decision search unwinding
_CONT = 2


@dataclass(frozen=True)
class SearchBudget:
    """Backtracking limits: node count and wall-clock seconds."""

    max_nodes: int = 10_000_000
    timeout: float = 30.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.timeout <= 0:
            raise ValueError("budget limits must be positive")


@dataclass
class OracleResult:
    status: str  # FOUND | NOT_FOUND | BUDGET_EXCEEDED
    embedding: object | None
    nodes: int


@dataclass
class CountResult:
    status: str  # COUNTED | BUDGET_EXCEEDED
    count: int | None
    nodes: int


# ---------------------------------------------------------------------------
# small-tree canonical form


def _rooted_code(T: Tree, root: int, parent: int) -> tuple:
    return tuple(sorted(_rooted_code(T, w, root) for w in T.nbrs[root] if w != parent))


def _centroids(T: Tree) -> list[int]:
    k = T.k
    if k == 1:
        return [0]
    # peel leaf layers; the final one or two survivors are the centroids
    deg = [T.degree(v) for v in range(k)]
    layer = [v for v in range(k) if deg[v] == 1]
    remaining = k
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            deg[v] = 0
            for w in T.nbrs[v]:
                if deg[w] > 1:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    return sorted(layer)


def tree_canonical_code(T: Tree) -> tuple:
    """Isomorphism-invariant code; equal codes mean isomorphic trees."""
    return min(_rooted_code(T, c, -1) for c in _centroids(T))


def canonical_relabel(T: Tree) -> tuple[Tree, list[int]]:
    """Canonically labeled copy of T plus the relabeling map.

    Returns (canon, to_canon) where to_canon[v] is the canonical label of
    original vertex v.  Isomorphic trees yield identical canonical copies.
    """
    code_root = min((_rooted_code(T, c, -1), c) for c in _centroids(T))
    root = code_root[1]
    memo: dict[tuple[int, int], tuple] = {}

    def code_of(v: int, parent: int) -> tuple:
        key = (v, parent)
        if key not in memo:
            memo[key] = _rooted_code(T, v, parent)
        return memo[key]

    to_canon = [-1] * T.k
    edges: list[tuple[int, int]] = []
    counter = [0]

    def visit(v: int, parent: int):
        to_canon[v] = counter[0]
        counter[0] += 1
        kids = sorted(
            (w for w in T.nbrs[v] if w != parent),
            key=lambda w: (code_of(w, v), w),
        )
        for w in kids:
            visit(w, v)
            edges.append((to_canon[v], to_canon[w]))

    visit(root, -1)
    return Tree(T.k, edges), to_canon


# ---------------------------------------------------------------------------
# backtracking search


class _Budget:
    __slots__ = ("max_nodes", "deadline", "nodes", "exceeded")

    def __init__(self, budget: SearchBudget):
        self.max_nodes = budget.max_nodes
        self.deadline = time.monotonic() + budget.timeout
        self.nodes = 0
        self.exceeded = False

    def tick(self) -> bool:
        """Account one node; True while within budget."""
        self.nodes += 1
        if self.nodes > self.max_nodes:
            self.exceeded = True
            return False
        if self.nodes % 4096 == 0 and time.monotonic() > self.deadline:
            self.exceeded = True
            return False
        return True


@dataclass
class _TreePlan:
    orig_index: int
    canon: Tree
    from_canon: list[int]  # canonical label -> original label
    order: list[int]  # canonical labels in connected-prefix order
    parents: list[int]  # order position of the earlier neighbor; -1 for root
    code: tuple


def _plan(F: Forest) -> list[_TreePlan]:
    plans = []
    for i, T in enumerate(F.trees):
        canon, to_canon = canonical_relabel(T)
        from_canon = [0] * T.k
        for v, c in enumerate(to_canon):
            from_canon[c] = v
        order = connected_prefix_order(canon, 0)
        pos = {v: j for j, v in enumerate(order)}
        parents = [-1] * canon.k
        for j, v in enumerate(order[1:], start=1):
            parents[j] = pos[next(w for w in canon.nbrs[v] if pos[w] < j)]
        plans.append(_TreePlan(i, canon, from_canon, order, parents, tree_canonical_code(T)))
    plans.sort(key=lambda pl: (-pl.canon.size, pl.code, pl.orig_index))
    return plans


def _search(G: Graph, F: Forest, budget: SearchBudget, count_all: bool):
    from .embedder import Embedding  # local import to avoid a cycle

    plans = _plan(F)
    bud = _Budget(budget)
    n = G.n
    solution_count = 0
    found: list[list[int]] | None = None
    images = [[-1] * pl.canon.k for pl in plans]

    def place(t: int, j: int, used: int, floor: int) -> int:
        nonlocal solution_count, found
        if t == len(plans):
            solution_count += 1
            if found is None:
                found = [img[:] for img in images]
            return _CONT if count_all else _DONE
        pl = plans[t]
        if j == pl.canon.k:
            nxt_floor = -1
            if t + 1 < len(plans) and plans[t + 1].code == pl.code:
                nxt_floor = images[t][0]
            return place(t + 1, 0, used, nxt_floor)
        v = pl.order[j]
        need = pl.canon.degree(v)
        if j == 0:
            cands = (u for u in range(floor + 1, n) if not used >> u & 1)
        else:
            cands = bits(G.adj[images[t][pl.parents[j]]] & ~used)
        for u in cands:
            if G.deg[u] < need:
                continue
            if not bud.tick():
                return _STOP
            images[t][j] = u
            r = place(t, j + 1, used | (1 << u), floor)
            if r != _CONT:
                return r
        return _CONT

    if F.total_vertices() > n:
        # injectivity is impossible; trivially complete
        return (COUNTED if count_all else NOT_FOUND), None, 0, 0

    place(0, 0, 0, -1)
    if bud.exceeded:
        return BUDGET_EXCEEDED, None, solution_count, bud.nodes

    emb = None
    if found is not None:
        maps: list[dict[int, int]] = [dict() for _ in range(F.p)]
        used = 0
        for t, pl in enumerate(plans):
            m = {}
            for j, v in enumerate(pl.order):
                m[pl.from_canon[v]] = found[t][j]
                used |= 1 << found[t][j]
            maps[pl.orig_index] = m
        emb = Embedding(maps=maps, used=used)
    status = COUNTED if count_all else (FOUND if found is not None else NOT_FOUND)
    return status, emb, solution_count, bud.nodes


def oracle_embed(G: Graph, F: Forest, budget: SearchBudget | None = None) -> OracleResult:
    """Complete search for one embedding of F into G.

    FOUND results carry a verifier-valid embedding; NOT_FOUND means the
    pruned-but-complete space was exhausted without hitting the budget.
    """
    budget = budget or SearchBudget()
    status, emb, _count, nodes = _search(G, F, budget, count_all=False)
    if status == FOUND:
        return OracleResult(FOUND, emb, nodes)
    if status == NOT_FOUND:
        return OracleResult(NOT_FOUND, None, nodes)
    return OracleResult(BUDGET_EXCEEDED, None, nodes)


def count_embeddings(G: Graph, F: Forest, budget: SearchBudget | None = None) -> CountResult:
    """Count embeddings up to the identical-tree symmetry rule."""
    budget = budget or SearchBudget()
    status, _emb, count, nodes = _search(G, F, budget, count_all=True)
    if status == BUDGET_EXCEEDED:
        return CountResult(BUDGET_EXCEEDED, None, nodes)
    return CountResult(COUNTED, count, nodes)


@lru_cache(maxsize=32)
def enumerate_trees(k: int) -> tuple[Tree, ...]:
    """All non-isomorphic trees on k vertices, canonically labeled.

    Enumerated by exhausting Pruefer sequences and deduplicating on the
    canonical code; feasible for the small k used in sweeps.
    """
    if k == 1:
        return (Tree(1, []),)
    if k == 2:
        return (Tree(2, [(0, 1)]),)
    seen: dict[tuple, Tree] = {}
    seq = [0] * (k - 2)
    while True:
        T = prufer_decode(seq, k)
        code = tree_canonical_code(T)
        if code not in seen:
            canon, _ = canonical_relabel(T)
            seen[code] = canon
        pos = k - 3
        while pos >= 0 and seq[pos] == k - 1:
            seq[pos] = 0
            pos -= 1
        if pos < 0:
            break
        seq[pos] += 1
    return tuple(seen[c] for c in sorted(seen))
