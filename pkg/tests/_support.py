"""Test-only reference implementations, independent of the package's
search code: plain injection backtracking with no ordering heuristics,
no degree filtering, and no symmetry breaking."""

from forestweave.forest_core import Forest
from forestweave.graph_core import Graph


def _flatten(F: Forest):
    """(tree_index, tree_vertex, [(earlier slot, must-be-adjacent)]) triples
    in plain tree-by-tree, vertex-by-index order."""
    slots = []
    slot_of = {}
    for i, T in enumerate(F.trees):
        for v in range(T.k):
            constraints = []
            for w in T.nbrs[v]:
                if (i, w) in slot_of:
                    constraints.append(slot_of[(i, w)])
            slot_of[(i, v)] = len(slots)
            slots.append((i, v, constraints))
    return slots


def naive_exists(G: Graph, F: Forest) -> bool:
    """Is there any injective edge-preserving map of F into G?"""
    return naive_count(G, F, stop_at=1) > 0


def naive_count(G: Graph, F: Forest, stop_at: int | None = None) -> int:
    """Number of injective edge-preserving maps of F into G."""
    slots = _flatten(F)
    n = G.n
    if len(slots) > n:
        return 0
    images = [-1] * len(slots)
    total = 0

    def rec(idx: int, used: int) -> bool:
        nonlocal total
        if idx == len(slots):
            total += 1
            return stop_at is not None and total >= stop_at
        _i, _v, constraints = slots[idx]
        for u in range(n):
            if used >> u & 1:
                continue
            if any(not G.adj[images[c]] >> u & 1 for c in constraints):
                continue
            images[idx] = u
            if rec(idx + 1, used | (1 << u)):
                return True
        return False

    rec(0, 0)
    return total
