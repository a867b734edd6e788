"""Tree and forest data model, Pruefer coding, and traversal orders.

A tree on k vertices is labeled 0..k-1.  The size of a tree is its edge
count (k - 1), so a single vertex is a size-0 tree; forests may contain
those, and the embedder places them in a dedicated final step.

Forest text format: one tree per line, each line an edge list like
``0-1,1-2``.  A per-tree string may be empty to denote the single-vertex
tree (usable in JSON arrays; blank lines in whole-file input are skipped
as they are indistinguishable from separators).
"""

from __future__ import annotations

import heapq

from .errors import BadLength, LabelOutOfRange, ParseError, TreeStructureError


class Tree:
    """Labeled tree; immutable after construction."""

    __slots__ = ("k", "edges", "nbrs", "_bfs_order")

    def __init__(self, k: int, edges):
        edges = [tuple(e) for e in edges]
        if k < 1:
            raise TreeStructureError(f"tree needs at least one vertex, got k={k}")
        if len(edges) != k - 1:
            raise TreeStructureError(f"tree on {k} vertices needs {k - 1} edges, got {len(edges)}")
        nbrs: list[list[int]] = [[] for _ in range(k)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < k and 0 <= v < k):
                raise LabelOutOfRange(f"edge ({u},{v}) outside 0..{k - 1}")
            if u == v:
                raise TreeStructureError(f"loop at {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise TreeStructureError(f"duplicate edge {key}")
            seen.add(key)
            nbrs[u].append(v)
            nbrs[v].append(u)
        for lst in nbrs:
            lst.sort()
        self.k = k
        self.edges = edges
        self.nbrs = nbrs
        self._bfs_order = None
        # k-1 edges and no duplicates: connectivity implies acyclicity
        order = connected_prefix_order(self, 0)
        if len(order) != k:
            raise TreeStructureError("edges do not connect all vertices")

    @property
    def size(self) -> int:
        """Edge count."""
        return self.k - 1

    def degree(self, v: int) -> int:
        return len(self.nbrs[v])

    def leaves(self) -> list[int]:
        if self.k == 1:
            return [0]
        return [v for v in range(self.k) if len(self.nbrs[v]) == 1]

    @property
    def bfs_order(self) -> list[int]:
        if self._bfs_order is None:
            self._bfs_order = connected_prefix_order(self, 0)
        return self._bfs_order

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self.k == other.k and self.edge_set() == other.edge_set()

    def __hash__(self):
        return hash((self.k, tuple(sorted(self.edge_set()))))

    def edge_set(self):
        return {(min(u, v), max(u, v)) for u, v in self.edges}

    def __repr__(self):
        return f"Tree(k={self.k}, edges={sorted(self.edge_set())})"


def connected_prefix_order(T: Tree, root: int) -> list[int]:
    """BFS order from `root` with ascending-index tie-breaking.

    Every prefix of the returned order induces a connected subtree, and
    every vertex after the first has exactly one earlier tree-neighbor.
    """
    if not 0 <= root < T.k:
        raise LabelOutOfRange(f"root {root} outside 0..{T.k - 1}")
    order = [root]
    seen = [False] * T.k
    seen[root] = True
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for w in T.nbrs[v]:
            if not seen[w]:
                seen[w] = True
                order.append(w)
    return order


def prufer_decode(seq, k: int) -> Tree:
    """The unique labeled tree on k vertices with the given Pruefer sequence."""
    seq = list(seq)
    if k == 1:
        if seq:
            raise BadLength(f"k=1 takes an empty sequence, got length {len(seq)}")
        return Tree(1, [])
    if len(seq) != k - 2:
        raise BadLength(f"k={k} needs a sequence of length {k - 2}, got {len(seq)}")
    for s in seq:
        if not 0 <= s < k:
            raise LabelOutOfRange(f"label {s} outside 0..{k - 1}")
    deg = [1] * k
    for s in seq:
        deg[s] += 1
    leaves = [v for v in range(k) if deg[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for s in seq:
        v = heapq.heappop(leaves)
        edges.append((v, s))
        deg[s] -= 1
        if deg[s] == 1:
            heapq.heappush(leaves, s)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return Tree(k, edges)


def prufer_encode(T: Tree) -> list[int]:
    """Pruefer sequence of a tree with k >= 2; inverse of prufer_decode."""
    k = T.k
    if k < 2:
        raise BadLength("tree on a single vertex has no Pruefer sequence")
    deg = [T.degree(v) for v in range(k)]
    alive = [set(lst) for lst in T.nbrs]
    leaves = [v for v in range(k) if deg[v] == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(k - 2):
        v = heapq.heappop(leaves)
        parent = next(iter(alive[v]))
        seq.append(parent)
        alive[parent].discard(v)
        deg[parent] -= 1
        deg[v] = 0
        if deg[parent] == 1:
            heapq.heappush(leaves, parent)
    return seq


class Forest:
    """Ordered collection of trees with cached totals.

    d is the total edge count, p the tree count, and `order` lists tree
    indices by descending size with ties broken by original index.
    """

    __slots__ = ("trees", "sizes", "d", "p", "order")

    def __init__(self, trees):
        self.trees = list(trees)
        self.sizes = [t.size for t in self.trees]
        self.d = sum(self.sizes)
        self.p = len(self.trees)
        self.order = sorted(range(self.p), key=lambda i: (-self.sizes[i], i))

    def total_vertices(self) -> int:
        return self.d + self.p

    @classmethod
    def from_text(cls, text: str) -> "Forest":
        trees = []
        for raw in text.splitlines():
            ln = raw.strip()
            if not ln:
                continue
            trees.append(parse_tree_line(ln))
        if not trees:
            raise ParseError("no trees in forest text")
        return cls(trees)

    def to_text(self) -> str:
        return "\n".join(tree_line(t) for t in self.trees) + "\n"

    def __eq__(self, other):
        if not isinstance(other, Forest):
            return NotImplemented
        return self.trees == other.trees

    def __repr__(self):
        return f"Forest(p={self.p}, sizes={self.sizes})"


def parse_tree_line(line: str) -> Tree:
    """Parse one ``u-v,u-v`` tree description; empty means a single vertex."""
    ln = line.strip()
    if not ln:
        return Tree(1, [])
    edges = []
    for part in ln.split(","):
        part = part.strip()
        halves = part.split("-")
        if len(halves) != 2:
            raise ParseError(f"expected 'u-v', got {part!r}")
        try:
            u, v = int(halves[0]), int(halves[1])
        except ValueError:
            raise ParseError(f"non-integer edge {part!r}") from None
        edges.append((u, v))
    k = max(max(u, v) for u, v in edges) + 1
    try:
        return Tree(k, edges)
    except (TreeStructureError, LabelOutOfRange) as exc:
        raise ParseError(f"invalid tree {ln!r}: {exc}") from exc


def tree_line(T: Tree) -> str:
    return ",".join(f"{min(u, v)}-{max(u, v)}" for u, v in sorted(T.edge_set()))
