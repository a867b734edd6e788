"""Immutable simple-graph representation and parsers.

Adjacency is stored as one int bitmask per vertex so that neighborhood
intersections, common-neighbor queries, and degree counts inside a vertex
subset are word-parallel.  Vertices are dense indices 0..n-1; parsers
re-index on the way in and keep any original labels in a side map.

Supported text formats:

* edge list: first line ``n m``, then m lines ``u v`` with 0 <= u,v < n;
* DIMACS: ``p edge n m`` header, ``e u v`` lines, 1-based vertices
  (``c`` comment lines are skipped);
* graph6: the standard 6-bit encoding, one graph per line, n < 63.

Duplicate edges are collapsed silently; self-loops are hard errors.
"""

from __future__ import annotations

from enum import Enum

from .bitset import bits
from .errors import (
    EmptyGraph,
    LoopError,
    ParseError,
    UnsupportedSize,
    VertexOutOfRange,
)


class GraphFormat(str, Enum):
    EDGE_LIST = "edgelist"
    DIMACS = "dimacs"
    GRAPH6 = "graph6"


class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Immutable after construction; safe to share across threads.
    """

    __slots__ = ("n", "adj", "deg", "labels")

    def __init__(self, n: int, adj: list[int], deg: list[int], labels=None):
        self.n = n
        self.adj = adj
        self.deg = deg
        self.labels = labels

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "Graph":
        """Build a graph, collapsing duplicate edges and rejecting loops."""
        if n < 0:
            raise ParseError(f"negative vertex count {n}")
        rows = [bytearray((n + 7) // 8) for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise LoopError(u)
            for w in (u, v):
                if not 0 <= w < n:
                    raise VertexOutOfRange(w, n)
            rows[u][v >> 3] |= 1 << (v & 7)
            rows[v][u >> 3] |= 1 << (u & 7)
        adj = [int.from_bytes(row, "little") for row in rows]
        deg = [a.bit_count() for a in adj]
        return cls(n, adj, deg, labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int):
        return bits(self.adj[v])

    def edge_count(self) -> int:
        return sum(self.deg) // 2

    def edges(self):
        """Yield edges (u, v) with u < v in ascending order."""
        for u in range(self.n):
            high = self.adj[u] >> (u + 1)
            for off in bits(high):
                yield (u, u + 1 + off)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, tuple(self.adj)))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count()})"


def min_degree(G: Graph) -> int:
    if G.n == 0:
        raise EmptyGraph("min_degree of a graph with no vertices")
    return min(G.deg)


def is_clique(G: Graph, members: int) -> bool:
    """True iff every pair of vertices in the mask is adjacent.

    Vacuously true for masks with at most one member.
    """
    for v in bits(members):
        rest = members & ~(1 << v)
        if rest & ~G.adj[v]:
            return False
    return True


def common_neighbors(G: Graph, members: int) -> int:
    """Mask of vertices outside `members` adjacent to all of `members`.

    An empty set has every vertex as a (vacuous) common neighbor.
    """
    out = G.full_mask & ~members
    for v in bits(members):
        out &= G.adj[v]
        if not out:
            break
    return out


# ---------------------------------------------------------------------------
# parsing


def parse_graph(text: str | bytes, fmt: GraphFormat | str) -> Graph:
    """Parse a single graph in the given format."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    fmt = GraphFormat(fmt)
    if fmt is GraphFormat.EDGE_LIST:
        return _parse_edge_list(text)
    if fmt is GraphFormat.DIMACS:
        return _parse_dimacs(text)
    return _parse_graph6_text(text)


def serialize_graph(G: Graph, fmt: GraphFormat | str) -> str:
    fmt = GraphFormat(fmt)
    if fmt is GraphFormat.EDGE_LIST:
        lines = [f"{G.n} {G.edge_count()}"]
        lines += [f"{u} {v}" for u, v in G.edges()]
        return "\n".join(lines) + "\n"
    if fmt is GraphFormat.DIMACS:
        lines = [f"p edge {G.n} {G.edge_count()}"]
        lines += [f"e {u + 1} {v + 1}" for u, v in G.edges()]
        return "\n".join(lines) + "\n"
    return graph6_encode(G) + "\n"


def _parse_edge_list(text: str) -> Graph:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise ParseError("empty edge-list input")
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError(f"expected header 'n m', got {header!r}", no)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"non-integer header {header!r}", no) from None
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"expected {m} edge lines, found {len(body)}")
    edges = []
    for no, ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {ln!r}", no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer edge {ln!r}", no) from None
        if u == v:
            raise LoopError(u, no)
        if not 0 <= u < n:
            raise VertexOutOfRange(u, n, no)
        if not 0 <= v < n:
            raise VertexOutOfRange(v, n, no)
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def _parse_dimacs(text: str) -> Graph:
    n = m = None
    edges = []
    seen_edges = 0
    for no, raw in enumerate(text.splitlines(), start=1):
        ln = raw.strip()
        if not ln or ln.startswith("c"):
            continue
        if ln.startswith("p"):
            if n is not None:
                raise ParseError("duplicate problem line", no)
            parts = ln.split()
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError(f"expected 'p edge n m', got {ln!r}", no)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"non-integer problem line {ln!r}", no) from None
            continue
        if ln.startswith("e"):
            if n is None:
                raise ParseError("edge line before problem line", no)
            parts = ln.split()
            if len(parts) != 3:
                raise ParseError(f"expected 'e u v', got {ln!r}", no)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"non-integer edge {ln!r}", no) from None
            if u == v:
                raise LoopError(u, no)
            for w in (u, v):
                if not 1 <= w <= n:
                    raise VertexOutOfRange(w, n, no)
            edges.append((u - 1, v - 1))
            seen_edges += 1
            continue
        raise ParseError(f"unrecognized line {ln!r}", no)
    if n is None:
        raise ParseError("missing problem line")
    if seen_edges != m:
        raise ParseError(f"header declared {m} edges, found {seen_edges}")
    return Graph.from_edges(n, edges, labels=tuple(range(1, n + 1)))


_G6_HEADER = ">>graph6<<"


def _parse_graph6_text(text: str) -> Graph:
    payload = text.strip()
    if payload.startswith(_G6_HEADER):
        payload = payload[len(_G6_HEADER):].strip()
    lines = [ln for ln in payload.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty graph6 input")
    if len(lines) > 1:
        raise ParseError("multiple graph6 lines; use parse_graph6_stream")
    return graph6_decode(lines[0].strip())


def graph6_decode(line: str, lineno: int | None = None) -> Graph:
    """Decode one graph6 line (short form, n < 63)."""
    data = line.encode("ascii") if isinstance(line, str) else line
    if not data:
        raise ParseError("empty graph6 line", lineno)
    if data[0] == 126:
        raise UnsupportedSize("graph6 long-form size (n >= 63) not supported", lineno)
    for ch in data:
        if not 63 <= ch <= 126:
            raise ParseError(f"invalid graph6 byte {ch}", lineno)
    n = data[0] - 63
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - 1 != need:
        raise ParseError(
            f"graph6 line for n={n} needs {need} data characters, got {len(data) - 1}",
            lineno,
        )
    edges = []
    k = 0
    # bit order: column-major over the upper triangle, (0,1), (0,2), (1,2), ...
    pairs = ((i, j) for j in range(1, n) for i in range(j))
    for ch in data[1:]:
        group = ch - 63
        for shift in range(5, -1, -1):
            if k >= nbits:
                break
            if group >> shift & 1:
                i, j = next(pairs)
                edges.append((i, j))
            else:
                next(pairs)
            k += 1
    return Graph.from_edges(n, edges)


def graph6_encode(G: Graph) -> str:
    """Encode a graph as one graph6 line (short form, n < 63)."""
    n = G.n
    if n >= 63:
        raise UnsupportedSize(f"graph6 short form supports n < 63, got {n}")
    out = [chr(n + 63)]
    group = 0
    filled = 0
    for j in range(1, n):
        for i in range(j):
            group = (group << 1) | (G.adj[i] >> j & 1)
            filled += 1
            if filled == 6:
                out.append(chr(group + 63))
                group = 0
                filled = 0
    if filled:
        group <<= 6 - filled
        out.append(chr(group + 63))
    return "".join(out)


def parse_graph6_stream(text: str):
    """Yield (line_number, line, Graph) for each non-empty graph6 line."""
    payload = text
    for no, raw in enumerate(payload.splitlines(), start=1):
        ln = raw.strip()
        if not ln:
            continue
        if ln.startswith(_G6_HEADER):
            ln = ln[len(_G6_HEADER):].strip()
            if not ln:
                continue
        yield no, ln, graph6_decode(ln, no)
