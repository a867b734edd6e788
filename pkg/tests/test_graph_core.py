import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import c_n, k_n, star
from forestweave.errors import (
    EmptyGraph,
    LoopError,
    ParseError,
    UnsupportedSize,
    VertexOutOfRange,
)
from forestweave.graph_core import (
    Graph,
    GraphFormat,
    common_neighbors,
    graph6_decode,
    graph6_encode,
    is_clique,
    min_degree,
    parse_graph,
    parse_graph6_stream,
    serialize_graph,
)


def test_parse_edge_list_triangle():
    G = parse_graph("3 3\n0 1\n1 2\n0 2", GraphFormat.EDGE_LIST)
    assert G.n == 3
    assert G.deg == [2, 2, 2]
    assert G == k_n(3)


def test_parse_graph6_k3():
    # "Bw" decodes to the triangle; cross-checked against networkx below
    assert parse_graph("Bw", GraphFormat.GRAPH6) == k_n(3)


def test_parse_edge_list_loop_rejected():
    with pytest.raises(LoopError) as exc:
        parse_graph("2 1\n0 0", GraphFormat.EDGE_LIST)
    assert exc.value.vertex == 0


def test_parse_edge_list_errors():
    with pytest.raises(ParseError):
        parse_graph("", GraphFormat.EDGE_LIST)
    with pytest.raises(ParseError):
        parse_graph("2 2\n0 1", GraphFormat.EDGE_LIST)  # missing edge line
    with pytest.raises(VertexOutOfRange):
        parse_graph("2 1\n0 5", GraphFormat.EDGE_LIST)
    with pytest.raises(ParseError):
        parse_graph("x y\n", GraphFormat.EDGE_LIST)


def test_parse_dimacs():
    text = "c comment\np edge 3 2\ne 1 2\ne 2 3\n"
    G = parse_graph(text, GraphFormat.DIMACS)
    assert G.n == 3
    assert G.has_edge(0, 1) and G.has_edge(1, 2) and not G.has_edge(0, 2)
    assert G.labels == (1, 2, 3)
    with pytest.raises(VertexOutOfRange):
        parse_graph("p edge 2 1\ne 1 3\n", GraphFormat.DIMACS)
    with pytest.raises(ParseError):
        parse_graph("e 1 2\n", GraphFormat.DIMACS)


def test_duplicate_edges_collapse():
    G = parse_graph("3 3\n0 1\n0 1\n1 2", GraphFormat.EDGE_LIST)
    assert G.edge_count() == 2


def test_min_degree_examples():
    assert min_degree(k_n(4)) == 3
    assert min_degree(c_n(5)) == 2
    assert min_degree(star(3)) == 1
    with pytest.raises(EmptyGraph):
        min_degree(Graph.from_edges(0, []))


def test_is_clique_examples():
    assert is_clique(k_n(4), 0b0111)
    assert not is_clique(c_n(5), 0b00111)  # 0-2 missing
    assert is_clique(c_n(5), 0b00001)
    assert is_clique(c_n(5), 0)


def test_common_neighbors_examples():
    assert common_neighbors(k_n(4), 0b0111) == 0b1000
    assert common_neighbors(c_n(5), 0b00011) == 0
    G = c_n(5)
    assert common_neighbors(G, 0) == G.full_mask


def test_common_neighbors_properties(atlas_corpus):
    import random

    rng = random.Random(7)
    for _line, G in rng.sample(atlas_corpus, 80):
        members = rng.getrandbits(G.n)
        out = common_neighbors(G, members)
        assert out & members == 0
        for v in range(G.n):
            if out >> v & 1:
                assert members & ~G.adj[v] == 0


@pytest.mark.parametrize("fmt", list(GraphFormat))
def test_round_trip_small(fmt):
    for G in [k_n(1), k_n(4), c_n(5), star(3), Graph.from_edges(3, [])]:
        text = serialize_graph(G, fmt)
        assert parse_graph(text, fmt) == G


@settings(max_examples=60)
@given(st.integers(1, 12), st.data())
def test_round_trip_random(n, data):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    G = Graph.from_edges(n, chosen)
    for fmt in GraphFormat:
        assert parse_graph(serialize_graph(G, fmt), fmt) == G


def test_graph6_reference_agreement(atlas_corpus):
    """Exhaustive n <= 7 agreement with networkx's independent codec."""
    import networkx as nx

    for line, G in atlas_corpus:
        H = nx.from_graph6_bytes(line.encode())
        assert G.n == len(H)
        assert {(min(u, v), max(u, v)) for u, v in H.edges()} == set(G.edges())
        assert graph6_encode(G) == line


def test_graph6_header_and_errors():
    assert parse_graph(">>graph6<<Bw", GraphFormat.GRAPH6) == k_n(3)
    with pytest.raises(UnsupportedSize):
        graph6_decode("~" + "?" * 10)
    with pytest.raises(ParseError):
        graph6_decode("B")  # truncated
    with pytest.raises(ParseError):
        graph6_decode("B\x1f")
    with pytest.raises(UnsupportedSize):
        graph6_encode(Graph.from_edges(63, []))


def test_graph6_stream():
    text = "Bw\n\nDQo\n"
    got = list(parse_graph6_stream(text))
    assert [g.n for _, _, g in got] == [3, 5]
    assert got[0][2] == k_n(3)


def test_adjacency_invariants(atlas_corpus):
    for _line, G in atlas_corpus[:200]:
        for v in range(G.n):
            assert not G.adj[v] >> v & 1
            assert G.deg[v] == G.adj[v].bit_count()
            for w in G.neighbors(v):
                assert G.adj[w] >> v & 1
