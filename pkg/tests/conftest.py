import pytest

from forestweave.graph_core import Graph


def k_n(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def c_n(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


@pytest.fixture(scope="session")
def atlas_corpus():
    """All graphs on 1..7 vertices as (graph6 line, Graph) pairs.

    networkx's atlas is the externally produced corpus; lines are encoded
    with networkx and decoded with our parser, which test_graph_core
    cross-validates exhaustively.
    """
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    from forestweave.graph_core import graph6_decode

    out = []
    for H in graph_atlas_g():
        if len(H) < 1:
            continue
        line = nx.to_graph6_bytes(H, header=False).decode().strip()
        out.append((line, graph6_decode(line)))
    assert len(out) == 1252
    return out


@pytest.fixture(scope="session")
def small_forests():
    """All non-isomorphic forests on at most 7 vertices."""
    from forestweave.conjecture_lab import enumerate_forests

    return enumerate_forests(range(0, 7), range(1, 8), max_total=7)
