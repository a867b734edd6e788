"""forestweave: embed any forest of total size d into any host graph with
at least d+p vertices and minimum degree at least d, with a checkable
certificate of the route; plus an exact oracle, instance generators, and
a desk-scale explorer for the average-degree variant of the guarantee.
"""

from .conjecture_lab import (
    ConjectureVerdict,
    SweepReport,
    VerdictStatus,
    check_conjecture,
    enumerate_forests,
    sweep,
)
from .embedder import (
    Certificate,
    Embedding,
    PhaseTwoContext,
    VerifyResult,
    embed_forest,
    replay_certificate,
    verify_embedding,
)
from .errors import (
    CountingBreach,
    ExtensionStuck,
    ForestweaveError,
    HypothesisViolation,
    InfeasibleSpec,
    ParseError,
)
from .forest_core import Forest, Tree, connected_prefix_order, prufer_decode, prufer_encode
from .generators import (
    GraphModel,
    InstanceSpec,
    NaiveFailure,
    Stuck,
    find_naive_failure,
    gen_instance,
    naive_sequential_embed,
    random_forest,
)
from .graph_core import (
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
from .oracle import (
    CountResult,
    OracleResult,
    SearchBudget,
    count_embeddings,
    oracle_embed,
    tree_canonical_code,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ConjectureVerdict",
    "CountResult",
    "CountingBreach",
    "Embedding",
    "ExtensionStuck",
    "Forest",
    "ForestweaveError",
    "Graph",
    "GraphFormat",
    "GraphModel",
    "HypothesisViolation",
    "InfeasibleSpec",
    "InstanceSpec",
    "NaiveFailure",
    "OracleResult",
    "ParseError",
    "PhaseTwoContext",
    "SearchBudget",
    "Stuck",
    "SweepReport",
    "Tree",
    "VerdictStatus",
    "VerifyResult",
    "check_conjecture",
    "common_neighbors",
    "connected_prefix_order",
    "count_embeddings",
    "embed_forest",
    "enumerate_forests",
    "find_naive_failure",
    "gen_instance",
    "graph6_decode",
    "graph6_encode",
    "is_clique",
    "min_degree",
    "naive_sequential_embed",
    "oracle_embed",
    "parse_graph",
    "parse_graph6_stream",
    "prufer_decode",
    "prufer_encode",
    "random_forest",
    "replay_certificate",
    "serialize_graph",
    "sweep",
    "tree_canonical_code",
    "verify_embedding",
]
