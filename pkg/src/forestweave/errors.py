"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: parse/input problems are
exit 1, hypothesis violations exit 2, internal assertion failures exit 3,
and exhausted search budgets exit 4.
"""


class ForestweaveError(Exception):
    """Base class for all package errors."""


class ParseError(ForestweaveError):
    """Malformed input text."""

    def __init__(self, reason: str, line: int | None = None):
        self.reason = reason
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{reason}{where}")


class LoopError(ParseError):
    """A self-loop was given; loops change degree semantics and are rejected."""

    def __init__(self, vertex, line: int | None = None):
        self.vertex = vertex
        super().__init__(f"loop at vertex {vertex}", line)


class VertexOutOfRange(ParseError):
    def __init__(self, vertex, n: int, line: int | None = None):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} out of range 0..{n - 1}", line)


class UnsupportedSize(ParseError):
    """graph6 long-form encodings (n >= 63) are not supported."""


class CorpusParseError(ParseError):
    """A graph6 corpus line failed to parse."""


class EmptyGraph(ForestweaveError):
    """Operation undefined on a graph with no vertices."""


class BadLength(ForestweaveError):
    """Pruefer sequence length does not match the vertex count."""


class LabelOutOfRange(ForestweaveError):
    """A tree label lies outside 0..k-1."""


class TreeStructureError(ForestweaveError):
    """Edges do not form a single connected, acyclic component."""


class HypothesisViolation(ForestweaveError):
    """The embedder's guarantee does not apply to this instance.

    reason is "n_short" (fewer than d+p vertices) or "degree_short"
    (minimum degree below d).
    """

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class InternalLogicError(ForestweaveError):
    """An invariant the algorithm guarantees was observed to fail.

    Never an expected outcome; any instance of this class is a bug signal.
    """


class ExtensionStuck(InternalLogicError):
    """Greedy extension found no free neighbor (caller precondition broken)."""

    def __init__(self, tree_vertex: int):
        self.tree_vertex = tree_vertex
        super().__init__(f"no free neighbor while placing tree vertex {tree_vertex}")


class CountingBreach(InternalLogicError):
    """A counting bound that must hold was violated."""


class InvalidOpportunity(InternalLogicError):
    """Post-hoc verification of a swapped embedding failed."""


class NoLeafAnchor(InternalLogicError):
    """The outside vertex has no neighbor in the clique (precondition breach)."""


class CertificateMismatch(InternalLogicError):
    """Replaying a certificate diverged from the recorded route."""


class NotEnoughVertices(ForestweaveError):
    """Too few unused vertices remain to place the requested trees."""


class InfeasibleSpec(ForestweaveError):
    """The instance specification cannot be realized."""
