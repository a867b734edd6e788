"""Constructive forest embedding under the minimum-degree hypothesis.

Given a host graph with at least d+p vertices and minimum degree at least
d (d the total forest size, p the tree count), ``embed_forest`` returns a
verified embedding together with a certificate of the route taken.

The recursion on the number of remaining trees has two routes per level,
both driven by the largest remaining tree T1 of size a:

* grow a clique from a single seed by repeatedly embedding a connected
  prefix of T1 inside the current clique, extending greedily to all of
  T1, and looking for a vertex adjacent to the whole image.  If none
  exists, remove the image and recurse on the rest (avenue A); every
  survivor misses at least one of the a+1 removed vertices, so it loses
  at most a neighbors and the hypothesis carries over.  Otherwise the
  vertex enlarges the clique, so within a steps a clique K of size a is
  found;
* with K in hand, recurse on the rest in the graph minus K, pick the
  lowest clique vertex x and the set X of its lowest d-a+1 neighbors
  outside K, then fit T1 into K plus one extra vertex: an unused member
  of X if one exists, otherwise scan the unused vertices S for a clique
  neighbor or a local swap that frees an X member, otherwise (by the
  degree counting that the code re-checks numerically per vertex) the
  subgraph induced by S has minimum degree at least a+1 and T1 embeds
  greedily inside it.

Every choice is deterministic (lowest index at each tie), so identical
inputs reproduce identical embeddings and certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bitset import bits, lowest_bit, lowest_bits, mask_of
from .errors import (
    CertificateMismatch,
    CountingBreach,
    ExtensionStuck,
    HypothesisViolation,
    InvalidOpportunity,
    NoLeafAnchor,
    NotEnoughVertices,
)
from .forest_core import Forest, Tree
from .graph_core import Graph, min_degree


@dataclass
class Embedding:
    """Per-tree injective maps (tree vertex -> graph vertex) plus the
    union of all images as a bitmask."""

    maps: list[dict[int, int]]
    used: int = 0

    def copy(self) -> "Embedding":
        return Embedding([dict(m) for m in self.maps], self.used)

    def image_mask(self, tree_index: int) -> int:
        return mask_of(self.maps[tree_index].values())

    def to_lists(self) -> list[list[int]]:
        return [[m[v] for v in range(len(m))] for m in self.maps]

    @classmethod
    def from_lists(cls, lists: list[list[int]]) -> "Embedding":
        maps = [{v: g for v, g in enumerate(row)} for row in lists]
        used = 0
        for row in lists:
            used |= mask_of(row)
        return cls(maps, used)


@dataclass
class VerifyResult:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class PhaseTwoContext:
    """Snapshot of the clique-route state once every X vertex is in use.

    Masks are over host vertices: K the clique, X the chosen neighbors of
    the pivot x, Y the other used vertices, S the unused remainder.  The
    q counts classify the already-embedded trees by how their images meet
    X and Y; classes[i] is the class (1..4) of the i-th remaining tree in
    sorted order, whose original index is tree_order[i].
    fallback_min_degree is the measured minimum degree inside S when the
    greedy-in-S route fired, else None.
    """

    a: int
    d: int
    p: int
    K: int
    x: int
    X: int
    Y: int
    S: int
    q1: int
    q2: int
    q3: int
    q4: int
    classes: tuple[int, ...]
    tree_images: tuple[int, ...]
    tree_order: tuple[int, ...]
    fallback_min_degree: int | None = None


@dataclass
class Certificate:
    """Route trace: one tagged record per recursion level, top level first.

    Replaying the certificate against the same instance re-derives the
    identical embedding; any divergence raises CertificateMismatch.
    """

    steps: list[dict]

    def to_jsonable(self) -> dict:
        return {"steps": self.steps}

    def __eq__(self, other):
        if not isinstance(other, Certificate):
            return NotImplemented
        return self.steps == other.steps


@dataclass(frozen=True)
class KNeighbor:
    k: int


@dataclass(frozen=True)
class FullSwap:
    tree: int
    freed: int  # image vertex inside X whose preimage moves to s


@dataclass(frozen=True)
class NearFullRemap:
    tree: int
    missed: int | None  # the one image vertex s is not adjacent to, if any


@dataclass
class CliqueFound:
    members: int
    grown: list[int]


@dataclass
class NoUniversal:
    mapping: dict[int, int]


def _image_of(mapping: dict[int, int]) -> int:
    return mask_of(mapping.values())


def _extension_order(T: Tree, covered) -> list[tuple[int, int]]:
    """(vertex, parent) pairs covering T starting from the covered set.

    Multi-source BFS with ascending tie-breaks; `covered` must induce a
    connected subtree (or be empty, in which case vertex 0 roots the
    order with parent -1).
    """
    seen = [False] * T.k
    frontier = sorted(covered)
    out: list[tuple[int, int]] = []
    if not frontier:
        frontier = [0]
        seen[0] = True
        out.append((0, -1))
    else:
        for v in frontier:
            seen[v] = True
    head = 0
    while head < len(frontier):
        v = frontier[head]
        head += 1
        for w in T.nbrs[v]:
            if not seen[w]:
                seen[w] = True
                out.append((w, v))
                frontier.append(w)
    return out


def greedy_extend(
    G: Graph, T: Tree, partial: dict[int, int], forbidden: int = 0
) -> dict[int, int]:
    """Extend a connected-prefix embedding of T to all of T.

    Each missing vertex is placed at the lowest-index free neighbor of
    its already-placed tree-neighbor, avoiding `forbidden`.  Never raises
    ExtensionStuck when the graph minus `forbidden` has minimum degree at
    least size(T); a raise signals a broken caller precondition.
    """
    mapping = dict(partial)
    used = _image_of(mapping)
    for v, parent in _extension_order(T, mapping.keys()):
        if parent == -1:
            free = G.full_mask & ~(used | forbidden)
        else:
            free = G.adj[mapping[parent]] & ~(used | forbidden)
        if not free:
            raise ExtensionStuck(v)
        g = lowest_bit(free)
        mapping[v] = g
        used |= 1 << g
    return mapping


def embed_tree_rooted_at(
    G: Graph, T: Tree, x: int, y: int, forbidden: int = 0
) -> dict[int, int]:
    """Embedding of T with tree vertex x mapped to graph vertex y."""
    return greedy_extend(G, T, {x: y}, forbidden)


def find_universal_vertex(G: Graph, image: int, within: int | None = None) -> int | None:
    """Lowest-index vertex outside `image` adjacent to every image vertex."""
    cands = (G.full_mask if within is None else within) & ~image
    for v in bits(image):
        cands &= G.adj[v]
        if not cands:
            return None
    return lowest_bit(cands) if cands else None


def grow_clique_or_recurse(
    G: Graph, T1: Tree, a: int, within: int | None = None
) -> CliqueFound | NoUniversal:
    """Either a clique of size >= a or an embedding of T1 such that no
    vertex is adjacent to its whole image.

    Seeds the clique at a maximum-degree vertex (lowest index on ties).
    While the clique is smaller than a: embed the length-|K| prefix of
    T1's traversal across K, extend greedily to all of T1, and search for
    a vertex adjacent to the whole image.  Absence of such a vertex is
    exactly the avenue-A condition; presence strictly enlarges K, so the
    loop ends within a iterations.
    """
    alive = G.full_mask if within is None else within
    best_v = None
    best_deg = -1
    for v in bits(alive):
        dv = (G.adj[v] & alive).bit_count()
        if dv > best_deg:
            best_deg = dv
            best_v = v
    if best_v is None:
        raise HypothesisViolation("n_short", "no vertices available for clique seed")
    K = 1 << best_v
    grown: list[int] = []
    order = T1.bfs_order
    forbidden = G.full_mask & ~alive
    while K.bit_count() < a:
        members = list(bits(K))
        partial = {order[i]: members[i] for i in range(len(members))}
        mapping = greedy_extend(G, T1, partial, forbidden)
        w = find_universal_vertex(G, _image_of(mapping), within=alive)
        if w is None:
            return NoUniversal(mapping)
        K |= 1 << w
        grown.append(w)
    return CliqueFound(K, grown)


def embed_tree_via_clique(G: Graph, K: int, z: int, T: Tree) -> dict[int, int]:
    """Embed T into K plus the outside vertex z.

    |K| must equal size(T); z gets the lowest-index leaf of T and the
    leaf's tree-neighbor goes to a clique vertex adjacent to z.  The rest
    of the tree lands anywhere inside the clique (ascending indices).
    """
    anchors = G.adj[z] & K
    if not anchors:
        raise NoLeafAnchor(f"vertex {z} has no neighbor in the clique")
    anchor = lowest_bit(anchors)
    leaf = min(v for v in range(T.k) if T.degree(v) <= 1)
    mapping = {leaf: z}
    if T.k > 1:
        parent = T.nbrs[leaf][0]
        mapping[parent] = anchor
        rest_vertices = [v for v in range(T.k) if v != leaf and v != parent]
        rest_slots = [g for g in bits(K) if g != anchor]
        mapping.update(zip(rest_vertices, rest_slots))
    return mapping


def classify_trees(g: Embedding, X: int):
    """Class counts (q1, q2, q3, q4) plus per-tree classes from how each
    image meets X: entirely inside (1), two or more inside and some
    outside (2), exactly one inside (3), none inside (4)."""
    classes = []
    counts = [0, 0, 0, 0]
    for i in range(len(g.maps)):
        img = g.image_mask(i)
        inside = (img & X).bit_count()
        if not img & ~X:
            c = 1
        elif inside == 0:
            c = 4
        elif inside == 1:
            c = 3
        else:
            c = 2
        classes.append(c)
        counts[c - 1] += 1
    return counts[0], counts[1], counts[2], counts[3], classes


def find_opportunity(
    G: Graph, g: Embedding, K: int, X: int, s: int
) -> KNeighbor | FullSwap | NearFullRemap | None:
    """First applicable local move for the unused vertex s.

    Scan order: a clique neighbor first, then trees in index order.  A
    tree admits a full swap when its image meets X without lying inside
    it and s is adjacent to the whole image, or a near-full remap when
    its image lies inside X and s misses at most one image vertex.
    """
    in_k = G.adj[s] & K
    if in_k:
        return KNeighbor(lowest_bit(in_k))
    for i in range(len(g.maps)):
        img = g.image_mask(i)
        missed = img & ~G.adj[s]
        if img & ~X:
            if img & X and not missed:
                return FullSwap(i, lowest_bit(img & X))
        else:
            nmissed = missed.bit_count()
            if nmissed == 0:
                return NearFullRemap(i, None)
            if nmissed == 1:
                return NearFullRemap(i, lowest_bit(missed))
    return None


def apply_swap(
    g: Embedding, opp: FullSwap | NearFullRemap, s: int, trees: list[Tree]
) -> tuple[Embedding, int]:
    """Remap one vertex of the opportunity tree to s, freeing an X vertex.

    The remapped tree vertex is the preimage of the freed vertex: for a
    full swap the lowest image vertex inside X, for a near-full remap the
    missed vertex (or the image of tree vertex 0 when s is adjacent to
    the whole image).  The modified map is re-verified against the tree's
    edges; failure raises InvalidOpportunity.
    """
    i = opp.tree
    T = trees[i]
    out = g.copy()
    mapping = out.maps[i]
    if isinstance(opp, FullSwap):
        freed = opp.freed
    else:
        freed = opp.missed if opp.missed is not None else mapping[0]
    moved = next(v for v, gv in mapping.items() if gv == freed)
    mapping[moved] = s
    out.used = (out.used & ~(1 << freed)) | (1 << s)
    return out, freed


def _check_swapped_tree(G: Graph, T: Tree, mapping: dict[int, int]):
    imgs = list(mapping.values())
    if len(set(imgs)) != len(imgs):
        raise InvalidOpportunity("swapped map is not injective")
    for u, v in T.edges:
        if not G.has_edge(mapping[u], mapping[v]):
            raise InvalidOpportunity(f"tree edge ({u},{v}) lost by swap")


def place_isolated_trees(G: Graph, emb: Embedding, count: int) -> Embedding:
    """Append `count` single-vertex tree maps at the lowest unused vertices."""
    free = G.full_mask & ~emb.used
    if free.bit_count() < count:
        raise NotEnoughVertices(f"need {count} unused vertices, have {free.bit_count()}")
    out = emb.copy()
    it = bits(free)
    for _ in range(count):
        v = next(it)
        out.maps.append({0: v})
        out.used |= 1 << v
    return out


def verify_embedding(G: Graph, F: Forest, emb: Embedding) -> VerifyResult:
    """Global injectivity plus edge preservation for every tree."""
    violations: list[str] = []
    if len(emb.maps) != F.p:
        violations.append(f"expected {F.p} tree maps, got {len(emb.maps)}")
        return VerifyResult(False, violations)
    seen: dict[int, tuple[int, int]] = {}
    for i, T in enumerate(F.trees):
        m = emb.maps[i]
        if sorted(m.keys()) != list(range(T.k)):
            violations.append(f"tree {i}: map does not cover vertices 0..{T.k - 1}")
            continue
        for v, gv in m.items():
            if not 0 <= gv < G.n:
                violations.append(f"tree {i}: vertex {v} mapped outside the graph ({gv})")
            elif gv in seen:
                violations.append(
                    f"tree {i} vertex {v} and tree {seen[gv][0]} vertex {seen[gv][1]} share image {gv}"
                )
            else:
                seen[gv] = (i, v)
        for u, v in T.edges:
            gu, gv = m.get(u), m.get(v)
            if gu is None or gv is None:
                continue
            if not (0 <= gu < G.n and 0 <= gv < G.n):
                continue
            if not G.has_edge(gu, gv):
                violations.append(f"tree {i}: edge ({u},{v}) maps to non-edge ({gu},{gv})")
    if emb.used != mask_of(seen.keys()) and not violations:
        violations.append("used mask inconsistent with images")
    return VerifyResult(not violations, violations)


# ---------------------------------------------------------------------------
# the top-level recursion


def _min_degree_within(G: Graph, alive: int) -> int | None:
    md = None
    for v in bits(alive):
        dv = (G.adj[v] & alive).bit_count()
        if md is None or dv < md:
            md = dv
    return md


def _embed_level(G, alive, trees, steps, on_phase_two, expected=None):
    """Embed `trees` (sorted by descending size, all sizes >= 1) inside
    the `alive` vertex set; returns {original tree index: map}.

    `expected` is a certificate-step iterator used during replay; each
    locally derived record must match the recorded one.
    """
    (oi, T1) = trees[0]
    rest = trees[1:]
    a = T1.size
    d = a + sum(t.size for _, t in rest)

    def emit(record: dict):
        steps.append(record)
        if expected is not None:
            try:
                want = next(expected)
            except StopIteration:
                raise CertificateMismatch("certificate has fewer steps than the route") from None
            if want != record:
                raise CertificateMismatch(f"recorded step {want} != derived step {record}")

    if not rest:
        mapping = greedy_extend(G, T1, {}, forbidden=G.full_mask & ~alive)
        emit({"step": "GreedyBase", "tree": oi, "root_image": mapping[T1.bfs_order[0]]})
        return {oi: mapping}

    res = grow_clique_or_recurse(G, T1, a, within=alive)
    if isinstance(res, NoUniversal):
        img = _image_of(res.mapping)
        remainder = alive & ~img
        # avenue-A re-check: the branch condition and the degree floor it buys
        cands = remainder
        for v in bits(img):
            cands &= G.adj[v]
        if cands:
            raise CountingBreach("universal vertex exists on the no-universal branch")
        md = _min_degree_within(G, remainder)
        if md is None or md < d - a:
            raise CountingBreach(
                f"degree floor lost after image removal: {md} < {d - a}"
            )
        emit({"step": "AvenueA", "tree": oi, "removed_image": sorted(bits(img))})
        sub = _embed_level(G, remainder, rest, steps, on_phase_two, expected)
        sub[oi] = res.mapping
        return sub

    K = lowest_bits(res.members, a)
    record = {
        "step": "CliqueGrown",
        "tree": oi,
        "clique": sorted(bits(K)),
        "grown": list(res.grown),
        "resolution": None,
    }
    steps.append(record)
    want = None
    if expected is not None:
        # certificates are in level order; pop now, compare once the
        # resolution is derived below
        try:
            want = next(expected)
        except StopIteration:
            raise CertificateMismatch("certificate has fewer steps than the route") from None
    aprime = alive & ~K
    sub = _embed_level(G, aprime, rest, steps, on_phase_two, expected)

    used_by_rest = 0
    images = []
    for roi, _t in rest:
        im = _image_of(sub[roi])
        images.append(im)
        used_by_rest |= im

    x = lowest_bit(K)
    try:
        X = lowest_bits(G.adj[x] & aprime, d - a + 1)
    except ValueError:
        raise CountingBreach(
            f"pivot {x} has fewer than {d - a + 1} alive neighbors outside the clique"
        ) from None
    unused_x = X & ~used_by_rest
    level_trees = [t for _, t in rest]
    g_level = Embedding(maps=[sub[roi] for roi, _ in rest], used=used_by_rest)

    if unused_x:
        z = lowest_bit(unused_x)
        t1_map = embed_tree_via_clique(G, K, z, T1)
        record["resolution"] = {"step": "UnusedXVertex", "z": z}
    else:
        Y = used_by_rest & ~X
        S = aprime & ~used_by_rest
        pl = len(trees)
        q1, q2, q3, q4, classes = classify_trees(g_level, X)
        if q1 + q2 + q3 + q4 != pl - 1:
            raise CountingBreach("tree classes do not partition the embedded forest")
        if Y.bit_count() != pl - 2:
            raise CountingBreach(
                f"{Y.bit_count()} used vertices outside the clique and X, expected {pl - 2}"
            )
        # direct usage count of Y by classes 2/3/4, then the q1 floor
        y_needed = 0
        for cls, (_roi, t) in zip(classes, rest):
            if cls == 2:
                y_needed += 1  # at least one Y vertex
            elif cls == 3:
                y_needed += t.size
            elif cls == 4:
                y_needed += t.size + 1
        if y_needed > pl - 2:
            raise CountingBreach("class usage of Y exceeds its size")
        if q1 < 1 + q4:
            raise CountingBreach(f"q1={q1} below the floor 1+q4={1 + q4}")

        chosen = None
        for s in bits(S):
            opp = find_opportunity(G, g_level, K, X, s)
            if opp is not None:
                chosen = (s, opp)
                break

        fallback_md = None
        if chosen is None:
            # every unused vertex is K-free and misses enough of each image;
            # its degree therefore concentrates inside S
            for s in bits(S):
                in_k = (G.adj[s] & K).bit_count()
                if in_k:
                    raise CountingBreach(f"vertex {s} has {in_k} clique neighbors but no opportunity")
                in_xy = (G.adj[s] & (X | Y)).bit_count()
                in_s = (G.adj[s] & S).bit_count()
                if in_s < d - in_k - in_xy:
                    raise CountingBreach(f"degree split at vertex {s} undercounts S")
                if in_s < a + q1 - q4:
                    raise CountingBreach(
                        f"vertex {s}: {in_s} neighbors in S, bound is {a + q1 - q4}"
                    )
                if fallback_md is None or in_s < fallback_md:
                    fallback_md = in_s
            if fallback_md is None or fallback_md < a + 1:
                raise CountingBreach(f"min degree in S is {fallback_md}, need {a + 1}")
            t1_map = greedy_extend(G, T1, {}, forbidden=G.full_mask & ~S)
            record["resolution"] = {"step": "FallbackS", "min_degree": fallback_md}
        else:
            s, opp = chosen
            if isinstance(opp, KNeighbor):
                t1_map = embed_tree_via_clique(G, K, s, T1)
                record["resolution"] = {"step": "ObsKNeighbor", "s": s, "k": opp.k}
            else:
                g2, freed = apply_swap(g_level, opp, s, level_trees)
                _check_swapped_tree(G, level_trees[opp.tree], g2.maps[opp.tree])
                for pos, (roi, _t) in enumerate(rest):
                    sub[roi] = g2.maps[pos]
                t1_map = embed_tree_via_clique(G, K, freed, T1)
                record["resolution"] = {
                    "step": "ObsSwap",
                    "s": s,
                    "tree": rest[opp.tree][0],
                    "freed": freed,
                }

        if on_phase_two is not None:
            on_phase_two(
                PhaseTwoContext(
                    a=a,
                    d=d,
                    p=pl,
                    K=K,
                    x=x,
                    X=X,
                    Y=Y,
                    S=S,
                    q1=q1,
                    q2=q2,
                    q3=q3,
                    q4=q4,
                    classes=tuple(classes),
                    tree_images=tuple(images),
                    tree_order=tuple(roi for roi, _ in rest),
                    fallback_min_degree=fallback_md,
                )
            )

    if want is not None and want != record:
        raise CertificateMismatch(f"recorded step {want} != derived step {record}")
    sub[oi] = t1_map
    return sub


def embed_forest(G: Graph, F: Forest, *, on_phase_two=None) -> tuple[Embedding, Certificate]:
    """Embed every tree of F into G, with a certificate of the route.

    Raises HypothesisViolation when G has fewer than d+p vertices or
    minimum degree below d; under the hypothesis the embedding always
    exists and any internal failure raises a CountingBreach-family error.
    """
    emb, cert = _run(G, F, on_phase_two, None)
    return emb, cert


def replay_certificate(G: Graph, F: Forest, cert: Certificate) -> Embedding:
    """Re-derive the embedding, checking each step against the record."""
    expected = iter(cert.steps)
    emb, cert2 = _run(G, F, None, expected)
    try:
        leftover = next(expected)
    except StopIteration:
        leftover = None
    if leftover is not None:
        raise CertificateMismatch(f"certificate has extra step {leftover}")
    if cert2 != cert:
        raise CertificateMismatch("replayed route differs from the certificate")
    return emb


def _run(G, F, on_phase_two, expected):
    d, p = F.d, F.p
    if p == 0:
        return Embedding([], 0), Certificate([])
    if G.n >= 1 and min_degree(G) < d:
        raise HypothesisViolation(
            "degree_short", f"need minimum degree {d}, have {min_degree(G)}"
        )
    if G.n < d + p:
        raise HypothesisViolation("n_short", f"need at least {d + p} vertices, have {G.n}")
    nonisolated = [(i, F.trees[i]) for i in F.order if F.trees[i].size >= 1]
    isolated = sorted(i for i in range(p) if F.trees[i].size == 0)
    steps: list[dict] = []
    sub = {}
    if nonisolated:
        sub = _embed_level(G, G.full_mask, nonisolated, steps, on_phase_two, expected)
    used = 0
    for m in sub.values():
        used |= _image_of(m)
    staging = Embedding(maps=[sub[oi] for oi, _ in nonisolated], used=used)
    staged = place_isolated_trees(G, staging, len(isolated))
    maps: list[dict[int, int]] = [dict() for _ in range(p)]
    for pos, (oi, _t) in enumerate(nonisolated):
        maps[oi] = staged.maps[pos]
    for pos, oi in enumerate(isolated):
        maps[oi] = staged.maps[len(nonisolated) + pos]
    return Embedding(maps, staged.used), Certificate(steps)
