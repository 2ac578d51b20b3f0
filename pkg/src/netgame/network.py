"""Simple bounded-degree graphs: representation, generators, and rewiring.

Nodes are dense integer identifiers ``0..n-1``; the index order doubles as
the deterministic tie-breaking order used throughout the package. All
values are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import floor, log
from random import Random

from .errors import ConstructionError, ValidationError
from .seeds import derive_seed

Edge = tuple[int, int]


@dataclass(frozen=True)
class Network:
    """Simple undirected graph with per-node sorted adjacency lists.

    Invariants (checked on construction):

    * no self-loops and no repeated neighbor in any adjacency list,
    * symmetry: ``u`` appears in ``adjacency[v]`` iff ``v`` in ``adjacency[u]``.
    """

    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.adjacency)
        for v, nbrs in enumerate(self.adjacency):
            if len(set(nbrs)) != len(nbrs):
                raise ValidationError(f"node {v} has a repeated neighbor")
            if tuple(sorted(nbrs)) != tuple(nbrs):
                raise ValidationError(f"adjacency of node {v} is not sorted")
            for u in nbrs:
                if not 0 <= u < n:
                    raise ValidationError(f"node {v} lists out-of-range neighbor {u}")
                if u == v:
                    raise ValidationError(f"self-loop at node {v}")
                if v not in self.adjacency[u]:
                    raise ValidationError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: list[Edge] | set[Edge]) -> "Network":
        """Build a network on ``n`` nodes from an iterable of edges."""
        if n < 0:
            raise ValidationError("node count must be nonnegative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise ValidationError(f"self-loop at node {u}")
            if v in nbrs[u]:
                raise ValidationError(f"duplicate edge {u}-{v}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    @cached_property
    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adjacency), default=0)

    @cached_property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def edges(self) -> list[Edge]:
        """All edges as ``(u, v)`` with ``u < v``, lexicographically sorted."""
        return [(u, v) for u in range(self.node_count) for v in self.adjacency[u] if u < v]

    def bfs_distances(self, source: int, limit: int | None = None) -> dict[int, int]:
        """Hop distances from ``source``, truncated at ``limit`` if given."""
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            if limit is not None and dist[x] >= limit:
                continue
            for y in self.adjacency[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist


@dataclass(frozen=True)
class CycleCutConstraint:
    """Restriction on which edges `cut_short_cycles` may rewire.

    * ``unconstrained`` - any edge may be swapped.
    * ``leaf_edges_only`` - only the designated edge set is rewired (the
      replacement edges join the set), preserving perfect domination of a
      star construction.
    * ``preserve_bipartition`` - every replacement edge must cross the
      given 2-partition of the nodes.
    """

    kind: str
    leaf_edges: frozenset[Edge] | None = None
    sides: tuple[frozenset[int], frozenset[int]] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("unconstrained", "leaf_edges_only", "preserve_bipartition"):
            raise ValidationError(f"unknown cycle-cut constraint kind {self.kind!r}")
        if self.kind == "leaf_edges_only" and self.leaf_edges is None:
            raise ValidationError("leaf_edges_only requires a designated edge set")
        if self.kind == "preserve_bipartition" and self.sides is None:
            raise ValidationError("preserve_bipartition requires a 2-partition")

    @classmethod
    def unconstrained(cls) -> "CycleCutConstraint":
        return cls("unconstrained")

    @classmethod
    def leaf_edges_only(cls, leaf_edges) -> "CycleCutConstraint":
        edges = frozenset(tuple(sorted(e)) for e in leaf_edges)
        return cls("leaf_edges_only", leaf_edges=edges)

    @classmethod
    def preserve_bipartition(cls, side_a, side_b) -> "CycleCutConstraint":
        return cls("preserve_bipartition", sides=(frozenset(side_a), frozenset(side_b)))


# ---------------------------------------------------------------------------
# Generators


def ring(n: int) -> Network:
    """Cycle on ``n >= 3`` nodes with edges ``{i, (i+1) mod n}``."""
    if n < 3:
        raise ValidationError("ring needs n >= 3 (smaller n would duplicate an edge)")
    return Network.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def torus(n: int) -> Network:
    """Two-dimensional ``n``-by-``n`` torus (4-regular, ``2*n*n`` edges).

    Node ``(i, j)`` has index ``i*n + j`` and is adjacent to ``(i, j+1 mod n)``
    and ``(i+1 mod n, j)``.
    """
    if n < 3:
        raise ValidationError("torus needs n >= 3 (wrap-around would duplicate edges)")
    edges = []
    for i in range(n):
        for j in range(n):
            edges.append((i * n + j, i * n + (j + 1) % n))
            edges.append((i * n + j, ((i + 1) % n) * n + j))
    return Network.from_edges(n * n, edges)


def random_regular(n: int, d: int, seed: int) -> Network:
    """Random ``d``-regular simple graph via the configuration model.

    Stubs are paired uniformly at random; pairings with self-loops or
    parallel edges are rejected wholesale and retried with a fresh derived
    seed, up to 1000 attempts. Deterministic given ``seed``.

    Raises:
        ValidationError: if ``n*d`` is odd, ``n <= d``, or ``d < 3``.
        ConstructionError: if no simple pairing is found within the budget.
    """
    if d < 3:
        raise ValidationError("random_regular needs degree d >= 3")
    if n <= d:
        raise ValidationError("random_regular needs n > d")
    if (n * d) % 2 != 0:
        raise ValidationError("random_regular needs n*d even (handshake parity)")
    for attempt in range(1000):
        rng = Random(derive_seed(seed, "regular-attempt", attempt))
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges: set[Edge] = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            e = (u, v) if u < v else (v, u)
            if e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Network.from_edges(n, edges)
    raise ConstructionError(
        f"no simple {d}-regular pairing on {n} nodes after 1000 attempts; retry with a new seed"
    )


def star_matching(k: int, d: int, seed: int) -> tuple[Network, frozenset[int], frozenset[Edge]]:
    """``k`` stars on ``d+1`` nodes joined by ``d-1`` disjoint leaf matchings.

    The result is ``d``-regular on ``k*(d+1)`` nodes. Star centers form a
    perfect dominating set (every leaf has exactly one center neighbor) and
    the matching edges are returned as the designated leaf edges.

    Centers get indices ``0..k-1``; leaves ``k..k(d+1)-1``. The matchings
    come from a round-robin one-factorization of the complete graph on the
    leaves after a seed-driven shuffle, so construction never needs
    rejection: it is feasible exactly when ``k*d`` is even.

    Raises:
        ValidationError: on ``d < 3``, ``k < 1``, or odd ``k*d`` (no perfect
            matching on an odd leaf set).
    """
    if d < 3:
        raise ValidationError("star_matching needs d >= 3")
    if k < 1:
        raise ValidationError("star_matching needs k >= 1")
    m = k * d
    if m % 2 != 0:
        raise ValidationError(
            f"star_matching infeasible: {m} leaves cannot host disjoint perfect matchings"
        )
    n = k * (d + 1)
    leaves = list(range(k, n))
    rng = Random(derive_seed(seed, "star-matching"))
    rng.shuffle(leaves)

    edges: list[Edge] = []
    for c in range(k):
        for j in range(d):
            edges.append((c, k + c * d + j))

    # Round-robin one-factorization of K_m: round r matches the rotating
    # positions; m-1 rounds exist, we use the first d-1.
    leaf_edges: set[Edge] = set()
    fixed = leaves[m - 1]
    rotating = leaves[: m - 1]
    for r in range(d - 1):
        pair = (fixed, rotating[r % (m - 1)])
        matches = [pair]
        for i in range(1, m // 2):
            a = rotating[(r + i) % (m - 1)]
            b = rotating[(r - i) % (m - 1)]
            matches.append((a, b))
        for a, b in matches:
            e = (a, b) if a < b else (b, a)
            leaf_edges.add(e)
            edges.append(e)

    net = Network.from_edges(n, edges)
    return net, frozenset(range(k)), frozenset(leaf_edges)


def bipartite_double_cover(net: Network) -> Network:
    """Two copies of each node; each edge ``{u,v}`` becomes the crossed pair
    ``{u1,v2}`` and ``{u2,v1}``. Always bipartite; degrees preserved; the
    girth never decreases."""
    n = net.node_count
    edges = []
    for u, v in net.edges():
        edges.append((u, v + n))
        edges.append((u + n, v))
    return Network.from_edges(2 * n, edges)


def power_graph(net: Network, r: int) -> Network:
    """Graph on the same nodes with ``u ~ v`` iff ``1 <= dist(u, v) <= r``."""
    if r < 1:
        raise ValidationError("power_graph needs r >= 1")
    edges = set()
    for v in range(net.node_count):
        for u, dist in net.bfs_distances(v, limit=r).items():
            if 0 < dist and u > v:
                edges.add((v, u))
    return Network.from_edges(net.node_count, edges)


# ---------------------------------------------------------------------------
# Girth and cycle cutting


def girth(net: Network) -> int | None:
    """Length of the shortest cycle, or None for forests.

    Exact, via truncated BFS from every node: for each non-tree edge
    ``{x,y}`` found from root ``v``, ``dist(x) + dist(y) + 1`` bounds a cycle
    from below, and the bound is attained for some root on a shortest cycle.
    """
    best: int | None = None
    n = net.node_count
    for root in range(n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if best is not None and dist[x] > best // 2:
                break
            for y in net.adjacency[x]:
                if y == parent[x]:
                    continue
                if y in dist:
                    cand = dist[x] + dist[y] + 1
                    if best is None or cand < best:
                        best = cand
                else:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
    return best


def _canonical_cycle(cycle: list[int]) -> tuple[int, ...]:
    """Rotate/reflect a cycle's node list to its lexicographic minimum."""
    k = len(cycle)
    best: tuple[int, ...] | None = None
    for i in range(k):
        for direction in (1, -1):
            rot = tuple(cycle[(i + direction * j) % k] for j in range(k))
            if best is None or rot < best:
                best = rot
    assert best is not None
    return best


def _shortest_cycles(net: Network, length: int) -> list[tuple[int, ...]]:
    """All shortest cycles discovered by the deterministic per-root BFS scan,
    canonicalized and sorted. Nonempty whenever girth(net) == length."""
    found: set[tuple[int, ...]] = set()
    for root in range(net.node_count):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        order = [root]
        while queue:
            x = queue.popleft()
            if dist[x] > length // 2:
                break
            for y in net.adjacency[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                    order.append(y)
        for x in order:
            for y in net.adjacency[x]:
                if y not in dist or y == parent[x] or x == parent[y]:
                    continue
                if x > y:
                    continue
                if dist[x] + dist[y] + 1 != length:
                    continue
                path_x = _path_to_root(x, parent)
                path_y = _path_to_root(y, parent)
                if set(path_x) & set(path_y) != {root}:
                    continue  # walk is not a simple cycle
                cycle = path_x[::-1] + path_y[:-1]
                found.add(_canonical_cycle(cycle))
    return sorted(found)


def _path_to_root(x: int, parent: dict[int, int]) -> list[int]:
    path = [x]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    return path


def cut_short_cycles(
    net: Network,
    g: int | str,
    constraint: CycleCutConstraint | None = None,
    seed: int = 0,
) -> Network:
    """Raise the girth to at least ``g`` by degree-preserving edge swaps.

    Repeatedly takes the lexicographically smallest shortest cycle, the
    smallest eligible edge ``e = {u,v}`` on it, and the smallest eligible
    edge ``f = {u',v'}`` at edge distance >= g (min endpoint distance), then
    replaces both with the crossed pair ``{u,v'}, {u',v}``. Endpoints of far
    edges are pairwise non-adjacent, so swaps can never create parallel
    edges, and every swap preserves the degree sequence and the edge count.

    ``g = "auto"`` targets ``floor(log_d n)`` for degree ``d``. The procedure
    is deterministic; ``seed`` is accepted for interface uniformity only.

    Raises:
        ConstructionError: if no eligible far edge exists at some step
            (``g`` too large for this graph) or the iteration budget runs out.
    """
    if constraint is None:
        constraint = CycleCutConstraint.unconstrained()
    if g == "auto":
        d = net.max_degree
        if d < 2 or net.node_count < 2:
            raise ValidationError("girth target 'auto' needs max degree >= 2")
        g = max(3, floor(log(net.node_count) / log(d)))
    if not isinstance(g, int) or g < 3:
        raise ValidationError("girth target must be an integer >= 3 or 'auto'")

    if constraint.kind == "preserve_bipartition":
        side_a, side_b = constraint.sides
        nodes = set(range(net.node_count))
        if (side_a | side_b) != nodes or (side_a & side_b):
            raise ValidationError("bipartition must cover all nodes exactly once")
        for u, v in net.edges():
            if (u in side_a) == (v in side_a):
                raise ValidationError(
                    f"edge {u}-{v} does not cross the given bipartition"
                )

    edges = set(net.edges())
    leaf_edges = set(constraint.leaf_edges) if constraint.kind == "leaf_edges_only" else None
    budget = 10 * len(edges) + 10

    for _ in range(budget):
        current = Network.from_edges(net.node_count, edges)
        have = girth(current)
        if have is None or have >= g:
            return current
        cycle = _shortest_cycles(current, have)[0]
        cycle_edges = sorted(
            tuple(sorted((cycle[i], cycle[(i + 1) % len(cycle)]))) for i in range(len(cycle))
        )
        eligible_on_cycle = [e for e in cycle_edges if _edge_eligible(e, constraint, leaf_edges)]
        if not eligible_on_cycle:
            raise ConstructionError("shortest cycle has no eligible edge to cut")

        # Smallest eligible cycle edge that has a far partner at all; a cycle
        # edge with no partner at distance >= g is skipped in favor of the
        # next one rather than aborting the whole construction.
        pair: tuple[Edge, Edge] | None = None
        for e in eligible_on_cycle:
            dist_u = current.bfs_distances(e[0])
            dist_v = current.bfs_distances(e[1])

            def edge_distance(f: Edge) -> int:
                ds = [d.get(x) for d in (dist_u, dist_v) for x in f]
                if any(x is None for x in ds):
                    return net.node_count  # different component: infinitely far
                return min(ds)

            far = sorted(
                f
                for f in edges
                if f != e and _edge_eligible(f, constraint, leaf_edges) and edge_distance(f) >= g
            )
            if far:
                pair = (e, far[0])
                break
        if pair is None:
            raise ConstructionError(
                f"no eligible edge at distance >= {g} from any edge of cycle {cycle}; "
                "girth target too large for n"
            )
        e, f = pair

        if constraint.kind == "preserve_bipartition":
            side_a, _ = constraint.sides
            u, v = e if e[0] in side_a else (e[1], e[0])
            up, vp = f if f[0] in side_a else (f[1], f[0])
        else:
            u, v = e
            up, vp = f
        new_1 = tuple(sorted((u, vp)))
        new_2 = tuple(sorted((up, v)))
        edges.remove(e)
        edges.remove(f)
        edges.add(new_1)
        edges.add(new_2)
        if leaf_edges is not None:
            leaf_edges.discard(e)
            leaf_edges.discard(f)
            leaf_edges.add(new_1)
            leaf_edges.add(new_2)
    raise ConstructionError(f"cycle cutting did not reach girth {g} within {budget} swaps")


def _edge_eligible(e: Edge, constraint: CycleCutConstraint, leaf_edges: set[Edge] | None) -> bool:
    if constraint.kind == "leaf_edges_only":
        return e in leaf_edges
    return True


# ---------------------------------------------------------------------------
# Certifiers


def two_coloring(net: Network) -> tuple[frozenset[int], frozenset[int]] | None:
    """A proper 2-coloring as a node bipartition, or None if not bipartite."""
    color: dict[int, int] = {}
    for start in range(net.node_count):
        if start in color:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in net.adjacency[x]:
                if y not in color:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return None
    side_a = frozenset(v for v, c in color.items() if c == 0)
    side_b = frozenset(v for v, c in color.items() if c == 1)
    return side_a, side_b


def is_perfect_dominating_set(net: Network, centers: frozenset[int] | set[int]) -> bool:
    """True iff ``centers`` is independent and every other node has exactly
    one neighbor in it."""
    centers = set(centers)
    for v in range(net.node_count):
        inside = sum(1 for u in net.adjacency[v] if u in centers)
        if v in centers:
            if inside != 0:
                return False
        elif inside != 1:
            return False
    return True


def degree_multiset(net: Network) -> tuple[int, ...]:
    return tuple(sorted(net.degree(v) for v in range(net.node_count)))


# ---------------------------------------------------------------------------
# JSON interchange


def graph_to_json(net: Network, meta: dict | None = None) -> dict:
    """Serialize to the interchange dict: ``{"n", "edges", "max_degree", "meta"}``."""
    return {
        "n": net.node_count,
        "edges": [[u, v] for u, v in net.edges()],
        "max_degree": net.max_degree,
        "meta": meta if meta is not None else {},
    }


def graph_from_json(obj: dict) -> Network:
    """Parse and validate the interchange dict; rejects malformed edge lists."""
    if not isinstance(obj, dict):
        raise ValidationError("graph JSON must be an object")
    for key in ("n", "edges", "max_degree"):
        if key not in obj:
            raise ValidationError(f"graph JSON missing field {key!r}")
    n = obj["n"]
    if not isinstance(n, int) or n < 0:
        raise ValidationError("graph JSON field 'n' must be a nonnegative integer")
    if not isinstance(obj["edges"], list):
        raise ValidationError("graph JSON field 'edges' must be a list of pairs")
    seen: set[Edge] = set()
    for item in obj["edges"]:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) for x in item)):
            raise ValidationError(f"malformed edge entry {item!r}")
        u, v = item
        if not u < v:
            raise ValidationError(f"edge [{u}, {v}] must be listed with u < v")
        if (u, v) in seen:
            raise ValidationError(f"duplicate edge [{u}, {v}]")
        seen.add((u, v))
    net = Network.from_edges(n, seen)
    if net.max_degree != obj["max_degree"]:
        raise ValidationError(
            f"declared max_degree {obj['max_degree']} != actual {net.max_degree}"
        )
    return net
