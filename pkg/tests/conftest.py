"""Shared fixtures: small-graph atlas and common generators."""

from itertools import combinations, permutations

import pytest

from netgame.network import Network


def path_graph(n: int) -> Network:
    return Network.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(n: int) -> Network:
    return Network.from_edges(n, [(0, i) for i in range(1, n)])


def complete_graph(n: int) -> Network:
    return Network.from_edges(n, list(combinations(range(n), 2)))


def _edge_positions(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def _is_connected(n: int, mask: int, positions) -> bool:
    if n <= 1:
        return True
    adj = [[] for _ in range(n)]
    for bit, (u, v) in enumerate(positions):
        if mask >> bit & 1:
            adj[u].append(v)
            adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def _permute_mask(n: int, mask: int, perm, positions, index) -> int:
    out = 0
    for bit, (u, v) in enumerate(positions):
        if mask >> bit & 1:
            pu, pv = perm[u], perm[v]
            if pu > pv:
                pu, pv = pv, pu
            out |= 1 << index[(pu, pv)]
    return out


def connected_graph_atlas(max_n: int) -> list[Network]:
    """One representative per isomorphism class of connected graphs on
    1..max_n nodes, in a fixed deterministic order."""
    atlas: list[Network] = []
    for n in range(1, max_n + 1):
        positions = _edge_positions(n)
        index = {pos: i for i, pos in enumerate(positions)}
        perms = list(permutations(range(n)))
        seen: set[int] = set()
        for mask in range(1 << len(positions)):
            if mask in seen:
                continue
            if not _is_connected(n, mask, positions):
                continue
            for perm in perms:
                seen.add(_permute_mask(n, mask, perm, positions, index))
            edges = [positions[b] for b in range(len(positions)) if mask >> b & 1]
            atlas.append(Network.from_edges(n, edges))
    return atlas


@pytest.fixture(scope="session")
def atlas6() -> list[Network]:
    return connected_graph_atlas(6)


@pytest.fixture(scope="session")
def atlas5() -> list[Network]:
    return connected_graph_atlas(5)
