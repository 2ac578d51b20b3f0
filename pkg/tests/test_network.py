from random import Random

import pytest

from netgame.errors import ConstructionError, ValidationError
from netgame.network import (
    CycleCutConstraint,
    Network,
    bipartite_double_cover,
    cut_short_cycles,
    degree_multiset,
    girth,
    graph_from_json,
    graph_to_json,
    is_perfect_dominating_set,
    power_graph,
    random_regular,
    ring,
    star_matching,
    torus,
    two_coloring,
)
from conftest import complete_graph, path_graph


def exhaustive_girth(net: Network) -> int | None:
    """Independent oracle: DFS enumeration of every simple cycle."""
    best = None
    n = net.node_count

    def extend(start: int, path: list[int], on_path: set[int]) -> None:
        nonlocal best
        here = path[-1]
        for nxt in net.neighbors(here):
            if nxt == start and len(path) >= 3:
                if best is None or len(path) < best:
                    best = len(path)
            elif nxt > start and nxt not in on_path:
                path.append(nxt)
                on_path.add(nxt)
                extend(start, path, on_path)
                on_path.discard(nxt)
                path.pop()

    for s in range(n):
        extend(s, [s], {s})
    return best


# -- construction and validation


def test_ring_4():
    net = ring(4)
    assert net.node_count == 4
    assert net.edges() == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert net.max_degree == 2


def test_ring_3_is_triangle():
    assert girth(ring(3)) == 3


def test_ring_rejects_small_n():
    with pytest.raises(ValidationError):
        ring(2)


def test_network_rejects_asymmetric_adjacency():
    with pytest.raises(ValidationError):
        Network(((1,), ()))


def test_network_rejects_self_loop():
    with pytest.raises(ValidationError):
        Network.from_edges(2, [(0, 0)])


def test_network_rejects_duplicate_edge():
    with pytest.raises(ValidationError):
        Network.from_edges(2, [(0, 1), (1, 0)])


# -- torus


def test_torus_3_shape():
    net = torus(3)
    assert net.node_count == 9
    assert net.edge_count == 18
    assert degree_multiset(net) == (4,) * 9


def test_torus_4_girth_matches_oracle():
    net = torus(4)
    assert girth(net) == 4
    assert exhaustive_girth(net) == 4


def test_torus_rejects_small_n():
    with pytest.raises(ValidationError):
        torus(2)


# -- random regular


def test_random_regular_10_3():
    net = random_regular(10, 3, seed=1)
    assert net.edge_count == 15
    assert degree_multiset(net) == (3,) * 10


def test_random_regular_rejects_odd_parity():
    with pytest.raises(ValidationError):
        random_regular(9, 3, seed=1)


def test_random_regular_large_instance_is_simple():
    net = random_regular(1000, 3, seed=42)
    assert degree_multiset(net) == (3,) * 1000
    g = girth(net)
    assert g is not None and g >= 3


def test_random_regular_deterministic_per_seed():
    assert random_regular(20, 3, seed=9).edges() == random_regular(20, 3, seed=9).edges()


# -- star matching


def test_star_matching_4_3():
    net, centers, leaf_edges = star_matching(4, 3, seed=0)
    assert net.node_count == 16
    assert degree_multiset(net) == (3,) * 16
    assert len(centers) == 4
    assert is_perfect_dominating_set(net, centers)
    # leaf edges are exactly the non-star edges
    star_edges = {e for e in net.edges() if e[0] in centers or e[1] in centers}
    assert leaf_edges == frozenset(net.edges()) - star_edges


def test_star_matching_6_3():
    net, centers, _ = star_matching(6, 3, seed=3)
    assert net.node_count == 24
    assert degree_multiset(net) == (3,) * 24
    assert len(centers) == 6
    assert is_perfect_dominating_set(net, centers)


def test_star_matching_infeasible_odd_leaves():
    with pytest.raises(ValidationError):
        star_matching(1, 3, seed=0)


# -- cycle cutting


def test_cut_short_cycles_unconstrained():
    net = random_regular(64, 3, seed=7)
    assert girth(net) == 3
    out = cut_short_cycles(net, 5, seed=1)
    assert girth(out) >= 5
    assert degree_multiset(out) == degree_multiset(net)
    assert out.edge_count == net.edge_count


def test_cut_short_cycles_preserves_bipartition():
    net = bipartite_double_cover(random_regular(24, 3, seed=2))
    sides = two_coloring(net)
    assert sides is not None
    out = cut_short_cycles(net, 6, CycleCutConstraint.preserve_bipartition(*sides), seed=4)
    assert girth(out) >= 6
    assert two_coloring(out) is not None


def test_cut_short_cycles_leaf_edges_keep_domination():
    net, centers, leaf_edges = star_matching(16, 3, seed=5)
    out = cut_short_cycles(net, 6, CycleCutConstraint.leaf_edges_only(leaf_edges), seed=6)
    assert girth(out) >= 6
    assert is_perfect_dominating_set(out, centers)


def test_cut_short_cycles_impossible_target_errors():
    with pytest.raises(ConstructionError):
        cut_short_cycles(ring(6), 10, seed=0)


def test_cut_short_cycles_auto_girth_target():
    net = random_regular(82, 3, seed=12)
    out = cut_short_cycles(net, "auto", seed=0)
    # floor(log_3 82) = 4
    assert girth(out) >= 4
    assert degree_multiset(out) == degree_multiset(net)


# -- double cover


def test_double_cover_of_triangle_is_six_cycle():
    out = bipartite_double_cover(ring(3))
    assert out.node_count == 6
    assert degree_multiset(out) == (2,) * 6
    assert girth(out) == 6
    assert two_coloring(out) is not None


def test_double_cover_of_ring4_is_two_squares():
    out = bipartite_double_cover(ring(4))
    assert out.node_count == 8
    assert girth(out) == 4
    # two components of four nodes each
    comp = out.bfs_distances(0)
    assert len(comp) == 4


def test_double_cover_preserves_degrees_and_girth():
    for net in (torus(3), random_regular(12, 3, seed=8)):
        out = bipartite_double_cover(net)
        assert degree_multiset(out) == degree_multiset(net) * 2
        assert girth(out) >= girth(net)


# -- power graph


def test_power_graph_ring8_radius2():
    out = power_graph(ring(8), 2)
    expected = {(v, (v + 1) % 8) for v in range(8)} | {(v, (v + 2) % 8) for v in range(8)}
    assert set(out.edges()) == {tuple(sorted(e)) for e in expected}


def test_power_graph_radius1_is_identity():
    net = random_regular(16, 3, seed=3)
    assert power_graph(net, 1).edges() == net.edges()


def test_power_graph_ring5_radius2_is_complete():
    assert power_graph(ring(5), 2).edges() == complete_graph(5).edges()


# -- girth


def test_girth_examples():
    assert girth(ring(5)) == 5
    assert girth(complete_graph(4)) == 3
    assert girth(path_graph(3)) is None


def test_girth_matches_exhaustive_enumeration_on_atlas(atlas6):
    for net in atlas6:
        assert girth(net) == exhaustive_girth(net)


def test_girth_matches_exhaustive_on_random_graphs_up_to_8():
    # sparse, dense, and disconnected graphs alike
    rng = Random(11)
    for trial in range(120):
        n = rng.randrange(2, 9)
        p = rng.choice([0.2, 0.4, 0.8])
        edges = [e for e in complete_graph(n).edges() if rng.random() < p]
        net = Network.from_edges(n, edges)
        assert girth(net) == exhaustive_girth(net)


# -- JSON interchange


def test_graph_json_round_trip():
    net = torus(3)
    obj = graph_to_json(net, meta={"generator": "torus", "seed": 0, "params": {"n": 3}})
    assert obj["n"] == 9
    assert obj["edges"] == sorted(obj["edges"])
    assert graph_from_json(obj).edges() == net.edges()


@pytest.mark.parametrize(
    "mangle",
    [
        lambda o: o["edges"].append([1, 0]),  # asymmetric order
        lambda o: o["edges"].append(o["edges"][0]),  # duplicate
        lambda o: o.update(max_degree=99),
        lambda o: o.pop("n"),
        lambda o: o["edges"].append([0, 0]),
        lambda o: o.update(edges=17),
        lambda o: o["edges"].append([0, "x"]),
    ],
)
def test_graph_json_rejects_malformed(mangle):
    obj = graph_to_json(ring(4))
    mangle(obj)
    with pytest.raises(ValidationError):
        graph_from_json(obj)


def test_generator_outputs_pass_validator():
    # construction re-validates; reaching here means the invariants held
    for net in (ring(7), torus(4), random_regular(14, 3, seed=2), star_matching(4, 3, 1)[0]):
        Network(net.adjacency)
