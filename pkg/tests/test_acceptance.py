"""Acceptance suite: one test per criterion, at the stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` for one pass/fail line per
criterion; add ``-s`` to see the measured values each test prints.
"""

import itertools
import time
from fractions import Fraction
from random import Random

from netgame.dynamics import (
    Exceeded,
    FreshRandomEachRound,
    RandomInit,
    fair_round,
    run,
    worst_case_convergence,
)
from netgame.game import (
    coloring_game,
    is_nash_equilibrium,
    minority_cut_edges,
    minority_game,
    pgg_game,
    random_profile,
)
from netgame.lvl import compile_lvl, verify
from netgame.network import (
    CycleCutConstraint,
    Network,
    bipartite_double_cover,
    cut_short_cycles,
    degree_multiset,
    girth,
    is_perfect_dominating_set,
    random_regular,
    ring,
    star_matching,
    torus,
    two_coloring,
)
from netgame.local_sim import distance_coloring, simulate_fair_rounds
from netgame.oracle import (
    enumerate_ne,
    find_frozen_configuration,
    is_proper_coloring,
    minority_poa_report,
    poa_pgg_instance,
    proper_coloring_exists,
)
from netgame.simgame import (
    build_simulation_game,
    greedy_mis_normal_form,
    play_simulation_round,
    project,
    simulation_fair_round,
    simulation_utility,
)
from conftest import path_graph, star_graph

HALF = Fraction(1, 2)


def test_criterion_01_equilibria_equal_accepted_labelings(atlas6):
    """Definitional equilibrium check and compiled verifier agree exactly
    on every profile of every connected graph on <= 6 nodes."""
    start = time.time()
    assert len(atlas6) >= 50
    checked = 0
    disagreements = 0
    for net in atlas6:
        games = (pgg_game(net, HALF), minority_game(net), coloring_game(net, 3))
        for game in games:
            spec = compile_lvl(game)
            sizes = [range(len(a)) for a in game.actions]
            for profile in itertools.product(*sizes):
                checked += 1
                if verify(spec, net, profile).accepted != is_nash_equilibrium(game, profile):
                    disagreements += 1
    elapsed = time.time() - start
    assert disagreements == 0
    assert elapsed < 60
    print(
        f"[criterion 1] PASS: {checked} profile checks over {len(atlas6)} graphs, "
        f"0 disagreements, {elapsed:.1f}s"
    )


def test_criterion_02_production_game_two_round_convergence():
    """Convergence round <= 2: exhaustively over all order sequences on
    small paths/rings/stars, and on 100 seeded runs at n=1000."""
    small = (
        [path_graph(n) for n in range(2, 6)]
        + [ring(n) for n in range(3, 6)]
        + [star_graph(n) for n in range(3, 6)]
    )
    exhaustive_cases = 0
    for net in small:
        game = pgg_game(net, HALF)
        for bits in range(1 << net.node_count):
            init = tuple(bits >> v & 1 for v in range(net.node_count))
            value = worst_case_convergence(game, init, 3)
            assert not isinstance(value, Exceeded)
            assert value <= 2
            exhaustive_cases += 1

    net = random_regular(1000, 3, seed=2024)
    game = pgg_game(net, HALF)
    for i in range(100):
        trace = run(game, RandomInit(i), FreshRandomEachRound(10_000 + i))
        assert trace.converged and trace.convergence_round <= 2
    print(
        f"[criterion 2] PASS: {exhaustive_cases} exhaustive worst-case inits <= 2; "
        "100/100 runs at n=1000 converged within 2 rounds"
    )


def test_criterion_03_cut_monotonicity_and_initial_cut_fraction():
    """(a) every anti-coordination switch adds a cut edge (engine-checked);
    (b) mean initial cut fraction is 1/2 within 3 binomial sigma."""
    # (a) the engine raises on any violation; exercise a batch of runs
    runs = 0
    for seed in range(10):
        net = random_regular(60, 3 + seed % 2, seed=seed)
        game = minority_game(net)
        trace = run(game, RandomInit(seed), FreshRandomEachRound(seed + 50))
        assert trace.converged
        runs += 1
    for n in (3, 4, 5):
        trace = run(minority_game(torus(n)), RandomInit(n), FreshRandomEachRound(n))
        assert trace.converged
        runs += 1

    # (b) edge cut indicators are pairwise independent under uniform play
    net = random_regular(100, 4, seed=7)
    game = minority_game(net)
    m = net.edge_count
    trials = 1000
    rng = Random(31)
    total_cut = sum(
        minority_cut_edges(game, random_profile(game, rng)) for _ in range(trials)
    )
    fraction = total_cut / (trials * m)
    sigma = (0.25 / (trials * m)) ** 0.5
    assert abs(fraction - 0.5) <= 3 * sigma
    print(
        f"[criterion 3] PASS: {runs} monotonicity-checked runs; initial cut "
        f"fraction {fraction:.5f} within 3 sigma ({3 * sigma:.5f}) of 0.5"
    )


def test_criterion_04_production_benchmark_price_of_anarchy():
    """Exhaustive price of anarchy 7/6 on the 16-node benchmark, with the
    two structural equilibria present."""
    start = time.time()
    d, k = 3, 2
    report = poa_pgg_instance(d, k, HALF, seed=11)
    assert report.poa == Fraction(7, 6)

    base, centers, _ = star_matching(k, d, seed=11)
    net = bipartite_double_cover(base)
    assert net.node_count == 16
    n0 = base.node_count
    center_profile = tuple(1 if (v % n0) in centers else 0 for v in range(16))
    side_profile = tuple(1 if v < n0 else 0 for v in range(16))
    assert center_profile in report.equilibria and sum(center_profile) == 4
    assert side_profile in report.equilibria and sum(side_profile) == 8
    elapsed = time.time() - start
    assert elapsed < 60
    print(f"[criterion 4] PASS: poa = 7/6 exactly, both equilibria present, {elapsed:.1f}s")


def test_criterion_05_anticoordination_welfare_comparands():
    """On a 4-regular bipartite n=8 graph: exhaustive max welfare 40, every
    equilibrium's welfare >= 8, and the report flags the closed-form gap."""
    net = Network.from_edges(8, [(v, (v + 1) % 8) for v in range(8)] + [(v, (v + 3) % 8) for v in range(8)])
    assert degree_multiset(net) == (4,) * 8
    assert two_coloring(net) is not None
    game = minority_game(net)
    report = enumerate_ne(game)
    assert report.best_welfare == (4 + 1) * 8 == 40
    assert report.worst_ne_welfare >= 8
    payload = minority_poa_report(game)
    assert payload["closed_form_candidate"] == "10"
    assert payload["poa_matches_closed_form"] is False
    print(
        f"[criterion 5] PASS: max welfare 40, worst equilibrium welfare "
        f"{report.worst_ne_welfare}, closed-form gap flagged "
        f"(derived {payload['derived_poa']} vs 10)"
    )


def test_criterion_06_graph_constructions_certified():
    """Star-matching domination, girth raising under all three constraints,
    and double-cover bipartiteness, all certified exactly."""
    for k in (2, 4, 6):
        net, centers, _ = star_matching(k, 3, seed=k)
        assert degree_multiset(net) == (3,) * (4 * k)
        assert is_perfect_dominating_set(net, centers)

    base = random_regular(64, 3, seed=7)
    cut = cut_short_cycles(base, 6, seed=1)
    assert girth(cut) >= 6
    assert degree_multiset(cut) == (3,) * 64
    assert cut.edge_count == base.edge_count

    stars, centers, leaf_edges = star_matching(16, 3, seed=5)
    cut_stars = cut_short_cycles(
        stars, 6, CycleCutConstraint.leaf_edges_only(leaf_edges), seed=2
    )
    assert girth(cut_stars) >= 6
    assert degree_multiset(cut_stars) == (3,) * 64
    assert is_perfect_dominating_set(cut_stars, centers)

    bip = bipartite_double_cover(random_regular(32, 3, seed=11))
    sides = two_coloring(bip)
    cut_bip = cut_short_cycles(
        bip, 6, CycleCutConstraint.preserve_bipartition(*sides), seed=3
    )
    assert girth(cut_bip) >= 6
    assert two_coloring(cut_bip) is not None
    assert degree_multiset(cut_bip) == (3,) * 64

    for net in (ring(3), random_regular(20, 3, seed=4), stars):
        cover = bipartite_double_cover(net)
        assert two_coloring(cover) is not None
        g_in = girth(net)
        assert girth(cover) >= g_in
    print("[criterion 6] PASS: all construction certifiers green (girth >= 6 at n=64)")


def test_criterion_07_schedule_simulation_equals_sequential_play():
    """50 seeded (graph, game) instances, n <= 200: parallel color-class
    rounds equal sequential replay exactly; palettes within degree**2 + 1."""
    rng = Random(99)
    checked = 0
    for trial in range(50):
        kind = trial % 3
        if kind == 0:
            net = ring(rng.randrange(10, 200))
        elif kind == 1:
            net = torus(rng.randrange(3, 14))
        else:
            d = rng.choice([3, 4])
            n = rng.randrange(10, 200)
            if (n * d) % 2:
                n += 1
            net = random_regular(n, d, seed=trial)
        game = [
            pgg_game(net, HALF),
            minority_game(net),
            coloring_game(net, net.max_degree + 1),
        ][trial % 3]
        coloring = distance_coloring(net, 2)
        assert coloring.palette_size <= net.max_degree**2 + 1
        init = random_profile(game, Random(trial))
        final, orders = simulate_fair_rounds(game, init, coloring, 2)
        replay = init
        for order in orders:
            replay = fair_round(game, replay, order)
        assert replay == final
        checked += 1
    assert checked == 50
    print("[criterion 7] PASS: 50/50 instances byte-identical to sequential replay")


def test_criterion_08_simulation_game_one_round_and_projection():
    """Derived game on ring(64), radius 5: one fair round from all-empty
    reaches full utility for 20 random orders; projections verify."""
    start = time.time()
    net = ring(64)
    base = pgg_game(net, HALF)
    sim = build_simulation_game(base, greedy_mis_normal_form(2))
    assert sim.algorithm.t == 5
    verifier = compile_lvl(base)
    for i in range(20):
        rng = Random(4_000 + i)
        order = list(range(64))
        rng.shuffle(order)
        profile = play_simulation_round(sim, tuple(order))
        assert all(simulation_utility(sim, v, profile) == 1 for v in range(64))
        again, switches = simulation_fair_round(sim, profile, tuple(order))
        assert switches == 0 and again == profile
        assert verify(verifier, net, project(sim, profile)).accepted
    elapsed = time.time() - start
    assert elapsed < 120
    print(f"[criterion 8] PASS: 20/20 orders converge in one round and project "
          f"to verified equilibria, {elapsed:.1f}s")


def test_criterion_09_frozen_colorings():
    """k=4 on the 6-torus: a stuck non-proper equilibrium is found within
    the budget and survives 100 fair rounds; k=5 finds nothing and every
    enumerated equilibrium on the 3-torus is proper."""
    net = torus(6)
    game = coloring_game(net, 4)
    profile = find_frozen_configuration(net, 4, seed=1, budget=10**6)
    assert profile is not None
    assert verify(compile_lvl(game), net, profile).accepted
    assert not is_proper_coloring(game, profile)
    current = profile
    rng = Random(8)
    for _ in range(100):
        order = list(range(36))
        rng.shuffle(order)
        current = fair_round(game, current, tuple(order))
        assert current == profile
        assert not is_proper_coloring(game, current)

    assert find_frozen_configuration(net, 5, seed=1, budget=10**6) is None

    t3 = torus(3)
    g5 = coloring_game(t3, 5)
    report = enumerate_ne(g5)
    assert report.equilibria
    assert all(is_proper_coloring(g5, p) for p in report.equilibria)
    print(
        f"[criterion 9] PASS: frozen profile found for k=4 and stable for 100 "
        f"rounds; k=5 NotFound; all {len(report.equilibria)} enumerated "
        "equilibria at k=5 are proper"
    )


def test_criterion_10_global_coloring_cases():
    """2-colorability of tori matches parity; 3-colorings exist; dynamics
    at k=2 from random starts often stall (reported, not asserted)."""
    assert proper_coloring_exists(torus(4), 2)
    assert not proper_coloring_exists(torus(5), 2)  # odd side: no 2-coloring
    assert proper_coloring_exists(torus(4), 3)

    net = torus(4)
    game = coloring_game(net, 2)
    failures = 0
    for i in range(100):
        trace = run(game, RandomInit(i), FreshRandomEachRound(700 + i))
        if not (trace.converged and is_proper_coloring(game, trace.final)):
            failures += 1
    assert 0 <= failures <= 100
    print(
        f"[criterion 10] PASS: 2/3-colorability confirmed; dynamics failed to "
        f"reach a proper 2-coloring in {failures}/100 runs (reported only)"
    )
