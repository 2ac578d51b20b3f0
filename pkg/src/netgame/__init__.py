"""Graphical games on bounded-degree networks.

Simulation of fair-round best-response dynamics, compilation of
equilibrium conditions into radius-1 local verifiers, schedule-driven
parallel replay, derived games that execute distributed algorithms, and
exhaustive desk-scale oracles.
"""

from .errors import (
    ConstructionError,
    GuardError,
    NetgameError,
    SimulationFault,
    ValidationError,
)
from .network import (
    CycleCutConstraint,
    Network,
    bipartite_double_cover,
    cut_short_cycles,
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
from .game import (
    GraphicalGame,
    best_responses,
    coloring_game,
    game_from_descriptor,
    is_nash_equilibrium,
    minority_cut_edges,
    minority_game,
    pgg_game,
    utility,
    welfare,
)
from .lvl import LvlSpec, Verdict, compile_lvl, verify
from .dynamics import (
    EXCEEDED,
    ExplicitOrders,
    FixedOrder,
    FreshRandomEachRound,
    RandomInit,
    Trace,
    fair_round,
    run,
    step,
    trace_to_csv,
    worst_case_convergence,
)
from .local_sim import DistanceColoring, distance_coloring, simulate_fair_rounds
from .simgame import (
    NormalFormAlgorithm,
    SimulationGame,
    build_simulation_game,
    greedy_mis_normal_form,
    play_simulation_round,
    project,
    simulation_utility,
)
from .oracle import (
    InefficiencyReport,
    NeReport,
    combinatorial_optima,
    enumerate_ne,
    find_frozen_configuration,
    measured_inefficiency,
    minority_poa_report,
    poa_pgg_instance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
