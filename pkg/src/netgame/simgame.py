"""Derived games whose best responses execute a distributed algorithm.

The construction lifts a base game to a new game on the same agents:

1. The derived network connects two agents iff their distance in the base
   network is at most ``4t + 2``, where ``t`` is the radius of a
   normal-form algorithm ``F`` (a constant-radius rule that consumes a
   proper distance-``(2t+2)`` coloring and emits a base-game action).
2. A non-empty action of agent ``v`` is a coloring of its ``t``-ball with
   pairwise-distinct colors from ``1..palette`` together with the output
   label ``F`` yields on that colored ball. The pairing is enforced at
   construction, so invalid (coloring, label) combinations cannot exist.
3. Utility is 1 iff the agent's ball coloring agrees with every non-empty
   derived-neighbor's coloring on shared nodes and the union is a proper
   distance-``(2t+2)`` coloring; empty actions and clashes score 0.

Action sets are astronomically large (all distinct-color labelings of a
ball), so they are never enumerated: best responses are constructed
greedily, which always succeeds because the palette ``max_degree**(2t+2)+1``
exceeds the number of constraints any single ball node can face.

Everything here is computed from per-node views of radius at most
``4t + 2``: the derived edges, the ball colorings, and the pairwise
utility checks all come from bounded-depth breadth-first traversals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable

from .errors import SimulationFault, ValidationError
from .game import GraphicalGame, Profile
from .network import Network, power_graph

SimProfile = tuple["SimulationAction | None", ...]


@dataclass(frozen=True)
class BallView:
    """Induced subgraph on the nodes within ``radius`` of ``center``.

    ``order`` lists the ball's nodes by (distance from center, index); the
    adjacency map is restricted to the ball.
    """

    center: int
    radius: int
    order: tuple[int, ...]
    adjacency: dict[int, tuple[int, ...]]
    distance: dict[int, int]

    @classmethod
    def extract(cls, net: Network, center: int, radius: int) -> "BallView":
        dist = net.bfs_distances(center, limit=radius)
        nodes = set(dist)
        order = tuple(sorted(nodes, key=lambda w: (dist[w], w)))
        adj = {
            w: tuple(u for u in net.neighbors(w) if u in nodes) for w in nodes
        }
        return cls(center=center, radius=radius, order=order, adjacency=adj, distance=dist)

    def nodes(self) -> frozenset[int]:
        return frozenset(self.order)


@dataclass(frozen=True)
class NormalFormAlgorithm:
    """Constant-radius rule: colored ``t``-ball in, output label out.

    ``decide(view, coloring)`` must be deterministic and emit a value from
    the base game's action alphabet.
    """

    delta: int
    t: int
    palette: int
    decide: Callable[[BallView, dict[int, int]], object]


@dataclass(frozen=True)
class SimulationAction:
    """A ball coloring paired with the algorithm's output on it.

    Built only through `make_action`, which runs the algorithm itself, so
    the pairing invariant holds for every reachable instance. The empty
    action is represented by ``None`` wherever actions may appear.
    """

    assignment: tuple[tuple[int, int], ...]
    output: object

    @cached_property
    def coloring(self) -> dict[int, int]:
        return dict(self.assignment)


@dataclass(frozen=True)
class SimulationGame:
    """Derived game: base game, derived network, and the algorithm."""

    base: GraphicalGame
    algorithm: NormalFormAlgorithm
    network: Network
    network_prime: Network
    balls: tuple[BallView, ...]
    near_distances: tuple[dict[int, int], ...]  # per node, radius 2t+2

    @property
    def coloring_radius(self) -> int:
        return 2 * self.algorithm.t + 2


def greedy_mis_normal_form(delta: int) -> NormalFormAlgorithm:
    """A concrete normal-form rule computing a maximal independent set.

    Radius ``t = delta**2 + 1``, palette ``delta**(2t+2) + 1``. The rule
    simulates greedy joining in ascending color order, truncated to radius
    ``t - 1``, for the center and each of its neighbors; the center emits
    "P" iff it joins and no smaller-colored neighbor also joins. Both ends
    of an edge can evaluate each other's truncated run from their own
    balls, so two adjacent centers never both emit "P" regardless of the
    coloring; on graphs small enough that the truncation sees everything
    the output is exactly the global greedy maximal independent set.
    """
    if delta < 2:
        raise ValidationError("normal-form rule needs max degree >= 2")
    t = delta * delta + 1
    palette = delta ** (2 * t + 2) + 1

    def truncated_join(view: BallView, coloring: dict[int, int], x: int) -> bool:
        # Nodes within t-1 of x (via induced BFS; exact for this depth).
        from collections import deque

        dist = {x: 0}
        queue = deque([x])
        while queue:
            a = queue.popleft()
            if dist[a] >= t - 1:
                continue
            for b in view.adjacency[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    queue.append(b)
        joined: set[int] = set()
        for w in sorted(dist, key=lambda w: coloring[w]):
            if not any(y in joined for y in view.adjacency[w] if y in dist):
                joined.add(w)
        return x in joined

    def decide(view: BallView, coloring: dict[int, int]) -> object:
        center = view.center
        if not truncated_join(view, coloring, center):
            return "F"
        for u in view.adjacency[center]:
            if coloring[u] < coloring[center] and truncated_join(view, coloring, u):
                return "F"
        return "P"

    return NormalFormAlgorithm(delta=delta, t=t, palette=palette, decide=decide)


def build_simulation_game(base: GraphicalGame, algorithm: NormalFormAlgorithm) -> SimulationGame:
    """Assemble the derived game for ``base`` from per-node ball views."""
    net = base.network
    if net.max_degree > algorithm.delta:
        raise ValidationError(
            f"degree mismatch: network has max degree {net.max_degree}, "
            f"algorithm handles at most {algorithm.delta}"
        )
    t = algorithm.t
    prime = power_graph(net, 4 * t + 2)
    balls = tuple(BallView.extract(net, v, t) for v in range(net.node_count))
    near = tuple(net.bfs_distances(v, limit=2 * t + 2) for v in range(net.node_count))
    return SimulationGame(
        base=base,
        algorithm=algorithm,
        network=net,
        network_prime=prime,
        balls=balls,
        near_distances=near,
    )


def make_action(sim: SimulationGame, v: int, coloring: dict[int, int]) -> SimulationAction:
    """Validate a ball coloring and pair it with the algorithm's output."""
    view = sim.balls[v]
    if set(coloring) != set(view.order):
        raise ValidationError("coloring domain must be exactly the node's ball")
    values = list(coloring.values())
    if len(set(values)) != len(values):
        raise ValidationError("ball colors must be pairwise distinct")
    if any(not 1 <= c <= sim.algorithm.palette for c in values):
        raise ValidationError("ball colors must lie in 1..palette")
    output = sim.algorithm.decide(view, coloring)
    return SimulationAction(
        assignment=tuple(sorted(coloring.items())), output=output
    )


def empty_profile(sim: SimulationGame) -> SimProfile:
    return (None,) * sim.network.node_count


def simulation_utility(sim: SimulationGame, v: int, profile: SimProfile) -> Fraction:
    """1 if ``v``'s coloring is compatible with every played derived
    neighbor and jointly proper at the coloring radius, else 0."""
    action = profile[v]
    if action is None:
        return Fraction(0)
    for u in sim.network_prime.neighbors(v):
        other = profile[u]
        if other is None:
            continue
        if not _pair_consistent(sim, action, other):
            return Fraction(0)
    return Fraction(1)


def _pair_consistent(sim: SimulationGame, a: SimulationAction, b: SimulationAction) -> bool:
    radius = sim.coloring_radius
    for w, cw in a.assignment:
        near_w = sim.near_distances[w]
        for x, cx in b.assignment:
            if w == x:
                if cw != cx:
                    return False
            elif cw == cx and x in near_w and near_w[x] <= radius:
                return False
    return True


def constructive_best_response(
    sim: SimulationGame, v: int, profile: SimProfile
) -> SimulationAction:
    """Build a utility-1 action for ``v`` against the played strategies.

    Ball nodes already colored by a played derived neighbor keep that
    color; the rest are colored in ball order (distance from center, then
    index) with the smallest non-clashing color, searched from 1 at even
    distances from the center and from the palette midpoint at odd
    distances. The parity split keeps color-descent chains in the merged
    coloring short, which lets the bounded-radius decision rule reproduce
    the global greedy outcome; the palette bound guarantees a free color
    always exists either way.

    Raises:
        SimulationFault: if played neighbors force contradictory colors or
            the palette runs out; both are impossible from fair play
            starting at the all-empty profile.
    """
    view = sim.balls[v]
    ball_nodes = view.nodes()
    radius = sim.coloring_radius

    fixed: dict[int, int] = {}  # node -> color already published nearby
    for u in sim.network_prime.neighbors(v):
        other = profile[u]
        if other is None:
            continue
        for x, cx in other.assignment:
            if fixed.setdefault(x, cx) != cx:
                raise SimulationFault(
                    f"played neighbors of {v} disagree on the color of node {x}"
                )

    coloring: dict[int, int] = {}
    for w in view.order:
        if w in fixed:
            coloring[w] = fixed[w]
            continue
        near_w = sim.near_distances[w]
        forbidden = set(coloring.values())
        for x, cx in fixed.items():
            if x in near_w and near_w[x] <= radius:
                forbidden.add(cx)
        c = 1 if view.distance[w] % 2 == 0 else sim.algorithm.palette // 2
        while c in forbidden:
            c += 1
        if c > sim.algorithm.palette:
            raise SimulationFault(f"palette exhausted while coloring the ball of {v}")
        coloring[w] = c

    action = make_action(sim, v, coloring)
    trial = profile[:v] + (action,) + profile[v + 1 :]
    if simulation_utility(sim, v, trial) != 1:
        raise SimulationFault(f"constructed response for {v} does not reach utility 1")
    return action


def simulation_step(sim: SimulationGame, profile: SimProfile, v: int) -> SimProfile:
    """Best response for one agent, preferring the current action on ties."""
    if profile[v] is not None and simulation_utility(sim, v, profile) == 1:
        return profile
    action = constructive_best_response(sim, v, profile)
    return profile[:v] + (action,) + profile[v + 1 :]


def simulation_fair_round(
    sim: SimulationGame, profile: SimProfile, order: tuple[int, ...]
) -> tuple[SimProfile, int]:
    """One fair round; returns the new profile and the switch count."""
    if sorted(order) != list(range(sim.network.node_count)):
        raise ValidationError("order must be a permutation of the agents")
    switches = 0
    for v in order:
        before = profile[v]
        profile = simulation_step(sim, profile, v)
        if profile[v] is not before:
            switches += 1
    return profile, switches


def play_simulation_round(
    sim: SimulationGame, order: tuple[int, ...], seed: int = 0
) -> SimProfile:
    """One fair round from the all-empty profile; every utility ends at 1.

    The construction is deterministic; ``seed`` is part of the interface
    for schedule generators and is unused here.
    """
    profile, _ = simulation_fair_round(sim, empty_profile(sim), order)
    for v in range(sim.network.node_count):
        if simulation_utility(sim, v, profile) != 1:
            raise SimulationFault(f"agent {v} finished the opening round below utility 1")
    return profile


def project(sim: SimulationGame, profile: SimProfile) -> Profile:
    """Map each agent's output label to the base game's action index."""
    base = sim.base
    out = []
    for v, action in enumerate(profile):
        if action is None:
            raise ValidationError(f"cannot project: agent {v} plays the empty action")
        out.append(base.action_index(v, action.output))
    return tuple(out)


def merged_coloring(sim: SimulationGame, profile: SimProfile) -> dict[int, int]:
    """Union of all played ball colorings; raises if owners disagree."""
    merged: dict[int, int] = {}
    for v, action in enumerate(profile):
        if action is None:
            continue
        for x, cx in action.assignment:
            if merged.setdefault(x, cx) != cx:
                raise SimulationFault(f"played colorings disagree on node {x}")
    return merged


def simulation_report(
    sim: SimulationGame, one_round_converged: bool, projection_is_ne: bool
) -> dict:
    return {
        "t": sim.algorithm.t,
        "palette": sim.algorithm.palette,
        "n_prime_degree": sim.network_prime.max_degree,
        "one_round_converged": one_round_converged,
        "projection_is_ne": projection_is_ne,
        "round_accounting_note": (
            "reported round counts cover the schedule phase only; the "
            "coloring phase is excluded"
        ),
    }
