"""Replay of best-response rounds on a distance-2 coloring schedule.

Color classes of a distance-2 coloring are independent sets of the square
graph: no two same-color nodes are adjacent or share a neighbor, so a
whole class can play simultaneously and the outcome equals sequential play
of the class in any internal order. One simulated fair round activates the
classes ``1..palette`` in turn and therefore costs ``palette`` rounds of
synchronous message passing; the greedy coloring below keeps the palette
within ``max_degree**2 + 1`` at radius 2.

The coloring itself is computed centrally; reported round counts cover the
schedule phase only and say so in output metadata.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .game import GraphicalGame, Profile, validate_profile
from .dynamics import preferred_best_response
from .network import Network


@dataclass(frozen=True)
class DistanceColoring:
    """Proper coloring at a given radius: any two nodes within graph
    distance ``radius`` hold distinct colors from ``1..palette_size``."""

    radius: int
    colors: tuple[int, ...]
    palette_size: int

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "palette": self.palette_size,
            "colors": list(self.colors),
        }


def distance_coloring(net: Network, r: int) -> DistanceColoring:
    """Greedy proper distance-``r`` coloring over ascending node index.

    Each node takes the smallest color unused within distance ``r``. At
    radius 1 this uses at most ``max_degree + 1`` colors, at radius 2 at
    most ``max_degree**2 + 1``.
    """
    if r < 1:
        raise ValidationError("distance_coloring needs radius >= 1")
    colors = [0] * net.node_count
    for v in range(net.node_count):
        taken = {
            colors[u]
            for u, d in net.bfs_distances(v, limit=r).items()
            if 0 < d and colors[u] != 0
        }
        c = 1
        while c in taken:
            c += 1
        colors[v] = c
    palette = max(colors, default=0)
    return DistanceColoring(radius=r, colors=tuple(colors), palette_size=max(palette, 1))


def check_coloring(net: Network, coloring: DistanceColoring) -> None:
    """Raise unless the coloring is proper at its radius for this network."""
    if len(coloring.colors) != net.node_count:
        raise ValidationError("coloring length does not match the network")
    if any(c < 1 or c > coloring.palette_size for c in coloring.colors):
        raise ValidationError("colors must lie in 1..palette_size")
    for v in range(net.node_count):
        for u, d in net.bfs_distances(v, limit=coloring.radius).items():
            if 0 < d and coloring.colors[u] == coloring.colors[v]:
                raise ValidationError(
                    f"nodes {v} and {u} at distance {d} share color {coloring.colors[v]}"
                )


def simulate_fair_rounds(
    game: GraphicalGame,
    init: Profile,
    coloring: DistanceColoring,
    rounds: int,
) -> tuple[Profile, list[tuple[int, ...]]]:
    """Run ``rounds`` fair rounds with same-color nodes updating together.

    Per round, classes are activated in color order; class members compute
    best responses against the profile as of class start and all update at
    once. Returns the final profile and, per round, the color-major
    index-minor permutation whose sequential replay produces the same
    profiles.

    Raises:
        ValidationError: if the coloring is not a proper distance-2
            coloring of the game's network.
    """
    if coloring.radius != 2:
        raise ValidationError("the schedule needs a distance-2 coloring")
    net = game.network
    check_coloring(net, coloring)
    validate_profile(game, init)
    if rounds < 0:
        raise ValidationError("rounds must be >= 0")

    classes: dict[int, list[int]] = {}
    for v in range(net.node_count):
        classes.setdefault(coloring.colors[v], []).append(v)
    class_order = sorted(classes)

    profile = tuple(init)
    induced_orders: list[tuple[int, ...]] = []
    for _ in range(rounds):
        _assert_classes_independent(net, classes)
        order: list[int] = []
        for color in class_order:
            members = classes[color]
            snapshot = profile
            updates = {v: preferred_best_response(game, snapshot, v) for v in members}
            profile = tuple(
                updates.get(v, profile[v]) for v in range(net.node_count)
            )
            order.extend(members)
        induced_orders.append(tuple(order))
    return profile, induced_orders


def _assert_classes_independent(net: Network, classes: dict[int, list[int]]) -> None:
    for members in classes.values():
        member_set = set(members)
        for v in members:
            for u, d in net.bfs_distances(v, limit=2).items():
                if 0 < d and u in member_set:
                    raise ValidationError(
                        f"schedule class contains {v} and {u} at distance {d}"
                    )
