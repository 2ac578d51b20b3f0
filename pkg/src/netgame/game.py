"""Games on networks: per-node action lists and local utility evaluators.

A profile assigns each node an index into its action list; the list order
is the fixed tie-breaking order. Utilities are exact rationals so that
ties are detected exactly. Games are immutable after construction and
utility evaluation is pure, so instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Callable

from .errors import ValidationError
from .network import Network

Action = object  # an action value, e.g. "P", -1, or a color number
Profile = tuple[int, ...]  # one action index per node

UtilityFn = Callable[[int, Action, tuple[Action, ...]], Fraction]


@dataclass(frozen=True)
class GraphicalGame:
    """A network together with per-node actions and a local utility.

    ``utility_fn(v, own_value, neighbor_values)`` sees only the closed
    neighborhood: the node, its own action value, and the action values of
    its neighbors in adjacency order. Locality is therefore enforced by
    the interface shape.
    """

    network: Network
    actions: tuple[tuple[Action, ...], ...]
    utility_fn: UtilityFn
    name: str

    def action_value(self, v: int, idx: int) -> Action:
        return self.actions[v][idx]

    def action_index(self, v: int, value: Action) -> int:
        return self.actions[v].index(value)


def validate_profile(game: GraphicalGame, profile: Profile) -> None:
    if len(profile) != game.network.node_count:
        raise ValidationError(
            f"profile has {len(profile)} entries for {game.network.node_count} nodes"
        )
    for v, idx in enumerate(profile):
        if not isinstance(idx, int) or not 0 <= idx < len(game.actions[v]):
            raise ValidationError(f"profile entry {idx!r} invalid for node {v}")


def random_profile(game: GraphicalGame, rng: Random) -> Profile:
    """Uniform independent draw per node over that node's action list."""
    return tuple(rng.randrange(len(game.actions[v])) for v in range(game.network.node_count))


def neighbor_values(game: GraphicalGame, v: int, profile: Profile) -> tuple[Action, ...]:
    return tuple(game.actions[u][profile[u]] for u in game.network.neighbors(v))


def utility(game: GraphicalGame, v: int, profile: Profile) -> Fraction:
    """Exact utility of node ``v`` under ``profile``."""
    validate_profile(game, profile)
    own = game.actions[v][profile[v]]
    return game.utility_fn(v, own, neighbor_values(game, v, profile))


def welfare(game: GraphicalGame, profile: Profile) -> Fraction:
    """Total welfare: the sum of all node utilities."""
    validate_profile(game, profile)
    total = Fraction(0)
    for v in range(game.network.node_count):
        own = game.actions[v][profile[v]]
        total += game.utility_fn(v, own, neighbor_values(game, v, profile))
    return total


def best_responses(game: GraphicalGame, v: int, profile: Profile) -> tuple[int, ...]:
    """All action indices of ``v`` maximizing its utility given the
    neighbors' entries of ``profile``, in tie-break (list) order."""
    nbr_vals = neighbor_values(game, v, profile)
    payoffs = [game.utility_fn(v, a, nbr_vals) for a in game.actions[v]]
    top = max(payoffs)
    return tuple(i for i, p in enumerate(payoffs) if p == top)


def is_nash_equilibrium(game: GraphicalGame, profile: Profile) -> bool:
    """Definitional check: no node can gain by a unilateral deviation."""
    for v in range(game.network.node_count):
        nbr_vals = neighbor_values(game, v, profile)
        current = game.utility_fn(v, game.actions[v][profile[v]], nbr_vals)
        for a in game.actions[v]:
            if game.utility_fn(v, a, nbr_vals) > current:
                return False
    return True


# ---------------------------------------------------------------------------
# The three built-in games


def pgg_game(net: Network, c: Fraction) -> GraphicalGame:
    """Best-shot public goods game with production cost ``c``.

    Actions are ``(F, P)`` in that tie-break order. Producing yields
    ``1 - c``; free-riding next to a producer yields 1; an uncovered
    non-producer gets 0. ``c`` must lie strictly between 0 and 1, else the
    best-response structure degenerates.
    """
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValidationError(f"production cost must satisfy 0 < c < 1, got {c}")
    produce, covered, uncovered = Fraction(1) - c, Fraction(1), Fraction(0)

    def u(v: int, own: Action, nbrs: tuple[Action, ...]) -> Fraction:
        if own == "P":
            return produce
        return covered if "P" in nbrs else uncovered

    actions = tuple(("F", "P") for _ in range(net.node_count))
    return GraphicalGame(net, actions, u, "pgg")


def minority_game(net: Network) -> GraphicalGame:
    """Anti-coordination game with actions ``(-1, +1)``.

    Utility is one plus the number of neighbors playing the opposite
    action minus the number playing the same action, counted over the open
    neighborhood (the node itself is excluded).
    """

    def u(v: int, own: Action, nbrs: tuple[Action, ...]) -> Fraction:
        differ = sum(1 for x in nbrs if x != own)
        same = len(nbrs) - differ
        return Fraction(1 + differ - same)

    actions = tuple((-1, 1) for _ in range(net.node_count))
    return GraphicalGame(net, actions, u, "minority")


def coloring_game(net: Network, k: int) -> GraphicalGame:
    """Coordination game on ``k >= 2`` colors: utility 1 iff no neighbor
    picks the same color."""
    if not isinstance(k, int) or k < 2:
        raise ValidationError(f"coloring game needs k >= 2, got {k}")

    def u(v: int, own: Action, nbrs: tuple[Action, ...]) -> Fraction:
        return Fraction(0) if own in nbrs else Fraction(1)

    actions = tuple(tuple(range(1, k + 1)) for _ in range(net.node_count))
    return GraphicalGame(net, actions, u, "coloring")


_DESCRIPTOR_KEYS = {"pgg": {"game", "c"}, "minority": {"game"}, "coloring": {"game", "k"}}


def game_from_descriptor(desc: dict, net: Network) -> GraphicalGame:
    """Build a game from the JSON descriptor ``{"game", "c"?, "k"?}``."""
    if not isinstance(desc, dict) or "game" not in desc:
        raise ValidationError("game descriptor must be an object with a 'game' field")
    kind = desc["game"]
    if kind not in _DESCRIPTOR_KEYS:
        raise ValidationError(f"unknown game kind {kind!r}")
    for key in desc:
        if key not in _DESCRIPTOR_KEYS[kind]:
            raise ValidationError(f"key {key!r} is not valid for a {kind} descriptor")
    if kind == "pgg":
        if "c" not in desc:
            raise ValidationError("pgg descriptor needs 'c'")
        return pgg_game(net, parse_rational(desc["c"]))
    if kind == "minority":
        return minority_game(net)
    if "k" not in desc:
        raise ValidationError("coloring descriptor needs 'k'")
    return coloring_game(net, desc["k"])


def parse_rational(text) -> Fraction:
    """Parse exact ``"p/q"`` (or integer) text into a Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValidationError(f"rational must be 'p/q' text, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed rational {text!r}") from exc


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


# ---------------------------------------------------------------------------
# Minority-game cut bookkeeping


def minority_cut_edges(game: GraphicalGame, profile: Profile) -> int:
    """Number of edges whose endpoints play different actions."""
    net = game.network
    count = 0
    for u, v in net.edges():
        if game.actions[u][profile[u]] != game.actions[v][profile[v]]:
            count += 1
    return count
