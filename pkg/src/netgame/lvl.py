"""Radius-1 local verifiers compiled from a game's equilibrium condition.

A labeling is accepted at a node iff the node's own label is a best
response to its neighbors' labels, so a profile passes at every node
exactly when it is a Nash equilibrium. The configuration set is kept
intensional (a predicate) because enumerating labeled stars is
exponential in the degree and adds nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import ValidationError
from .game import Action, GraphicalGame, Profile
from .network import Network

AcceptPredicate = Callable[[int, int, tuple[int, ...]], bool]


@dataclass(frozen=True)
class LvlSpec:
    """Alphabet plus a deterministic accept predicate over labeled stars.

    ``accept(center, center_label, neighbor_labels)`` reads only the
    radius-1 star. ``radius`` is always 1.
    """

    alphabet: tuple[tuple[Action, ...], ...]
    radius: int
    accept: AcceptPredicate


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    violations: tuple[int, ...]

    def to_json(self) -> dict:
        return {"accepted": self.accepted, "violations": list(self.violations)}


def compile_lvl(game: GraphicalGame) -> LvlSpec:
    """Compile the game's equilibrium condition into a radius-1 verifier."""

    def accept(v: int, center_label: int, neighbor_labels: tuple[int, ...]) -> bool:
        nbrs = game.network.neighbors(v)
        nbr_vals = tuple(game.actions[u][lab] for u, lab in zip(nbrs, neighbor_labels))
        current = game.utility_fn(v, game.actions[v][center_label], nbr_vals)
        best = max(game.utility_fn(v, a, nbr_vals) for a in game.actions[v])
        return current == best

    return LvlSpec(alphabet=game.actions, radius=1, accept=accept)


def verify(spec: LvlSpec, net: Network, labels: Profile) -> Verdict:
    """Run the accept predicate at every node; collect violators in node order."""
    if len(labels) != net.node_count:
        raise ValidationError(
            f"labeling has {len(labels)} entries for {net.node_count} nodes"
        )
    for v, lab in enumerate(labels):
        if not isinstance(lab, int) or not 0 <= lab < len(spec.alphabet[v]):
            raise ValidationError(f"label {lab!r} invalid for node {v}")
    violations = []
    for v in range(net.node_count):
        neighbor_labels = tuple(labels[u] for u in net.neighbors(v))
        if not spec.accept(v, labels[v], neighbor_labels):
            violations.append(v)
    return Verdict(accepted=not violations, violations=tuple(violations))
