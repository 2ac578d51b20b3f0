"""Fair-round best-response dynamics.

A fair round schedules every node to act exactly once, one at a time. A
node keeps its current action whenever it is among the best responses;
otherwise it takes the first maximizer in the fixed action order. With
this tie rule a round with zero switches is exactly a Nash equilibrium,
which is how convergence is detected.

The engine also enforces two structural run-time checks: every switch in
the anti-coordination game must raise the global cut-edge count, and in
the public-goods game the producer set must be independent after round 1
and a maximal independent set from round 2 on.

A single run is strictly sequential (the model is sequential play);
distinct runs share no mutable state and may execute in parallel.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .errors import SimulationFault, ValidationError
from .game import (
    GraphicalGame,
    Profile,
    best_responses,
    minority_cut_edges,
    random_profile,
    validate_profile,
    welfare,
)
from .seeds import derive_seed


@dataclass(frozen=True)
class FixedOrder:
    """Same permutation every round."""

    order: tuple[int, ...]


@dataclass(frozen=True)
class FreshRandomEachRound:
    """A fresh uniformly random permutation per round, derived from seed."""

    seed: int


@dataclass(frozen=True)
class ExplicitOrders:
    """A caller-supplied list of permutations, one per round."""

    orders: tuple[tuple[int, ...], ...]


SchedulePolicy = FixedOrder | FreshRandomEachRound | ExplicitOrders


@dataclass(frozen=True)
class RandomInit:
    """Uniform independent initial action per node, derived from seed."""

    seed: int


@dataclass(frozen=True)
class Trace:
    """Record of one run of fair rounds.

    ``welfare_per_round`` has ``rounds_executed + 1`` entries (the first is
    the initial profile's welfare). ``convergence_round`` is the index of
    the last round that contained a switch, or 0 if the initial profile was
    already an equilibrium; it is None when the run hit ``max_rounds``
    without a zero-switch round.
    """

    rounds_executed: int
    converged: bool
    convergence_round: int | None
    welfare_per_round: tuple[Fraction, ...]
    switches_per_round: tuple[int, ...]
    cut_edges_per_round: tuple[int, ...] | None
    final: Profile


class Exceeded:
    """Distinguished result of `worst_case_convergence` when some order
    sequence fails to reach a zero-switch round within the budget."""

    def __repr__(self) -> str:  # pragma: no cover
        return "Exceeded"


EXCEEDED = Exceeded()


def _validate_order(net_size: int, order: tuple[int, ...]) -> None:
    if sorted(order) != list(range(net_size)):
        raise ValidationError("order must be a permutation scheduling every node exactly once")


def preferred_best_response(game: GraphicalGame, profile: Profile, v: int) -> int:
    """Best-response index for ``v``: the current action if it is among the
    maximizers, else the first maximizer in tie-break order."""
    best = best_responses(game, v, profile)
    return profile[v] if profile[v] in best else best[0]


def _step_unchecked(game: GraphicalGame, profile: Profile, v: int) -> Profile:
    choice = preferred_best_response(game, profile, v)
    if choice == profile[v]:
        return profile
    return profile[:v] + (choice,) + profile[v + 1 :]


def step(game: GraphicalGame, profile: Profile, v: int) -> Profile:
    """One node plays: ``profile`` with ``v``'s entry best-responded."""
    validate_profile(game, profile)
    return _step_unchecked(game, profile, v)


def fair_round(game: GraphicalGame, profile: Profile, order: tuple[int, ...]) -> Profile:
    """Sequential composition of `step` in the given order."""
    validate_profile(game, profile)
    _validate_order(game.network.node_count, order)
    for v in order:
        profile = _step_unchecked(game, profile, v)
    return profile


def default_max_rounds(n: int) -> int:
    from math import ceil, log2

    return 10 * ceil(log2(n + 1)) + 10


def run(
    game: GraphicalGame,
    init: Profile | RandomInit,
    policy: SchedulePolicy,
    max_rounds: int | None = None,
) -> Trace:
    """Execute fair rounds until a zero-switch round or ``max_rounds``.

    Deterministic given the initial profile (or its seed) and the policy's
    seeds: identical inputs reproduce identical traces.
    """
    net = game.network
    n = net.node_count
    if isinstance(init, RandomInit):
        profile = random_profile(game, Random(derive_seed(init.seed, "init")))
    else:
        validate_profile(game, init)
        profile = tuple(init)
    if max_rounds is None:
        max_rounds = default_max_rounds(n)
    if max_rounds < 1:
        raise ValidationError("max_rounds must be >= 1")

    track_cuts = game.name == "minority"
    welfares = [welfare(game, profile)]
    switch_counts: list[int] = []
    cuts = [minority_cut_edges(game, profile)] if track_cuts else None

    converged = False
    convergence_round: int | None = None
    rounds_executed = 0
    for round_index in range(1, max_rounds + 1):
        order = _round_order(policy, round_index, n)
        _validate_order(n, order)
        switches = 0
        for v in order:
            before = profile[v]
            if track_cuts:
                cut_before = _local_cut(game, profile, v)
            profile = _step_unchecked(game, profile, v)
            if profile[v] != before:
                switches += 1
                if track_cuts and _local_cut(game, profile, v) < cut_before + 1:
                    raise SimulationFault(
                        "anti-coordination switch failed to add a cut edge"
                    )
        rounds_executed = round_index
        welfares.append(welfare(game, profile))
        switch_counts.append(switches)
        if track_cuts:
            cuts.append(minority_cut_edges(game, profile))
        if game.name == "pgg":
            _check_pgg_round(game, profile, round_index)
        if switches == 0:
            # A zero-switch round means the entering profile was already an
            # equilibrium, so every earlier round contained a switch.
            converged = True
            convergence_round = round_index - 1
            break

    return Trace(
        rounds_executed=rounds_executed,
        converged=converged,
        convergence_round=convergence_round,
        welfare_per_round=tuple(welfares),
        switches_per_round=tuple(switch_counts),
        cut_edges_per_round=tuple(cuts) if track_cuts else None,
        final=profile,
    )


def _round_order(policy: SchedulePolicy, round_index: int, n: int) -> tuple[int, ...]:
    if isinstance(policy, FixedOrder):
        return tuple(policy.order)
    if isinstance(policy, FreshRandomEachRound):
        rng = Random(derive_seed(policy.seed, "round", round_index))
        order = list(range(n))
        rng.shuffle(order)
        return tuple(order)
    if isinstance(policy, ExplicitOrders):
        if round_index > len(policy.orders):
            raise ValidationError(
                f"explicit schedule has {len(policy.orders)} rounds, needed round {round_index}"
            )
        return tuple(policy.orders[round_index - 1])
    raise ValidationError(f"unknown schedule policy {policy!r}")


def _local_cut(game: GraphicalGame, profile: Profile, v: int) -> int:
    own = game.actions[v][profile[v]]
    return sum(
        1 for u in game.network.neighbors(v) if game.actions[u][profile[u]] != own
    )


def _check_pgg_round(game: GraphicalGame, profile: Profile, round_index: int) -> None:
    net = game.network
    producers = {v for v in range(net.node_count) if game.actions[v][profile[v]] == "P"}
    for v in producers:
        if any(u in producers for u in net.neighbors(v)):
            raise SimulationFault(
                f"producer set not independent after round {round_index}"
            )
    if round_index >= 2:
        for v in range(net.node_count):
            if v not in producers and not any(u in producers for u in net.neighbors(v)):
                raise SimulationFault(
                    f"producer set not maximal after round {round_index}"
                )


def worst_case_convergence(
    game: GraphicalGame, init: Profile, round_budget: int
) -> int | Exceeded:
    """Maximum convergence round over all order sequences of length
    ``round_budget``, or EXCEEDED if some sequence has no zero-switch round
    within the budget.

    Guarded to ``node_count <= 6`` and ``round_budget <= 3``. The search is
    memoized over (profile, rounds left); because a fair round is a
    deterministic function of the profile and its permutation, this is
    equivalent to enumerating all ``(n!)^round_budget`` sequences.
    """
    net = game.network
    n = net.node_count
    if n > 6 or round_budget > 3:
        raise ValidationError("worst_case_convergence is guarded to n <= 6, budget <= 3")
    if round_budget < 1:
        raise ValidationError("round_budget must be >= 1")
    validate_profile(game, init)

    import itertools

    perms = list(itertools.permutations(range(n)))
    memo: dict[tuple[Profile, int], int | Exceeded] = {}

    def worst(profile: Profile, rounds_left: int) -> int | Exceeded:
        key = (profile, rounds_left)
        if key in memo:
            return memo[key]
        if _is_fixpoint(game, profile):
            result: int | Exceeded = 0
        elif rounds_left <= 1:
            # The single remaining round must contain a switch, so no
            # zero-switch round fits in the budget.
            result = EXCEEDED
        else:
            worst_tail = 0
            for order in perms:
                nxt = fair_round(game, profile, order)
                tail = worst(nxt, rounds_left - 1)
                if isinstance(tail, Exceeded):
                    worst_tail = EXCEEDED
                    break
                worst_tail = max(worst_tail, tail)
            result = EXCEEDED if isinstance(worst_tail, Exceeded) else 1 + worst_tail
        memo[key] = result
        return result

    return worst(tuple(init), round_budget)


def _is_fixpoint(game: GraphicalGame, profile: Profile) -> bool:
    return all(
        profile[v] in best_responses(game, v, profile)
        for v in range(game.network.node_count)
    )


# ---------------------------------------------------------------------------
# Interchange formats


def trace_to_csv(trace: Trace) -> str:
    """Trajectory CSV, one row per round; row 0 is the initial profile."""
    out = io.StringIO()
    has_cuts = trace.cut_edges_per_round is not None
    header = "round,welfare_num,welfare_den,switches"
    if has_cuts:
        header += ",cut_edges"
    out.write(header + "\n")
    for r, w in enumerate(trace.welfare_per_round):
        switches = 0 if r == 0 else trace.switches_per_round[r - 1]
        row = f"{r},{w.numerator},{w.denominator},{switches}"
        if has_cuts:
            row += f",{trace.cut_edges_per_round[r]}"
        out.write(row + "\n")
    return out.getvalue()


def profile_to_json(profile: Profile) -> dict:
    return {"profile": list(profile)}


def profile_from_json(obj: dict, game: GraphicalGame) -> Profile:
    if not isinstance(obj, dict) or "profile" not in obj:
        raise ValidationError("profile JSON must be an object with a 'profile' field")
    profile = tuple(obj["profile"])
    validate_profile(game, profile)
    return profile
