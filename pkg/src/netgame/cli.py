"""Command-line harness for reproducible experiments.

Exit status: 0 on success, 1 on guard or validation errors (one-line
diagnostic naming the violated precondition), 2 on usage errors. Every
output file embeds the resolved configuration and seeds in a ``meta``
block; ``--deterministic`` suppresses the timestamp so identical runs
produce byte-identical files. Rationals cross this boundary as ``"p/q"``
text, never as decimals.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

from . import dynamics, game as game_mod, local_sim, lvl, network, oracle, simgame
from .errors import NetgameError, ValidationError


def _worker_cap() -> int:
    raw = os.environ.get("NETGAME_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValidationError(f"NETGAME_THREADS must be an integer, got {raw!r}")


def _meta(args: argparse.Namespace, **extra) -> dict:
    resolved = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "command") and v is not None
    }
    meta = {"command": args.command, "args": resolved, **extra}
    if not getattr(args, "deterministic", False):
        meta["timestamp"] = datetime.now(timezone.utc).isoformat()
    return meta


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"{what} file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{what} file {path} is not valid JSON: {exc}")


def _load_graph(path: str) -> network.Network:
    return network.graph_from_json(_load_json(path, "graph"))


def _game_from_args(args: argparse.Namespace, net: network.Network) -> game_mod.GraphicalGame:
    desc: dict = {"game": args.game}
    if args.game == "pgg":
        if args.c is None:
            raise ValidationError("pgg needs --c p/q with 0 < c < 1")
        desc["c"] = args.c
    if args.game == "coloring":
        if args.k is None:
            raise ValidationError("coloring needs --k >= 2")
        desc["k"] = args.k
    return game_mod.game_from_descriptor(desc, net)


# ---------------------------------------------------------------------------
# Experiment configs


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated run configuration; round-trips through JSON losslessly."""

    graph: dict
    game: dict
    dynamics: dict

    def to_json(self) -> dict:
        return {"graph": dict(self.graph), "game": dict(self.game), "dynamics": dict(self.dynamics)}


_CONFIG_SCHEMA = {
    "graph": {"file", "generator", "n", "d", "k", "seed"},
    "game": {"game", "c", "k"},
    "dynamics": {"policy", "seed", "init", "max_rounds", "trials"},
}


def load_config(path: str) -> ExperimentConfig:
    """Load and validate an experiment config; unknown keys are rejected
    with their JSON-pointer location."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(obj, dict):
        raise ValidationError("config must be a JSON object")
    for key in obj:
        if key not in _CONFIG_SCHEMA:
            raise ValidationError(f"unknown config key at /{key}")
    for section, allowed in _CONFIG_SCHEMA.items():
        if section not in obj:
            raise ValidationError(f"config missing section /{section}")
        if not isinstance(obj[section], dict):
            raise ValidationError(f"config section /{section} must be an object")
        for key in obj[section]:
            if key not in allowed:
                raise ValidationError(f"unknown config key at /{section}/{key}")
    config = ExperimentConfig(graph=obj["graph"], game=obj["game"], dynamics=obj["dynamics"])
    net = _config_network(config)  # validate eagerly, including guards
    game_mod.game_from_descriptor(config.game, net)
    return config


def _config_network(config: ExperimentConfig) -> network.Network:
    g = config.graph
    if "file" in g:
        return _load_graph(g["file"])
    gen = g.get("generator")
    if gen == "ring":
        return network.ring(g["n"])
    if gen == "torus":
        return network.torus(g["n"])
    if gen == "random_regular":
        return network.random_regular(g["n"], g["d"], g.get("seed", 0))
    if gen == "star_matching":
        net, _, _ = network.star_matching(g["k"], g["d"], g.get("seed", 0))
        return net
    raise ValidationError(f"config /graph needs 'file' or a known 'generator', got {gen!r}")


# ---------------------------------------------------------------------------
# Subcommands


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ValidationError(f"--graph {args.graph} needs --{name}")


def _cmd_gen(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else 0
    params: dict = {}
    leaf_edges = None
    if args.graph == "ring":
        _require(args, "n")
        net = network.ring(args.n)
        params["n"] = args.n
    elif args.graph == "torus":
        _require(args, "n")
        net = network.torus(args.n)
        params["n"] = args.n
    elif args.graph == "random-regular":
        _require(args, "n", "d")
        net = network.random_regular(args.n, args.d, seed)
        params.update(n=args.n, d=args.d)
    elif args.graph == "star-matching":
        _require(args, "k", "d")
        net, _, leaves = network.star_matching(args.k, args.d, seed)
        leaf_edges = leaves
        params.update(k=args.k, d=args.d)
    else:
        raise ValidationError(f"unknown generator {args.graph!r}")

    if args.cut_girth is not None:
        if args.constraint == "leaf-edges":
            if leaf_edges is None:
                raise ValidationError("--constraint leaf-edges needs --graph star-matching")
            constraint = network.CycleCutConstraint.leaf_edges_only(leaf_edges)
        elif args.constraint == "bipartition":
            sides = network.two_coloring(net)
            if sides is None:
                raise ValidationError("--constraint bipartition needs a bipartite graph")
            constraint = network.CycleCutConstraint.preserve_bipartition(*sides)
        else:
            constraint = network.CycleCutConstraint.unconstrained()
        net = network.cut_short_cycles(net, args.cut_girth, constraint, seed)
        params["cut_girth"] = args.cut_girth
        params["constraint"] = args.constraint
    if args.double_cover:
        net = network.bipartite_double_cover(net)
        params["double_cover"] = True
    if args.power is not None:
        net = network.power_graph(net, args.power)
        params["power"] = args.power

    payload = network.graph_to_json(
        net, meta={"generator": args.graph, "seed": seed, "params": params}
    )
    payload["meta"].update(_meta(args))
    _write_json(args.out, payload)
    return 0


def _policy_from_args(args: argparse.Namespace, n: int) -> dynamics.SchedulePolicy:
    if args.policy == "random":
        return dynamics.FreshRandomEachRound(args.seed)
    if args.policy == "fixed":
        return dynamics.FixedOrder(tuple(range(n)))
    raise ValidationError(f"unknown policy {args.policy!r}")


def _cmd_run(args: argparse.Namespace) -> int:
    if args.config is not None:
        config = load_config(args.config)
        net = _config_network(config)
        g = game_mod.game_from_descriptor(config.game, net)
        dyn = config.dynamics
        seed = dyn.get("seed", 0)
        policy = (
            dynamics.FreshRandomEachRound(seed)
            if dyn.get("policy", "random") == "random"
            else dynamics.FixedOrder(tuple(range(net.node_count)))
        )
        init = (
            dynamics.RandomInit(seed)
            if dyn.get("init", "random") == "random"
            else tuple(dyn["init"])
        )
        max_rounds = dyn.get("max_rounds")
    else:
        if args.graph_file is None:
            raise ValidationError("run needs --graph-file or --config")
        net = _load_graph(args.graph_file)
        g = _game_from_args(args, net)
        policy = _policy_from_args(args, net.node_count)
        init = dynamics.RandomInit(args.seed) if args.init == "random" else None
        if init is None:
            raise ValidationError(f"unknown init {args.init!r}")
        max_rounds = args.max_rounds

    trace = dynamics.run(g, init, policy, max_rounds=max_rounds)
    csv_text = dynamics.trace_to_csv(trace)
    meta = _meta(
        args,
        converged=trace.converged,
        convergence_round=trace.convergence_round,
        rounds_executed=trace.rounds_executed,
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    if args.profile_out is not None:
        payload = dynamics.profile_to_json(trace.final)
        payload["meta"] = meta
        _write_json(args.profile_out, payload)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    net = _load_graph(args.graph_file)
    g = _game_from_args(args, net)
    profile = dynamics.profile_from_json(_load_json(args.profile, "profile"), g)
    verdict = lvl.verify(lvl.compile_lvl(g), net, profile)
    payload = verdict.to_json()
    payload["meta"] = _meta(args)
    _write_json(args.out, payload)
    return 0


def _cmd_poa(args: argparse.Namespace) -> int:
    if args.family == "pgg-instance":
        for needed in ("d", "k", "c"):
            if getattr(args, needed) is None:
                raise ValidationError(f"poa --family pgg-instance needs --{needed}")
        report = oracle.poa_pgg_instance(
            args.d, args.k, game_mod.parse_rational(args.c), args.seed or 0
        )
        payload = report.to_json(max_listed=args.max_listed)
    elif args.family == "minority-instance":
        if args.graph_file is None:
            raise ValidationError("poa --family minority-instance needs --graph-file")
        net = _load_graph(args.graph_file)
        payload = oracle.minority_poa_report(game_mod.minority_game(net))
    elif args.family == "enumerate":
        if args.graph_file is None or args.game is None:
            raise ValidationError("poa --family enumerate needs --graph-file and --game")
        net = _load_graph(args.graph_file)
        g = _game_from_args(args, net)
        payload = oracle.enumerate_ne(g).to_json(max_listed=args.max_listed)
    else:
        raise ValidationError(f"unknown poa family {args.family!r}")
    payload["meta"] = _meta(args)
    _write_json(args.out, payload)
    return 0


def _cmd_ineff(args: argparse.Namespace) -> int:
    net = _load_graph(args.graph_file)
    g = _game_from_args(args, net)
    report = oracle.measured_inefficiency(
        g, args.T, args.trials, args.seed, workers=_worker_cap()
    )
    payload = report.to_json()
    payload["meta"] = _meta(args)
    _write_json(args.out, payload)
    return 0


def _cmd_simgame(args: argparse.Namespace) -> int:
    from random import Random

    from .seeds import derive_seed

    net = network.ring(args.n)
    base = game_mod.pgg_game(net, game_mod.parse_rational(args.c))
    algo = simgame.greedy_mis_normal_form(net.max_degree)
    sim = simgame.build_simulation_game(base, algo)
    verifier = lvl.compile_lvl(base)

    one_round = True
    projection_ok = True
    for i in range(args.orders):
        rng = Random(derive_seed(args.seed, "order", i))
        order = list(range(net.node_count))
        rng.shuffle(order)
        profile = simgame.play_simulation_round(sim, tuple(order), seed=args.seed)
        if any(
            simgame.simulation_utility(sim, v, profile) != 1
            for v in range(net.node_count)
        ):
            one_round = False
        projection = simgame.project(sim, profile)
        if not lvl.verify(verifier, net, projection).accepted:
            projection_ok = False
    payload = simgame.simulation_report(sim, one_round, projection_ok)
    payload["orders_tested"] = args.orders
    payload["meta"] = _meta(args)
    _write_json(args.out, payload)
    return 0


def _cmd_frozen(args: argparse.Namespace) -> int:
    net = network.torus(args.n)
    profile = oracle.find_frozen_configuration(net, args.k, args.seed, args.budget)
    payload: dict = {"found": profile is not None}
    if profile is not None:
        payload["profile"] = list(profile)
        g = game_mod.coloring_game(net, args.k)
        payload["verifier_accepts"] = lvl.verify(lvl.compile_lvl(g), net, profile).accepted
        payload["proper"] = oracle.is_proper_coloring(g, profile)
    payload["meta"] = _meta(args)
    _write_json(args.out, payload)
    return 0


def _cmd_local_sim(args: argparse.Namespace) -> int:
    from random import Random

    from .seeds import derive_seed

    net = _load_graph(args.graph_file)
    g = _game_from_args(args, net)
    coloring = local_sim.distance_coloring(net, 2)
    init = game_mod.random_profile(g, Random(derive_seed(args.seed, "init")))
    final, orders = local_sim.simulate_fair_rounds(g, init, coloring, args.rounds)
    payload = coloring.to_json()
    payload["local_rounds_per_fair_round"] = coloring.palette_size
    payload["round_accounting_note"] = (
        "round counts cover the schedule phase only; the coloring phase is excluded"
    )
    payload["meta"] = _meta(args, rounds=args.rounds)
    _write_json(args.coloring_out, payload)
    if args.profile_out is not None:
        out = dynamics.profile_to_json(final)
        out["meta"] = _meta(args, induced_orders=[list(o) for o in orders])
        _write_json(args.profile_out, out)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netgame",
        description="Games on networks: dynamics, local verification, oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--deterministic", action="store_true", help="omit timestamps from outputs")

    p = sub.add_parser("gen", help="generate a graph JSON file")
    p.add_argument("--graph", required=True, choices=["ring", "torus", "random-regular", "star-matching"])
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--cut-girth", type=int, help="raise girth to this value by edge swaps")
    p.add_argument("--constraint", choices=["unconstrained", "leaf-edges", "bipartition"], default="unconstrained")
    p.add_argument("--double-cover", action="store_true")
    p.add_argument("--power", type=int, help="take the distance-<=r power graph")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("run", help="run fair-round best-response dynamics")
    p.add_argument("--game", choices=["pgg", "minority", "coloring"])
    p.add_argument("--c", help="production cost p/q for pgg")
    p.add_argument("--k", type=int, help="color count for coloring")
    p.add_argument("--graph-file")
    p.add_argument("--policy", choices=["random", "fixed"], default="random")
    p.add_argument("--init", default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--config", help="experiment config JSON (overrides other flags)")
    p.add_argument("--out", required=True, help="trajectory CSV path")
    p.add_argument("--profile-out", help="final profile JSON path")
    common(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("verify", help="verify a labeling with the compiled local checker")
    p.add_argument("--game", required=True, choices=["pgg", "minority", "coloring"])
    p.add_argument("--c")
    p.add_argument("--k", type=int)
    p.add_argument("--graph-file", required=True)
    p.add_argument("--profile", required=True, help="profile JSON path")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("poa", help="exhaustive equilibrium and price-of-anarchy reports")
    p.add_argument("--family", required=True, choices=["pgg-instance", "minority-instance", "enumerate"])
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--c")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--game", choices=["pgg", "minority", "coloring"])
    p.add_argument("--graph-file")
    p.add_argument("--max-listed", type=int, default=1000, help="cap on listed equilibria")
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=_cmd_poa)

    p = sub.add_parser("ineff", help="measured round-limited inefficiency report")
    p.add_argument("--game", required=True, choices=["pgg", "minority", "coloring"])
    p.add_argument("--c")
    p.add_argument("--k", type=int)
    p.add_argument("--graph-file", required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=_cmd_ineff)

    p = sub.add_parser("simgame", help="play the derived one-round game on a ring")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--c", default="1/2")
    p.add_argument("--orders", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=_cmd_simgame)

    p = sub.add_parser("frozen", help="search for a stuck non-proper coloring equilibrium")
    p.add_argument("--n", type=int, required=True, help="torus side length")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=_cmd_frozen)

    p = sub.add_parser("local-sim", help="schedule-driven parallel replay of fair rounds")
    p.add_argument("--game", required=True, choices=["pgg", "minority", "coloring"])
    p.add_argument("--c")
    p.add_argument("--k", type=int)
    p.add_argument("--graph-file", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coloring-out", required=True)
    p.add_argument("--profile-out")
    common(p)
    p.set_defaults(func=_cmd_local_sim)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NetgameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
