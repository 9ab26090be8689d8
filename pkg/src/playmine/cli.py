"""Command line front end for the whole pipeline.

Subcommands: play (self-play batches), mine (discover a net from a log),
check (conformance of a log against a net), explain (post-hoc queries),
trial (parameter sweeps) and render (net to dot).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .board import RewardConfig
from .conformance import (
    ModelUnsoundError,
    classify_fitting,
    fitness_metrics,
    write_report_csv,
)
from .discovery import alpha_miner, inductive_miner, tree_to_net
from .episodes import derive_seed, play_episode
from .eventlog import build_event_log, export_episode_table, export_log, import_log
from .explain import Explainer, parse_context_string
from .petri import PetriNet, load_net, save_net, to_dot
from .search import SearchConfig
from .trial import TrialSpec, run_trial


def export_dot(net: PetriNet, path) -> None:
    try:
        Path(path).write_text(to_dot(net))
    except OSError as exc:
        raise OSError(f"cannot write dot file {path}: {exc}") from exc


def _add_game_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--sim-depth", type=int, default=10)
    p.add_argument("--minimax-depth", type=int, default=1)
    p.add_argument("--episodes", type=int, default=10)
    p.add_argument("--pieces", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--forced-capture", action=argparse.BooleanOptionalAction,
                   default=True)
    p.add_argument("--reward-capture", type=int, default=7)
    p.add_argument("--reward-crown", type=int, default=7)
    p.add_argument("--pruning", action="store_true")
    p.add_argument("--bfs-feature", action="store_true")
    p.add_argument("--max-turns", type=int, default=200)


def _reward_config(args) -> RewardConfig:
    return RewardConfig(capture_points=args.reward_capture,
                        crown_points=args.reward_crown,
                        forced_capture=args.forced_capture)


def _cmd_play(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = SearchConfig(iterations=args.iterations,
                       simulation_depth=args.sim_depth,
                       minimax_depth=args.minimax_depth,
                       pruning_enabled=args.pruning,
                       reward=_reward_config(args))
    feature = "bfs" if args.bfs_feature else "direction"
    red, white = [], []
    for episode_id in range(1, args.episodes + 1):
        ep_cfg = replace(cfg, rng_seed=derive_seed(args.seed, "play", episode_id))
        ep = play_episode(ep_cfg, episode_id=episode_id,
                          pieces_per_side=args.pieces, feature=feature,
                          max_turns=args.max_turns)
        export_episode_table(ep.red_trace, out / f"red_episode{episode_id}.csv")
        export_episode_table(ep.white_trace, out / f"white_episode{episode_id}.csv")
        red.append((episode_id, ep.red_trace))
        white.append((episode_id, ep.white_trace))
        outcome = "draw" if ep.winner is None else f"{ep.winner.name.lower()} won"
        print(f"episode {episode_id} finished after {ep.turns} turns: {outcome}")
    for color, traces in (("red", red), ("white", white)):
        log = build_event_log(traces)
        export_log(log, out / f"{color}_eventlog.{args.format}", args.format)
    print(f"wrote episode tables and event logs to {out}")
    return 0


def _cmd_mine(args) -> int:
    log = import_log(args.log)
    if args.miner == "alpha":
        net = alpha_miner(log)
    else:
        net = tree_to_net(inductive_miner(log))
    save_net(net, args.out)
    print(f"{args.miner} miner: {net!r} -> {args.out}")
    if args.dot:
        export_dot(net, args.dot)
        print(f"rendered to {args.dot}")
    return 0


def _cmd_check(args) -> int:
    log = import_log(args.log)
    net = load_net(args.net)
    try:
        report = fitness_metrics(log, net)
    except ModelUnsoundError as exc:
        print(f"cannot replay: {exc}", file=sys.stderr)
        return 1
    verdict = classify_fitting(report)
    print(f"trace fitness:      {report.trace_fitness:.4f}")
    print(f"move-model fitness: {report.move_model_fitness:.4f}")
    print(f"move-log fitness:   {report.move_log_fitness:.4f}")
    print(f"raw fitness cost:   {report.raw_fitness_cost:.2f}")
    print(f"classification:     {verdict}")
    if args.out:
        write_report_csv({Path(args.net).stem: report}, args.out)
        print(f"report written to {args.out}")
    return 0


def _cmd_explain(args) -> int:
    log = import_log(args.log)
    explainer = Explainer.from_log(log, lookahead=args.lookahead)
    context = parse_context_string(args.context)
    rec = explainer.recommend(args.layer, context)
    payload = {
        "layer": args.layer,
        "context": list(context),
        "recommendation": {
            "action": list(rec.action), "reward": rec.reward, "kind": rec.kind,
            "ranked": [[list(a), r] for a, r in rec.ranked],
        },
    }
    print(rec.render())
    if args.alternative:
        alt = parse_context_string(args.alternative)
        report = explainer.why_not(args.layer, context, alt)
        print(report.render())
        payload["why_not"] = {
            "alternative": list(alt), "reward": report.alternative_reward,
            "gap": report.gap,
        }
    if args.json:
        import json

        print(json.dumps(payload, default=str))
    return 0


def _cmd_trial(args) -> int:
    builder = TrialSpec.smoke if args.profile == "smoke" else TrialSpec.paper
    overrides = {"workers": args.workers, "seed": args.seed,
                 "pieces_per_side": args.pieces,
                 "reward": _reward_config(args),
                 "pruning_enabled": args.pruning,
                 "bfs_feature": args.bfs_feature,
                 "max_turns": args.max_turns}
    if args.episodes is not None:
        overrides["episodes"] = args.episodes
    spec = builder(args.trial, **overrides)
    summary = run_trial(spec, args.out)
    for cell in summary.cells:
        status = ", ".join(f"{k}={v}" for k, v in sorted(cell.classifications.items()))
        print(f"{spec.sweep_param}={cell.value}: winners {cell.winners}, "
              f"draws {cell.draws} | {status}")
        for err in cell.errors:
            print(f"  error: {err}", file=sys.stderr)
    print(f"trial outputs in {args.out}")
    return 0


def _cmd_render(args) -> int:
    net = load_net(args.net)
    export_dot(net, args.out)
    print(f"rendered {args.net} -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="playmine",
        description="Self-play checkers agents, event-log mining and "
                    "model-based explanations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="run self-play episodes and export logs")
    _add_game_flags(p)
    p.add_argument("--format", choices=("csv", "xes"), default="csv")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_play)

    p = sub.add_parser("mine", help="discover a net from an event log")
    p.add_argument("--log", required=True)
    p.add_argument("--miner", choices=("alpha", "inductive"), default="inductive")
    p.add_argument("--out", required=True)
    p.add_argument("--dot")
    p.set_defaults(func=_cmd_mine)

    p = sub.add_parser("check", help="alignment-based conformance of log vs net")
    p.add_argument("--log", required=True)
    p.add_argument("--net", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("explain", help="post-hoc queries on a mined model")
    p.add_argument("--log", required=True)
    p.add_argument("--layer", type=int, required=True)
    p.add_argument("--context", required=True,
                   help="e.g. \"(3,(left,down))\" or \"(-1,())\"")
    p.add_argument("--alternative", help="action to ask 'why not' about")
    p.add_argument("--lookahead", type=int, default=2)
    p.add_argument("--json", action="store_true",
                   help="also print the machine-readable form")
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("trial", help="run a parameter-sweep trial")
    _add_game_flags(p)
    p.add_argument("--trial", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--profile", choices=("smoke", "paper"), default="smoke")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_trial)
    # trial sweeps come from the profile; --episodes overrides the default
    p.set_defaults(episodes=None)

    p = sub.add_parser("render", help="export a saved net as dot")
    p.add_argument("--net", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
