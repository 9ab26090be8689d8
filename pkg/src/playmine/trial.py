"""Parameter-sweep trials: batches of episodes, mining and conformance.

One cell per swept parameter value.  Episodes are independently seeded from
(seed, trial, parameter, value, episode), so results are byte-identical
regardless of worker count or scheduling, and removing one sweep value
leaves every other cell's outputs untouched.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .board import RewardConfig
from .conformance import classify_fitting, fitness_metrics, write_report_csv
from .discovery import alpha_miner, inductive_miner, tree_to_net
from .episodes import EpisodeResult, derive_seed, play_episode
from .eventlog import build_event_log, export_episode_table, export_log
from .petri import save_net, to_dot
from .search import SearchConfig

SWEPT_PARAMS = {1: "iterations", 2: "simulation_depth", 3: "minimax_depth"}

PAPER_SWEEPS = {1: (1000, 2000, 3000), 2: (10, 20, 30), 3: (1, 2, 3)}
PAPER_FIXED = {"iterations": 3000, "simulation_depth": 30, "minimax_depth": 3}

SMOKE_SWEEPS = {1: (50, 100), 2: (5, 10), 3: (1, 2)}
SMOKE_FIXED = {"iterations": 100, "simulation_depth": 10, "minimax_depth": 1}


@dataclass(frozen=True)
class TrialSpec:
    trial: int
    sweep_values: tuple
    iterations: int
    simulation_depth: int
    minimax_depth: int
    episodes: int = 100
    workers: int = 1
    seed: int = 0
    pieces_per_side: int = 3
    reward: RewardConfig = field(default_factory=RewardConfig)
    pruning_enabled: bool = False
    bfs_feature: bool = False
    max_turns: int = 200

    def __post_init__(self):
        if self.trial not in SWEPT_PARAMS:
            raise ValueError("trial must be 1, 2 or 3")
        if self.episodes < 1 or self.workers < 1:
            raise ValueError("episodes and workers must be >= 1")

    @property
    def sweep_param(self) -> str:
        return SWEPT_PARAMS[self.trial]

    def cell_config(self, value) -> SearchConfig:
        params = {
            "iterations": self.iterations,
            "simulation_depth": self.simulation_depth,
            "minimax_depth": self.minimax_depth,
        }
        params[self.sweep_param] = value
        return SearchConfig(reward=self.reward, pruning_enabled=self.pruning_enabled,
                            **params)

    @classmethod
    def paper(cls, trial: int, **overrides) -> "TrialSpec":
        fixed = dict(PAPER_FIXED)
        fixed.pop(SWEPT_PARAMS[trial])
        return cls(trial=trial, sweep_values=PAPER_SWEEPS[trial],
                   **fixed, **{SWEPT_PARAMS[trial]: 0}, **overrides)

    @classmethod
    def smoke(cls, trial: int, **overrides) -> "TrialSpec":
        fixed = dict(SMOKE_FIXED)
        fixed.pop(SWEPT_PARAMS[trial])
        overrides.setdefault("episodes", 10)
        return cls(trial=trial, sweep_values=SMOKE_SWEEPS[trial],
                   **fixed, **{SWEPT_PARAMS[trial]: 0}, **overrides)


@dataclass
class CellResult:
    value: object
    episodes: int
    winners: dict
    draws: int
    classifications: dict  # "{color}-{miner}" -> fitting/non-fitting
    reports: dict  # same keys -> FitnessReport
    errors: list
    out_dir: Optional[Path] = None


@dataclass
class TrialSummary:
    spec: TrialSpec
    cells: list


def _episode_task(args):
    cfg, episode_id, pieces, max_turns, feature = args
    return play_episode(cfg, episode_id=episode_id, pieces_per_side=pieces,
                        max_turns=max_turns, feature=feature)


def _run_cell_episodes(spec: TrialSpec, value) -> list[EpisodeResult]:
    base_cfg = spec.cell_config(value)
    feature = "bfs" if spec.bfs_feature else "direction"
    tasks = []
    for episode_id in range(1, spec.episodes + 1):
        seed = derive_seed(spec.seed, spec.trial, spec.sweep_param, value, episode_id)
        cfg = replace(base_cfg, rng_seed=seed)
        tasks.append((cfg, episode_id, spec.pieces_per_side, spec.max_turns, feature))
    if spec.workers == 1:
        return [_episode_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        return list(pool.map(_episode_task, tasks))


MINERS = {
    "alpha": alpha_miner,
    "inductive": lambda log: tree_to_net(inductive_miner(log)),
}


def run_cell(spec: TrialSpec, value, out_dir: Optional[Path] = None) -> CellResult:
    """Runs one sweep cell: episodes, exports, both miners, both colors."""
    episodes = _run_cell_episodes(spec, value)
    winners = {"white": 0, "red": 0}
    draws = 0
    for ep in episodes:
        if ep.winner is None:
            draws += 1
        else:
            winners[ep.winner.name.lower()] += 1

    logs = {
        "red": build_event_log((ep.episode_id, ep.red_trace) for ep in episodes),
        "white": build_event_log((ep.episode_id, ep.white_trace) for ep in episodes),
    }

    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        for ep in episodes:
            export_episode_table(ep.red_trace, out_dir / f"red_episode{ep.episode_id}.csv")
            export_episode_table(ep.white_trace, out_dir / f"white_episode{ep.episode_id}.csv")
        for color, log in logs.items():
            export_log(log, out_dir / f"{color}_eventlog.csv", "csv")
            export_log(log, out_dir / f"{color}_eventlog.xes", "xes")

    classifications = {}
    reports = {}
    errors = []
    for color, log in logs.items():
        for miner_name, miner in MINERS.items():
            key = f"{color}-{miner_name}"
            try:
                net = miner(log)
                report = fitness_metrics(log, net)
                reports[key] = report
                classifications[key] = classify_fitting(report)
                if out_dir is not None:
                    save_net(net, out_dir / f"{key}.json")
                    (out_dir / f"{key}.dot").write_text(to_dot(net))
            except Exception as exc:  # partial failures recorded, run continues
                errors.append(f"{key}: {exc!r}")
                print(f"cell {value}: {key} failed: {exc!r}", file=sys.stderr)

    if out_dir is not None and reports:
        write_report_csv(reports, out_dir / "global_statistics.csv")

    return CellResult(value=value, episodes=len(episodes), winners=winners,
                      draws=draws, classifications=classifications,
                      reports=reports, errors=errors, out_dir=out_dir)


def run_trial(spec: TrialSpec, out_dir) -> TrialSummary:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = []
    for value in spec.sweep_values:
        cell_dir = out_dir / f"{spec.sweep_param}={value}"
        cells.append(run_cell(spec, value, cell_dir))
    summary = TrialSummary(spec=spec, cells=cells)
    payload = {
        "trial": spec.trial,
        "sweep_param": spec.sweep_param,
        "episodes": spec.episodes,
        "seed": spec.seed,
        "cells": [
            {
                "value": c.value,
                "episodes": c.episodes,
                "winners": c.winners,
                "draws": c.draws,
                "classifications": c.classifications,
                "errors": c.errors,
            }
            for c in cells
        ],
    }
    (out_dir / "summary.json").write_text(json.dumps(payload, indent=2))
    return summary
