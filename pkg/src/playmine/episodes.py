"""Self-play episode runner and the movement feature engineering.

Each turn the side to move gets a fresh hybrid search; its chosen move is
abstracted from exact coordinates into direction words (or, in the optional
distance feature mode, into the change of the shortest red-white distance)
and recorded together with the opponent's previous move.
"""

from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

from .board import Color, GameBoard, RewardConfig, initial_board, winner
from .search import SearchConfig, mcts_search

# A movement feature: direction-word tuple, or a distance delta in bfs mode.
Movement = Union[tuple, int, float]

MAX_TURNS_DEFAULT = 200


@dataclass(frozen=True)
class StepRecord:
    last_turn_enemy_piece_id: int
    last_turn_enemy_movement: Movement
    piece_id: int
    move: Movement
    captured: tuple[int, ...]
    reward: int


@dataclass
class EpisodeResult:
    episode_id: int
    red_trace: list
    white_trace: list
    winner: Optional[Color]
    turns: int

    @property
    def draw(self) -> bool:
        return self.winner is None


def abstract_move(frm: tuple[int, int], to: tuple[int, int]) -> tuple:
    """Signs of the displacement as direction words; zero components drop."""
    dx = to[0] - frm[0]
    dy = to[1] - frm[1]
    if dx == 0 and dy == 0:
        raise ValueError("move must change position")
    labels = []
    if dx > 0:
        labels.append("right")
    elif dx < 0:
        labels.append("left")
    if dy > 0:
        labels.append("up")
    elif dy < 0:
        labels.append("down")
    return tuple(labels)


def bfs_min_distance(board: GameBoard, sources: Sequence[tuple[int, int]],
                     targets: Sequence[tuple[int, int]]) -> Union[int, float]:
    """Multi-source 4-neighbour BFS; step count when a target is dequeued."""
    target_set = set(targets)
    queue = deque(sources)
    visited = set()
    step = 0
    while queue:
        for _ in range(len(queue)):
            x, y = queue.popleft()
            if (x, y) in target_set:
                return step
            for dx, dy in ((0, 1), (0, -1), (1, 0), (-1, 0)):
                nx, ny = x + dx, y + dy
                if 0 <= nx <= 7 and 0 <= ny <= 7 and (nx, ny) not in visited:
                    queue.append((nx, ny))
                    visited.add((nx, ny))
        step += 1
    return math.inf


def red_white_distance(board: GameBoard) -> Union[int, float]:
    whites = [(p.x, p.y) for p in board.pieces(Color.WHITE)]
    reds = [(p.x, p.y) for p in board.pieces(Color.RED)]
    if not whites or not reds:
        return math.inf
    return bfs_min_distance(board, whites, reds)


def derive_seed(base: int, *parts) -> int:
    """Stable per-episode / per-turn seed derivation."""
    text = ":".join([str(base)] + [str(p) for p in parts])
    digest = hashlib.blake2b(text.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def play_episode(cfg: SearchConfig, reward_cfg: Optional[RewardConfig] = None,
                 episode_id: int = 0, pieces_per_side: int = 3,
                 max_turns: int = MAX_TURNS_DEFAULT,
                 feature: str = "direction") -> EpisodeResult:
    """Plays one self-play game, red first; returns both traces.

    Hitting ``max_turns`` is recorded as a draw (winner None), kept distinct
    from decided games.  ``feature`` selects the movement representation:
    "direction" for direction words, "bfs" for the distance-change integer.
    """
    if feature not in ("direction", "bfs"):
        raise ValueError(f"unknown feature mode: {feature}")
    if reward_cfg is not None:
        cfg = replace(cfg, reward=reward_cfg)
    board = initial_board(pieces_per_side)
    traces = {Color.RED: [], Color.WHITE: []}
    last_id = -1
    last_movement: Movement = ()
    turn_color = Color.RED
    game_winner: Optional[Color] = None
    turns = 0

    while turns < max_turns:
        turn_cfg = replace(cfg, rng_seed=derive_seed(cfg.rng_seed, episode_id, turns))
        result = mcts_search(board, turn_color, turn_cfg)
        if result is None:
            game_winner = turn_color.opponent
            break
        move, reward, next_board = result
        if feature == "direction":
            movement: Movement = abstract_move(move.from_pos, move.to_pos)
        else:
            before = red_white_distance(board)
            after = red_white_distance(next_board)
            movement = after - before
        traces[turn_color].append(StepRecord(
            last_turn_enemy_piece_id=last_id,
            last_turn_enemy_movement=last_movement,
            piece_id=move.piece_id,
            move=movement,
            captured=move.captured_ids,
            reward=reward,
        ))
        last_id = move.piece_id
        last_movement = movement
        board = next_board
        turns += 1
        turn_color = turn_color.opponent
        decided = winner(board, turn_color)
        if decided is not None:
            game_winner = decided
            break

    return EpisodeResult(episode_id, traces[Color.RED], traces[Color.WHITE],
                         game_winner, turns)
