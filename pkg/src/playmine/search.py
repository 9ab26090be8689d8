"""Minimax search and the MCTS agent with minimax-guided rollouts.

One search tree belongs to one worker; independent searches may run in
parallel processes.  All tie-breaking is first-in-enumeration-order so a
given (board, config) pair always yields the same move.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from . import kernel
from .board import (
    KING_WEIGHT_DEFAULT,
    Color,
    ConcreteMove,
    GameBoard,
    RewardConfig,
    _to_concrete,
    moves_with_boards,
    winner,
)


@dataclass(frozen=True)
class SearchConfig:
    iterations: int = 100
    simulation_depth: int = 10
    minimax_depth: int = 1
    exploration: float = 1 / math.sqrt(2)
    discount: float = 0.8
    pruning_enabled: bool = False
    rng_seed: int = 0
    reward: RewardConfig = field(default_factory=RewardConfig)
    king_weight: float = KING_WEIGHT_DEFAULT

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.simulation_depth < 0 or self.minimax_depth < 0:
            raise ValueError("depths must be >= 0")
        if not 0 < self.discount <= 1:
            raise ValueError("discount must be in (0, 1]")
        if self.exploration < 0:
            raise ValueError("exploration constant must be >= 0")


class SearchNode:
    """MCTS tree node: visit count plus a [white, red] reward vector."""

    __slots__ = ("board", "turn", "terminate", "parent", "children", "visits",
                 "reward", "fully_expanded", "entry_move", "_pairs", "_next")

    def __init__(self, board: GameBoard, turn: Color,
                 parent: Optional["SearchNode"] = None,
                 entry_move: Optional[ConcreteMove] = None):
        self.board = board
        self.turn = turn
        self.terminate = winner(board, turn) is not None
        self.parent = parent
        self.children: dict[ConcreteMove, SearchNode] = {}
        self.visits = 0
        self.reward = [0.0, 0.0]
        self.fully_expanded = False
        self.entry_move = entry_move
        self._pairs = None
        self._next = 0

    def actions(self, cfg: SearchConfig) -> list[tuple[ConcreteMove, GameBoard]]:
        if self._pairs is None:
            pairs = moves_with_boards(self.board, self.turn, cfg.reward)
            if cfg.pruning_enabled and pairs:
                best = max(m.reward for m, _ in pairs)
                pairs = [p for p in pairs if p[0].reward == best]
            self._pairs = pairs
        return self._pairs


def minimax(node: SearchNode, depth: int, max_player: bool,
            cfg: Optional[SearchConfig] = None
            ) -> tuple[float, Optional[ConcreteMove]]:
    """Depth-limited minimax from ``node``; ties keep the first move.

    The heuristic value is the material evaluation from the maximizing
    player's perspective (node.turn when max_player is set).
    """
    cfg = cfg or SearchConfig()
    agent = node.turn if max_player else node.turn.opponent
    rw = cfg.reward
    score, kmove = kernel.minimax(node.board.state, node.turn.value, agent.value,
                                  depth, rw.forced_capture, rw.capture_points,
                                  rw.crown_points, cfg.king_weight)
    if kmove is None:
        return score, None
    return score, _to_concrete(kmove, node.board.state)


def uct_best_child(node: SearchNode, c: float) -> SearchNode:
    """Argmax of mean reward for the mover plus the exploration bonus."""
    if not node.children:
        raise ValueError("uct_best_child on a node without children")
    idx = node.turn.index
    log_n = math.log(node.visits) if node.visits > 0 else 0.0
    best = None
    best_score = -math.inf
    for child in node.children.values():
        if child.visits == 0:
            raise ValueError("uct_best_child requires every child visited")
        score = child.reward[idx] / child.visits + c * math.sqrt(log_n / child.visits)
        if score > best_score:
            best_score = score
            best = child
    return best


def expand(node: SearchNode, cfg: Optional[SearchConfig] = None) -> SearchNode:
    """Adds exactly one child for the next untried move and returns it."""
    cfg = cfg or SearchConfig()
    if node.terminate:
        raise ValueError("cannot expand a terminal node")
    pairs = node.actions(cfg)
    if node._next >= len(pairs):
        raise ValueError("cannot expand a fully expanded node")
    move, next_board = pairs[node._next]
    node._next += 1
    if node._next == len(pairs):
        node.fully_expanded = True
    child = SearchNode(next_board, node.turn.opponent, parent=node, entry_move=move)
    node.children[move] = child
    return child


def simulate(node: SearchNode, cfg: SearchConfig,
             rng: Optional[random.Random] = None) -> list:
    """Rollout from ``node``: each side plays its own shallow minimax move.

    With minimax_depth = 0 the rollout picks uniformly random moves instead.
    Returns the accumulated [white, red] reward vector; the entry move into
    ``node`` itself is not included.
    """
    if node.terminate:
        return [0, 0]
    rw = cfg.reward
    if cfg.minimax_depth >= 1:
        w, r = kernel.rollout(node.board.state, node.turn.value,
                              cfg.simulation_depth, cfg.minimax_depth,
                              rw.forced_capture, rw.capture_points,
                              rw.crown_points, cfg.king_weight)
        return [w, r]
    rng = rng or random.Random(cfg.rng_seed)
    delta = [0, 0]
    state = node.board.state
    turn = node.turn.value
    for _ in range(cfg.simulation_depth):
        if kernel.winner(state, turn) != -1:
            break
        moves = kernel.gen_moves(state, turn, rw.forced_capture,
                                 rw.capture_points, rw.crown_points)
        if not moves:
            break
        mv = moves[rng.randrange(len(moves))]
        delta[turn] += mv[4]
        state = mv[5]
        turn = 1 - turn
    return delta


def backpropagate(leaf: SearchNode, delta, discount: float) -> None:
    """Walks leaf to root adding discount**distance * delta and one visit."""
    node = leaf
    dist = 0
    while node is not None:
        factor = discount ** dist
        node.visits += 1
        node.reward[0] += factor * delta[0]
        node.reward[1] += factor * delta[1]
        node = node.parent
        dist += 1


def mcts_search(board: GameBoard, agent: Color, cfg: SearchConfig
                ) -> Optional[tuple[ConcreteMove, int, GameBoard]]:
    """Runs the full select/expand/simulate/backpropagate loop.

    Returns (move, reward, next_board) for the root child with the highest
    mean reward on the agent's index, or None when the agent has no move.
    The reward of the move that enters each iteration's leaf is added to the
    backup delta, so immediately winning moves keep their value even though
    the rollout from a terminal child is empty.
    """
    root = SearchNode(board, agent)
    if root.terminate or not root.actions(cfg):
        return None
    rng = random.Random(cfg.rng_seed)
    for _ in range(cfg.iterations):
        node = root
        while not node.terminate and node.fully_expanded:
            node = uct_best_child(node, cfg.exploration)
        if not node.terminate:
            node = expand(node, cfg)
        delta = simulate(node, cfg, rng)
        if node.entry_move is not None:
            delta = list(delta)
            delta[node.parent.turn.index] += node.entry_move.reward
        backpropagate(node, delta, cfg.discount)

    idx = agent.index
    best_move = None
    best_child = None
    best_mean = -math.inf
    for move, child in root.children.items():
        mean = child.reward[idx] / child.visits
        if mean > best_mean:
            best_mean = mean
            best_move = move
            best_child = child
    return best_move, best_move.reward, best_child.board


def prune_by_reward(moves: list[ConcreteMove]) -> list[ConcreteMove]:
    """Keeps only the moves sharing the maximal reward, in input order."""
    if not moves:
        raise ValueError("prune_by_reward requires a non-empty move list")
    groups: dict[int, list[ConcreteMove]] = {}
    for m in moves:
        groups.setdefault(m.reward, []).append(m)
    return groups[max(groups)]
