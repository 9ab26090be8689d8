"""Independent reference implementations used only to check the package.

These are deliberately written against different data structures than the
library (position dicts instead of byte boards, relaxation DP instead of
best-first search) so a shared bug is unlikely.
"""

import math
from collections import Counter

from playmine.board import (
    Color,
    GameBoard,
    RewardConfig,
    apply_move,
    evaluate,
    legal_moves,
    winner,
)
from playmine.petri import marking_key

ALL_DIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def oracle_moves(board: GameBoard, color: Color, cfg: RewardConfig):
    """Brute-force rules enumerator over a {(x, y): piece} dict.

    Returns a list of (piece_id, from, to, sorted_captured, crowned, reward)
    tuples; chain moves appear once per distinct jump path.
    """
    pos = {(p.x, p.y): p for p in board.pieces()}
    forward = 1 if color is Color.WHITE else -1
    far_x = 7 if color is Color.WHITE else 0
    quiet = []
    captures = []

    for piece in sorted(board.pieces(color), key=lambda p: (p.x, p.y)):
        dirs = ALL_DIRS if piece.king else ((forward, 1), (forward, -1))
        origin = (piece.x, piece.y)

        def jump_paths(x, y, captured):
            paths = []
            for dx, dy in dirs:
                mid = (x + dx, y + dy)
                land = (x + 2 * dx, y + 2 * dy)
                if not (0 <= land[0] <= 7 and 0 <= land[1] <= 7):
                    continue
                victim = pos.get(mid)
                if victim is None or victim.color is color or mid in captured:
                    continue
                occupied = land in pos and land != origin and land not in captured
                if occupied:
                    continue
                new_captured = captured + (mid,)
                crowns = not piece.king and land[0] == far_x
                if crowns:
                    paths.append((land, new_captured, True))
                else:
                    deeper = jump_paths(land[0], land[1], new_captured)
                    if deeper:
                        paths.extend(deeper)
                    else:
                        paths.append((land, new_captured, False))
            return paths

        for land, captured, crowns in jump_paths(piece.x, piece.y, ()):
            ids = tuple(sorted(pos[c].id for c in captured))
            reward = cfg.capture_points * len(ids) + (cfg.crown_points if crowns else 0)
            captures.append((piece.id, origin, land, ids, crowns, reward))

        for dx, dy in dirs:
            land = (piece.x + dx, piece.y + dy)
            if not (0 <= land[0] <= 7 and 0 <= land[1] <= 7) or land in pos:
                continue
            crowns = not piece.king and land[0] == far_x
            reward = cfg.crown_points if crowns else 0
            quiet.append((piece.id, origin, land, (), crowns, reward))

    if cfg.forced_capture and captures:
        return captures
    return captures + quiet


def as_oracle_shape(move):
    """Projects a ConcreteMove onto the oracle comparison tuple."""
    return (move.piece_id, move.from_pos, move.to_pos,
            tuple(sorted(move.captured_ids)), move.crowned, move.reward)


def oracle_minimax(board: GameBoard, to_move: Color, agent: Color, depth: int,
                   cfg: RewardConfig, king_weight: float = 0.5) -> float:
    """Exhaustive recursion returning the game value only."""
    if depth == 0 or winner(board, to_move) is not None:
        return evaluate(board, agent, king_weight)
    moves = legal_moves(board, to_move, cfg)
    if not moves:
        return -math.inf if to_move is agent else math.inf
    values = [
        oracle_minimax(apply_move(board, m, cfg), to_move.opponent, agent,
                       depth - 1, cfg, king_weight)
        for m in moves
    ]
    return max(values) if to_move is agent else min(values)


def oracle_grid_distance(sources, targets):
    """On a free 8x8 grid the 4-neighbour BFS distance is plain Manhattan."""
    if not sources or not targets:
        return math.inf
    return min(abs(sx - tx) + abs(sy - ty)
               for sx, sy in sources for tx, ty in targets)


def oracle_alignment_cost(trace, net, token_cap=None):
    """Bellman-style relaxation over the explicit product graph."""
    trace = tuple(trace)
    n = len(trace)
    if token_cap is None:
        token_cap = (sum(net.initial_marking.values())
                     + sum(net.final_marking.values())
                     + len(net.places) + n + 4)

    start = (0, marking_key(net.initial_marking))
    markings = {start[1]: Counter(net.initial_marking)}
    states = {start}
    frontier = [start]
    edges = []
    while frontier:
        i, mkey = frontier.pop()
        marking = markings[mkey]
        succ = []
        for t in net.transitions:
            if not net.is_enabled(marking, t.name):
                continue
            nm = net.fire(marking, t.name)
            if sum(nm.values()) > token_cap:
                continue
            nkey = marking_key(nm)
            markings.setdefault(nkey, nm)
            succ.append(((i, nkey), 0 if t.silent else 1))
            if i < n and not t.silent and t.label == trace[i]:
                succ.append(((i + 1, nkey), 0))
        if i < n:
            succ.append(((i + 1, mkey), 1))
        for nstate, cost in succ:
            edges.append(((i, mkey), nstate, cost))
            if nstate not in states:
                states.add(nstate)
                frontier.append(nstate)

    inf = math.inf
    dist = {s: inf for s in states}
    dist[start] = 0
    changed = True
    while changed:
        changed = False
        for src, dst, cost in edges:
            if dist[src] + cost < dist[dst]:
                dist[dst] = dist[src] + cost
                changed = True
    return dist.get((n, marking_key(net.final_marking)), inf)
