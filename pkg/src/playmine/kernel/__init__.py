"""Kernel backend selection.

Prefers the compiled extension, falls back to the pure-Python twin.  Set
PLAYMINE_PURE=1 to force the fallback (used by the parity tests and the
benchmark).
"""

import os

from . import _pykernel

if os.environ.get("PLAYMINE_PURE"):
    _impl = _pykernel
    BACKEND = "python"
else:
    try:
        from . import _ckernel as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernel
        BACKEND = "python"

WHITE = _pykernel.WHITE
RED = _pykernel.RED
KING_FLAG = _pykernel.KING_FLAG
RED_FLAG = _pykernel.RED_FLAG
ID_MASK = _pykernel.ID_MASK

encode_cell = _pykernel.encode_cell
cell_color = _pykernel.cell_color
cell_id = _pykernel.cell_id
cell_is_king = _pykernel.cell_is_king

gen_moves = _impl.gen_moves
side_has_moves = _impl.side_has_moves
piece_counts = _impl.piece_counts
evaluate = _impl.evaluate
winner = _impl.winner
minimax = _impl.minimax
rollout = _impl.rollout

__all__ = [
    "BACKEND", "WHITE", "RED", "KING_FLAG", "RED_FLAG", "ID_MASK",
    "encode_cell", "cell_color", "cell_id", "cell_is_king",
    "gen_moves", "side_has_moves", "piece_counts", "evaluate",
    "winner", "minimax", "rollout",
]
