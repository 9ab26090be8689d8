# cython: language_level=3
"""Compiled twin of ``_pykernel``.

Same board encoding, same enumeration order, same tie-breaking; the parity
test suite holds the two backends to byte-identical outputs.
"""

from libc.math cimport INFINITY
from libc.string cimport memcpy

from cpython.bytes cimport PyBytes_FromStringAndSize

WHITE = 0
RED = 1
KING_FLAG = 0x20
RED_FLAG = 0x40
ID_MASK = 0x1F

cdef enum:
    MAXMOVES = 160
    MAXCAPS = 12

cdef int DXS[4]
cdef int DYS[4]
DXS[0] = 1; DXS[1] = 1; DXS[2] = -1; DXS[3] = -1
DYS[0] = 1; DYS[1] = -1; DYS[2] = 1; DYS[3] = -1


cdef struct CMove:
    int frm
    int to
    int ncap
    unsigned char caps[MAXCAPS]
    bint crowned
    int reward
    unsigned char newstate[64]


cdef int _emit(unsigned char* work, int from_idx, int land, unsigned char piece,
               bint crowned, unsigned char* caps, int ncap,
               CMove* buf, int* count, int cap_pts, int crown_pts) except -1:
    cdef CMove* m
    cdef int i
    if count[0] >= MAXMOVES:
        raise RuntimeError("move buffer overflow")
    m = &buf[count[0]]
    count[0] += 1
    m.frm = from_idx
    m.to = land
    m.ncap = ncap
    for i in range(ncap):
        m.caps[i] = caps[i]
    m.crowned = crowned
    m.reward = cap_pts * ncap + (crown_pts if crowned else 0)
    memcpy(m.newstate, work, 64)
    m.newstate[land] = (piece | KING_FLAG) if crowned else piece
    return 0


cdef int _chains(unsigned char* work, int from_idx, int cx, int cy,
                 unsigned char piece, int color, bint king, int far_x,
                 int d0, int d1, unsigned char* caps, int ncap,
                 CMove* buf, int* count, int cap_pts, int crown_pts) except -1:
    cdef bint jumped = False
    cdef int d, lx, ly, mid, land
    cdef unsigned char mv
    for d in range(d0, d1):
        lx = cx + 2 * DXS[d]
        ly = cy + 2 * DYS[d]
        if lx < 0 or lx > 7 or ly < 0 or ly > 7:
            continue
        mid = ((cx + DXS[d]) << 3) | (cy + DYS[d])
        mv = work[mid]
        if mv == 0 or ((mv >> 6) & 1) == color:
            continue
        land = (lx << 3) | ly
        if work[land] != 0:
            continue
        jumped = True
        work[mid] = 0
        caps[ncap] = mv & ID_MASK
        if (not king) and lx == far_x:
            _emit(work, from_idx, land, piece, True, caps, ncap + 1,
                  buf, count, cap_pts, crown_pts)
        elif not _chains(work, from_idx, lx, ly, piece, color, king, far_x,
                         d0, d1, caps, ncap + 1, buf, count, cap_pts, crown_pts):
            _emit(work, from_idx, land, piece, False, caps, ncap + 1,
                  buf, count, cap_pts, crown_pts)
        work[mid] = mv
    return jumped


cdef int _gen(const unsigned char* state, int color, bint forced,
              int cap_pts, int crown_pts, CMove* buf) except -1:
    cdef int count = 0
    cdef int idx, x, y, d, d0, d1, nx, ny, nidx, far_x, before, i, j
    cdef unsigned char piece
    cdef bint king, crowned
    cdef bint have_capture = False
    cdef unsigned char work[64]
    cdef unsigned char caps[MAXCAPS]
    cdef CMove* m
    far_x = 7 if color == 0 else 0
    for idx in range(64):
        piece = state[idx]
        if piece == 0 or ((piece >> 6) & 1) != color:
            continue
        x = idx >> 3
        y = idx & 7
        king = (piece & KING_FLAG) != 0
        if king:
            d0 = 0; d1 = 4
        elif color == 0:
            d0 = 0; d1 = 2
        else:
            d0 = 2; d1 = 4

        memcpy(work, state, 64)
        work[idx] = 0
        before = count
        _chains(work, idx, x, y, piece, color, king, far_x, d0, d1,
                caps, 0, buf, &count, cap_pts, crown_pts)
        if count > before:
            have_capture = True

        for d in range(d0, d1):
            nx = x + DXS[d]
            ny = y + DYS[d]
            if nx < 0 or nx > 7 or ny < 0 or ny > 7:
                continue
            nidx = (nx << 3) | ny
            if state[nidx] != 0:
                continue
            if count >= MAXMOVES:
                raise RuntimeError("move buffer overflow")
            crowned = (not king) and nx == far_x
            m = &buf[count]
            count += 1
            m.frm = idx
            m.to = nidx
            m.ncap = 0
            m.crowned = crowned
            m.reward = crown_pts if crowned else 0
            memcpy(m.newstate, state, 64)
            m.newstate[idx] = 0
            m.newstate[nidx] = (piece | KING_FLAG) if crowned else piece

    if forced and have_capture:
        j = 0
        for i in range(count):
            if buf[i].ncap > 0:
                if i != j:
                    buf[j] = buf[i]
                j += 1
        count = j
    return count


cdef bint _side_has_moves(const unsigned char* state, int color):
    cdef int idx, x, y, d, d0, d1, nx, ny, lx, ly
    cdef unsigned char piece, nv
    for idx in range(64):
        piece = state[idx]
        if piece == 0 or ((piece >> 6) & 1) != color:
            continue
        x = idx >> 3
        y = idx & 7
        if piece & KING_FLAG:
            d0 = 0; d1 = 4
        elif color == 0:
            d0 = 0; d1 = 2
        else:
            d0 = 2; d1 = 4
        for d in range(d0, d1):
            nx = x + DXS[d]
            ny = y + DYS[d]
            if nx < 0 or nx > 7 or ny < 0 or ny > 7:
                continue
            nv = state[(nx << 3) | ny]
            if nv == 0:
                return True
            if ((nv >> 6) & 1) != color:
                lx = x + 2 * DXS[d]
                ly = y + 2 * DYS[d]
                if 0 <= lx <= 7 and 0 <= ly <= 7 and state[(lx << 3) | ly] == 0:
                    return True
    return False


cdef void _piece_counts(const unsigned char* state, int* counts):
    # counts: white men, white kings, red men, red kings
    cdef int idx
    cdef unsigned char v
    counts[0] = counts[1] = counts[2] = counts[3] = 0
    for idx in range(64):
        v = state[idx]
        if v == 0:
            continue
        if v & RED_FLAG:
            if v & KING_FLAG:
                counts[3] += 1
            else:
                counts[2] += 1
        else:
            if v & KING_FLAG:
                counts[1] += 1
            else:
                counts[0] += 1


cdef double _evaluate(const unsigned char* state, int color, double king_weight):
    cdef int counts[4]
    cdef double white
    _piece_counts(state, counts)
    white = (counts[0] + counts[1] - counts[2] - counts[3]) + \
        king_weight * (counts[1] - counts[3])
    return white if color == 0 else -white


cdef int _winner(const unsigned char* state, int to_move):
    cdef int counts[4]
    cdef int mine
    _piece_counts(state, counts)
    mine = counts[0] + counts[1] if to_move == 0 else counts[2] + counts[3]
    if mine == 0 or not _side_has_moves(state, to_move):
        return 1 - to_move
    return -1


cdef double _minimax(const unsigned char* state, int to_move, int agent,
                     int depth, bint forced, int cap_pts, int crown_pts,
                     double kw, CMove* best, bint* has_best) except? -1e300:
    cdef CMove moves[MAXMOVES]
    cdef CMove sub
    cdef bint sub_has
    cdef int n, i, nxt
    cdef double best_score, score
    cdef bint maximizing
    has_best[0] = False
    if depth == 0 or _winner(state, to_move) != -1:
        return _evaluate(state, agent, kw)
    n = _gen(state, to_move, forced, cap_pts, crown_pts, moves)
    maximizing = to_move == agent
    if n == 0:
        return -INFINITY if maximizing else INFINITY
    nxt = 1 - to_move
    if maximizing:
        best_score = -INFINITY
        for i in range(n):
            score = _minimax(moves[i].newstate, nxt, agent, depth - 1, forced,
                             cap_pts, crown_pts, kw, &sub, &sub_has)
            if score > best_score:
                best_score = score
                best[0] = moves[i]
                has_best[0] = True
    else:
        best_score = INFINITY
        for i in range(n):
            score = _minimax(moves[i].newstate, nxt, agent, depth - 1, forced,
                             cap_pts, crown_pts, kw, &sub, &sub_has)
            if score < best_score:
                best_score = score
                best[0] = moves[i]
                has_best[0] = True
    return best_score


cdef tuple _box_move(CMove* m):
    cdef int i
    caps = tuple([m.caps[i] for i in range(m.ncap)])
    return (m.frm, m.to, caps, bool(m.crowned), m.reward,
            PyBytes_FromStringAndSize(<const char*>m.newstate, 64))


def gen_moves(bytes state, int color, forced, int capture_points, int crown_points):
    cdef const unsigned char* sp = state
    cdef CMove buf[MAXMOVES]
    cdef int n, i
    if len(state) != 64:
        raise ValueError("state must be 64 bytes")
    n = _gen(sp, color, bool(forced), capture_points, crown_points, buf)
    return [_box_move(&buf[i]) for i in range(n)]


def side_has_moves(bytes state, int color):
    cdef const unsigned char* sp = state
    return bool(_side_has_moves(sp, color))


def piece_counts(bytes state):
    cdef const unsigned char* sp = state
    cdef int counts[4]
    _piece_counts(sp, counts)
    return counts[0], counts[1], counts[2], counts[3]


def evaluate(bytes state, int color, double king_weight):
    cdef const unsigned char* sp = state
    return _evaluate(sp, color, king_weight)


def winner(bytes state, int to_move):
    cdef const unsigned char* sp = state
    return _winner(sp, to_move)


def minimax(bytes state, int to_move, int agent, int depth, forced,
            int capture_points, int crown_points, double king_weight):
    cdef const unsigned char* sp = state
    cdef CMove best
    cdef bint has_best = False
    cdef double score
    score = _minimax(sp, to_move, agent, depth, bool(forced), capture_points,
                     crown_points, king_weight, &best, &has_best)
    if not has_best:
        return score, None
    return score, _box_move(&best)


def rollout(bytes state, int to_move, int sim_depth, int mm_depth, forced,
            int capture_points, int crown_points, double king_weight):
    cdef const unsigned char* sp = state
    cdef unsigned char cur[64]
    cdef CMove best
    cdef bint has_best
    cdef bint cforced = bool(forced)
    cdef int w = 0, r = 0, steps = 0, turn = to_move
    if mm_depth < 1:
        raise ValueError("rollout requires mm_depth >= 1")
    memcpy(cur, sp, 64)
    while steps < sim_depth:
        if _winner(cur, turn) != -1:
            break
        has_best = False
        _minimax(cur, turn, turn, mm_depth, cforced, capture_points,
                 crown_points, king_weight, &best, &has_best)
        if not has_best:
            break
        if turn == 0:
            w += best.reward
        else:
            r += best.reward
        memcpy(cur, best.newstate, 64)
        turn = 1 - turn
        steps += 1
    return w, r
