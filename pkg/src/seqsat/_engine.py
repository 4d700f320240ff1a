"""Compiled kernels for sequence refinement and Comparing.

All state lives in the ``State`` namedtuple of numpy arrays built by
:class:`seqsat.sequences.Workspace`. Sequences are rows of uint64 words over
the contiguous layout positions. Kernels never allocate per determination;
scratch rows are part of the state.

Worklist items are ``(rule, a, b)``:

    R1 (group, lit)   propagate a zeroed literal across every edge of a label
    R2 (group, lit)   the triangle follow-up on the two sibling labels
    R3 (group, -)     a label died
    R4 (lit, -)       a literal's vertex-sequences died
    VS (lit, lit)     propagate a zeroed literal across every vertex-sequence
                      of one literal

Each fact is marked done when pushed, so it is queued at most once.
"""

from __future__ import annotations

from collections import namedtuple

import numpy as np
from numba import njit, types
from numba.typed import List

# worklist rules
R1, R2, R3, R4, VS = 1, 2, 3, 4, 5

# log kinds
EV_EDGE_BIT, EV_VERTEX_BIT, EV_EDGE_DEAD, EV_VERTEX_DEAD = 0, 1, 2, 3

# event origins
ORIGIN_CONSTRUCTION, ORIGIN_COMPARING, ORIGIN_CASCADE, ORIGIN_SEEDED = 0, 1, 2, 3

# counters
(
    C_CLOCK,
    C_DETERMINATIONS,
    C_INTERSECTIONS,
    C_UNIONS,
    C_PREFILTER_SKIPS,
    C_SUBSUMED_SKIPS,
    C_PHI_ZEROED,
    C_BIT_CHANGES,
    C_EDGE_DEATHS,
    C_VERTEX_DEATHS,
    C_MEMO_SKIPS,
    C_PAIRS,
    C_DIRECTIONS,
    C_REFINED,
    C_RULE_ITEMS,
    C_KRULE_ZEROED,
) = range(16)
N_COUNTERS = 16
COUNTER_NAMES = (
    "clock",
    "determinations",
    "intersections",
    "unions",
    "prefilter_skips",
    "subsumed_skips",
    "phi_zeroed",
    "bit_changes",
    "edge_deaths",
    "vertex_deaths",
    "memo_skipped_directions",
    "sset_pairs_compared",
    "directions",
    "refined_determinations",
    "rule_items",
    "krule_zeroed",
)

# cfg slots
CFG_LOG, CFG_LIFO, CFG_MEMO = 0, 1, 2

# status slots: [status, reason, detail, queue head]
ST_OK, ST_UNSAT = 0, 1
REASON_CLAUSE_VERTICES, REASON_EMPTY_SSET = 1, 2

# determination outcomes
UNCHANGED, REFINED, DEAD = 0, 1, 2

State = namedtuple(
    "State",
    [
        # layout
        "cell_start", "cell_end", "base", "pos_cell", "pos_lit", "pos_negrow",
        "lit_neg", "lit_mask", "lp_start", "lp_pos", "phi_pos", "phi_neg", "phi_mask", "phi_wit",
        # edges
        "ebits", "ealive", "e_la", "e_lb", "e_sset", "e_group", "e_epmask", "e_epcells",
        # s-sets
        "s_start", "s_edges", "s_live", "s_ver",
        # label groups
        "g_la", "g_lb", "g_start", "g_edges", "gid", "le_start", "le_edges",
        # vertices
        "vbits", "valive", "v_lit", "lv_start", "lv_verts",
        # facts
        "r1done", "r2done", "gdead", "vsdone", "ldead",
        # bookkeeping
        "memo", "cfg", "ctr", "status", "scratch",
    ],
)

QUEUE_ITEM = types.UniTuple(types.int64, 3)
LOG_ITEM = types.UniTuple(types.int64, 5)


def new_queue():
    return List.empty_list(QUEUE_ITEM)


def new_log():
    return List.empty_list(LOG_ITEM)


_ONE = np.uint64(1)
_ZERO = np.uint64(0)


# ---------------------------------------------------------------- word ops


@njit(cache=True, inline="always")
def _bit(row, p):
    return (row[p >> 6] >> np.uint64(p & 63)) & _ONE


@njit(cache=True, inline="always")
def _intersects(a, b):
    for w in range(a.shape[0]):
        if a[w] & b[w]:
            return True
    return False


@njit(cache=True, inline="always")
def _contains(a, b):
    """b is a subset of a."""
    for w in range(a.shape[0]):
        if b[w] & ~a[w]:
            return False
    return True


@njit(cache=True, inline="always")
def _equal(a, b):
    for w in range(a.shape[0]):
        if a[w] != b[w]:
            return False
    return True


@njit(cache=True, inline="always")
def _is_zero(a):
    for w in range(a.shape[0]):
        if a[w]:
            return False
    return True


@njit(cache=True, inline="always")
def _clear(a, m):
    for w in range(a.shape[0]):
        a[w] &= ~m[w]


@njit(cache=True)
def popcount_row(row):
    total = 0
    for w in range(row.shape[0]):
        x = row[w]
        while x:
            x &= x - _ONE
            total += 1
    return total


# ---------------------------------------------------------------- compliance


# Cells occupy aligned 4-bit nibbles (slot 3 is always 0), so a word holds
# 16 cells and per-cell tests run on whole words at once.

_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U58 = np.uint64(58)
_NIB = np.uint64(15)
_LOW = np.uint64(0x1111111111111111)
_M5 = np.uint64(0x5555555555555555)
_M3 = np.uint64(0x3333333333333333)
_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)


def _debruijn_table():
    t = np.zeros(64, dtype=np.int64)
    for i in range(64):
        t[((1 << i) * 0x03F79D71B4CB0A89 % (1 << 64)) >> 58] = i
    return t


_CTZ = _debruijn_table()


@njit(cache=True, inline="always")
def _nib_any(v):
    """Low bit of each nibble set iff the nibble is nonzero."""
    y = v | (v >> _U1)
    y = y | (y >> _U2)
    return y & _LOW


@njit(cache=True, inline="always")
def _nib_loner(v):
    """Low bit of each nibble set iff the nibble holds exactly one 1 bit."""
    c1 = v - ((v >> _U1) & _M5)
    c2 = (c1 & _M3) + ((c1 >> _U2) & _M3)
    return _LOW & ~_nib_any(c2 ^ _LOW)


@njit(cache=True, inline="always")
def _ctz1(b):
    return _CTZ[(b * _DEBRUIJN) >> _U58]


@njit(cache=True, inline="always")
def lcr_fast(x, done, base, lit_mask, pos_negrow):
    """LCR + K-rule in place on a scratch row; False when a cell empties.

    ``done`` marks (nibble low bits) loner cells whose negation is already
    known to be zero; it is updated in place. The result does not depend on
    the order loners are handled in.
    """
    W = x.shape[0]
    while True:
        again = False
        for w in range(W):
            v = x[w]
            if (_nib_any(v) & base[w]) != base[w]:
                return False
            cand = _nib_loner(v) & ~done[w]
            while cand:
                low = cand & (~cand + _U1)
                cand ^= low
                done[w] |= low
                r = pos_negrow[w * 64 + _ctz1(v & (low * _NIB))]
                hit = False
                for k in range(W):
                    if x[k] & lit_mask[r, k]:
                        hit = True
                        x[k] &= ~lit_mask[r, k]
                if hit:
                    again = True
                    break
            if again:
                break
        if not again:
            return True


@njit(cache=True, inline="always")
def phi_zero(x, epc, lit_mask, phi_pos, phi_neg, phi_mask, wit):
    """True when some variable has every occurrence of both polarities zeroed
    in ``x`` while both polarities occur outside the cells in ``epc``.

    ``wit[m]`` remembers a position of variable m seen set last time; it only
    speeds up the search.
    """
    W = x.shape[0]
    for m in range(phi_pos.shape[0]):
        q = wit[m]
        if (x[q >> 6] >> np.uint64(q & 63)) & _U1:
            continue
        found = False
        for w in range(W):
            y = x[w] & phi_mask[m, w]
            if y:
                wit[m] = w * 64 + _ctz1(y & (~y + _U1))
                found = True
                break
        if found:
            continue
        a = phi_pos[m]
        b = phi_neg[m]
        in_a = True
        in_b = True
        for w in range(W):
            if lit_mask[a, w] & ~epc[w]:
                in_a = False
            if lit_mask[b, w] & ~epc[w]:
                in_b = False
        if in_a or in_b:
            continue
        return True
    return False


# ---------------------------------------------------------------- logging / queue


@njit(cache=True, inline="always")
def _log(st, log, kind, seq, lit, pos, origin):
    if st.cfg[CFG_LOG]:
        log.append((kind, seq, lit, pos, origin))


@njit(cache=True, inline="always")
def _tick(st):
    st.ctr[C_CLOCK] += 1
    return st.ctr[C_CLOCK]


@njit(cache=True)
def _push_edge_fact(st, q, g, lit):
    if not st.r1done[g, lit]:
        st.r1done[g, lit] = True
        q.append((R1, g, lit))


@njit(cache=True)
def _push_vertex_fact(st, q, x, lit):
    if not st.vsdone[x, lit]:
        st.vsdone[x, lit] = True
        q.append((VS, x, lit))


@njit(cache=True)
def _clear_logged(st, log, row, lit, is_edge, idx, origin, lit_value):
    """Clear every position of ``lit`` in ``row``; returns positions cleared."""
    cleared = 0
    kind = EV_EDGE_BIT if is_edge else EV_VERTEX_BIT
    for i in range(st.lp_start[lit], st.lp_start[lit + 1]):
        p = st.lp_pos[i]
        if _bit(row, p):
            cleared += 1
            _log(st, log, kind, idx, lit_value, p, origin)
    _clear(row, st.lit_mask[lit])
    st.ctr[C_BIT_CHANGES] += cleared
    return cleared


# ---------------------------------------------------------------- deaths


@njit(cache=True)
def kill_edge(st, q, log, e, origin, push):
    if not st.ealive[e]:
        return
    st.ealive[e] = False
    st.ctr[C_EDGE_DEATHS] += 1
    s = st.e_sset[e]
    st.s_live[s] -= 1
    st.s_ver[s] = _tick(st)
    _log(st, log, EV_EDGE_DEAD, e, 0, -1, origin)
    g = st.e_group[e]
    if push and not st.gdead[g]:
        st.gdead[g] = True
        q.append((R3, g, 0))
    if st.s_live[s] == 0 and st.status[0] == ST_OK:
        st.status[0] = ST_UNSAT
        st.status[1] = REASON_EMPTY_SSET
        st.status[2] = s


@njit(cache=True)
def kill_vertex(st, q, log, v, origin, push):
    if not st.valive[v]:
        return
    st.valive[v] = False
    st.ctr[C_VERTEX_DEATHS] += 1
    _tick(st)
    _log(st, log, EV_VERTEX_DEAD, v, 0, -1, origin)
    x = st.v_lit[v]
    if push and not st.ldead[x]:
        st.ldead[x] = True
        q.append((R4, x, 0))
    k = st.pos_cell[v]
    for u in range(st.cell_start[k], st.cell_end[k]):
        if st.valive[u]:
            return
    if st.status[0] == ST_OK:
        st.status[0] = ST_UNSAT
        st.status[1] = REASON_CLAUSE_VERTICES
        st.status[2] = k


# ---------------------------------------------------------------- tracked compliance


@njit(cache=True)
def comply_edge(st, q, log, e, origin, lit_values):
    """LCR cascade + K-rule on a live edge, logging and queueing every change."""
    row = st.ebits[e]
    cell_start = st.cell_start
    cell_end = st.cell_end
    ncell = cell_start.shape[0]
    g = st.e_group[e]
    restart = True
    while restart:
        restart = False
        for k in range(ncell):
            cnt = 0
            last = -1
            for p in range(cell_start[k], cell_end[k]):
                if _bit(row, p):
                    cnt += 1
                    last = p
            if cnt == 0:
                kill_edge(st, q, log, e, origin, True)
                return False
            if cnt == 1:
                nz = st.lit_neg[st.pos_lit[last]]
                if nz >= 0 and _intersects(row, st.lit_mask[nz]):
                    _clear_logged(st, log, row, nz, True, e, origin, lit_values[nz])
                    st.s_ver[st.e_sset[e]] = _tick(st)
                    _push_edge_fact(st, q, g, nz)
                    restart = True
                    break
    return True


@njit(cache=True)
def comply_vertex(st, q, log, v, origin, lit_values):
    row = st.vbits[v]
    cell_start = st.cell_start
    cell_end = st.cell_end
    ncell = cell_start.shape[0]
    x = st.v_lit[v]
    restart = True
    while restart:
        restart = False
        for k in range(ncell):
            cnt = 0
            last = -1
            for p in range(cell_start[k], cell_end[k]):
                if _bit(row, p):
                    cnt += 1
                    last = p
            if cnt == 0:
                kill_vertex(st, q, log, v, origin, True)
                return False
            if cnt == 1:
                nz = st.lit_neg[st.pos_lit[last]]
                if nz >= 0 and _intersects(row, st.lit_mask[nz]):
                    _clear_logged(st, log, row, nz, False, v, origin, lit_values[nz])
                    _tick(st)
                    _push_vertex_fact(st, q, x, nz)
                    restart = True
                    break
    return True


@njit(cache=True)
def zero_edge_literal(st, q, log, e, lit, origin, lit_values):
    """Bit-change every position of ``lit`` in live edge ``e``."""
    if not st.ealive[e]:
        return False
    row = st.ebits[e]
    if not _intersects(row, st.lit_mask[lit]):
        return False
    _clear_logged(st, log, row, lit, True, e, origin, lit_values[lit])
    st.s_ver[st.e_sset[e]] = _tick(st)
    _push_edge_fact(st, q, st.e_group[e], lit)
    comply_edge(st, q, log, e, origin, lit_values)
    return True


@njit(cache=True)
def zero_vertex_literal(st, q, log, v, lit, origin, lit_values):
    if not st.valive[v]:
        return False
    row = st.vbits[v]
    if not _intersects(row, st.lit_mask[lit]):
        return False
    _clear_logged(st, log, row, lit, False, v, origin, lit_values[lit])
    _tick(st)
    _push_vertex_fact(st, q, st.v_lit[v], lit)
    comply_vertex(st, q, log, v, origin, lit_values)
    return True


# ---------------------------------------------------------------- rules


@njit(cache=True)
def rule1(st, q, log, g, c, lit_values):
    """Every live edge of label ``g`` loses every position of ``c``."""
    if st.gdead[g]:
        return
    for i in range(st.g_start[g], st.g_start[g + 1]):
        f = st.g_edges[i]
        if st.ealive[f]:
            zero_edge_literal(st, q, log, f, c, ORIGIN_CASCADE, lit_values)
    if not st.r2done[g, c]:
        st.r2done[g, c] = True
        q.append((R2, g, c))


@njit(cache=True)
def rule2(st, q, log, g, c, lit_values):
    """Label {a,b} excludes c: then {a,c} excludes b and {b,c} excludes a."""
    a = st.g_la[g]
    b = st.g_lb[g]
    if c == a or c == b:
        return
    g2 = st.gid[a, c]
    if g2 >= 0 and not st.gdead[g2]:
        for i in range(st.g_start[g2], st.g_start[g2 + 1]):
            f = st.g_edges[i]
            if st.ealive[f]:
                zero_edge_literal(st, q, log, f, b, ORIGIN_CASCADE, lit_values)
    g3 = st.gid[b, c]
    if g3 >= 0 and not st.gdead[g3]:
        for i in range(st.g_start[g3], st.g_start[g3 + 1]):
            f = st.g_edges[i]
            if st.ealive[f]:
                zero_edge_literal(st, q, log, f, a, ORIGIN_CASCADE, lit_values)


@njit(cache=True)
def vertex_sync(st, q, log, x, c, lit_values):
    for i in range(st.lv_start[x], st.lv_start[x + 1]):
        v = st.lv_verts[i]
        if st.valive[v]:
            zero_vertex_literal(st, q, log, v, c, ORIGIN_CASCADE, lit_values)


@njit(cache=True)
def rule3(st, q, log, g, lit_values):
    """Label {x,y} is dead everywhere."""
    for i in range(st.g_start[g], st.g_start[g + 1]):
        f = st.g_edges[i]
        if st.ealive[f]:
            kill_edge(st, q, log, f, ORIGIN_CASCADE, False)
    x = st.g_la[g]
    y = st.g_lb[g]
    if not st.vsdone[x, y]:
        st.vsdone[x, y] = True
        vertex_sync(st, q, log, x, y, lit_values)
    if not st.vsdone[y, x]:
        st.vsdone[y, x] = True
        vertex_sync(st, q, log, y, x, lit_values)
    for i in range(st.le_start[x], st.le_start[x + 1]):
        f = st.le_edges[i]
        if st.ealive[f]:
            zero_edge_literal(st, q, log, f, y, ORIGIN_CASCADE, lit_values)
    if y != x:
        for i in range(st.le_start[y], st.le_start[y + 1]):
            f = st.le_edges[i]
            if st.ealive[f]:
                zero_edge_literal(st, q, log, f, x, ORIGIN_CASCADE, lit_values)


@njit(cache=True)
def rule4(st, q, log, x, lit_values):
    """Literal ``x`` belongs to no solution."""
    for i in range(st.lv_start[x], st.lv_start[x + 1]):
        v = st.lv_verts[i]
        if st.valive[v]:
            kill_vertex(st, q, log, v, ORIGIN_CASCADE, False)
    nlit = st.vsdone.shape[0]
    for y in range(nlit):
        st.vsdone[y, x] = True
    for v in range(st.valive.shape[0]):
        if st.valive[v]:
            zero_vertex_literal(st, q, log, v, x, ORIGIN_CASCADE, lit_values)
    for g in range(st.r1done.shape[0]):
        st.r1done[g, x] = True
        st.r2done[g, x] = True
    for e in range(st.ealive.shape[0]):
        if st.ealive[e]:
            zero_edge_literal(st, q, log, e, x, ORIGIN_CASCADE, lit_values)


@njit(cache=True)
def apply_item(st, q, log, rule, a, b, lit_values):
    st.ctr[C_RULE_ITEMS] += 1
    if rule == R1:
        rule1(st, q, log, a, b, lit_values)
    elif rule == R2:
        rule2(st, q, log, a, b, lit_values)
    elif rule == R3:
        rule3(st, q, log, a, lit_values)
    elif rule == R4:
        rule4(st, q, log, a, lit_values)
    elif rule == VS:
        vertex_sync(st, q, log, a, b, lit_values)


@njit(cache=True)
def saturate(st, q, log, lit_values):
    """Drain the worklist (FIFO or LIFO per cfg); stops early on UNSAT."""
    lifo = st.cfg[CFG_LIFO]
    while st.status[0] == ST_OK:
        if lifo:
            if len(q) == 0:
                break
            item = q.pop()
        else:
            head = st.status[3]
            if head >= len(q):
                q.clear()
                st.status[3] = 0
                break
            item = q[head]
            st.status[3] = head + 1
        apply_item(st, q, log, item[0], item[1], item[2], lit_values)
    return st.status[0]


# ---------------------------------------------------------------- construction


@njit(cache=True)
def construct_vertices(st, q, log, lit_values):
    for v in range(st.valive.shape[0]):
        if st.valive[v]:
            comply_vertex(st, q, log, v, ORIGIN_CONSTRUCTION, lit_values)


@njit(cache=True)
def construct_edges(st, q, log, lit_values):
    for e in range(st.ealive.shape[0]):
        if st.ealive[e]:
            comply_edge(st, q, log, e, ORIGIN_CONSTRUCTION, lit_values)


# ---------------------------------------------------------------- Comparing


@njit(cache=True)
def determine(st, t, s, phi_on):
    """Union of compliant intersections of edge ``t`` with live edges of S-set ``s``.

    The union is left in ``scratch[1]``.
    """
    return _determine(
        st.ebits, st.ealive, st.e_epmask, st.e_epcells, st.s_start, st.s_edges,
        st.base, st.lit_mask, st.pos_negrow, st.phi_pos, st.phi_neg, st.phi_mask,
        st.phi_wit, st.scratch, st.ctr, t, s, phi_on,
    )


@njit(cache=True)
def _determine(ebits, ealive, e_epmask, e_epcells, s_start, s_edges, base, lit_mask,
               pos_negrow, phi_pos, phi_neg, phi_mask, wit, scratch, ctr, t, s, phi_on):
    W = ebits.shape[1]
    x = scratch[0]
    u = scratch[1]
    epc = scratch[2]
    lt = scratch[3]
    done = scratch[4]
    for w in range(W):
        u[w] = _ZERO
        lt[w] = _nib_loner(ebits[t, w])
    for idx in range(s_start[s], s_start[s + 1]):
        e = s_edges[idx]
        if not ealive[e]:
            continue
        skip = False
        for w in range(W):
            if (e_epmask[t, w] & ~ebits[e, w]) | (e_epmask[e, w] & ~ebits[t, w]):
                skip = True
                break
        if skip:
            ctr[C_PREFILTER_SKIPS] += 1
            continue
        sub = True
        for w in range(W):
            x[w] = ebits[t, w] & ebits[e, w]
            if x[w] & ~u[w]:
                sub = False
        if sub:
            ctr[C_SUBSUMED_SKIPS] += 1
            continue
        ctr[C_INTERSECTIONS] += 1
        for w in range(W):
            done[w] = lt[w] | _nib_loner(ebits[e, w])
        if not lcr_fast(x, done, base, lit_mask, pos_negrow):
            ctr[C_KRULE_ZEROED] += 1
            continue
        sub = True
        for w in range(W):
            if x[w] & ~u[w]:
                sub = False
                break
        if sub:
            # nothing to add, so the Phi outcome cannot matter
            continue
        if phi_on:
            for w in range(W):
                epc[w] = e_epcells[t, w] | e_epcells[e, w]
            if phi_zero(x, epc, lit_mask, phi_pos, phi_neg, phi_mask, wit):
                ctr[C_PHI_ZEROED] += 1
                continue
        full = True
        for w in range(W):
            u[w] |= x[w]
            if u[w] != ebits[t, w]:
                full = False
        ctr[C_UNIONS] += 1
        if full:
            return UNCHANGED
    full = True
    empty = True
    for w in range(W):
        if u[w] != ebits[t, w]:
            full = False
        if u[w]:
            empty = False
    if full:
        return UNCHANGED
    if empty:
        return DEAD
    return REFINED


@njit(cache=True)
def apply_determination(st, q, log, t, outcome, lit_values):
    if outcome == DEAD:
        kill_edge(st, q, log, t, ORIGIN_COMPARING, True)
        return
    tb = st.ebits[t]
    u = st.scratch[1]
    g = st.e_group[t]
    n = st.pos_lit.shape[0]
    for p in range(n):
        if _bit(tb, p) and not _bit(u, p):
            lit = st.pos_lit[p]
            _log(st, log, EV_EDGE_BIT, t, lit_values[lit], p, ORIGIN_COMPARING)
            st.ctr[C_BIT_CHANGES] += 1
            _push_edge_fact(st, q, g, lit)
    for w in range(tb.shape[0]):
        tb[w] = u[w]
    st.s_ver[st.e_sset[t]] = _tick(st)


@njit(cache=True)
def direction(st, q, log, tgt, oth, phi_on, lit_values):
    """Determine every live edge of S-set ``tgt`` against S-set ``oth``.

    Returns the number of determinations that refined or killed an edge.
    """
    changed = 0
    st.ctr[C_DIRECTIONS] += 1
    for idx in range(st.s_start[tgt], st.s_start[tgt + 1]):
        t = st.s_edges[idx]
        if not st.ealive[t]:
            continue
        st.ctr[C_DETERMINATIONS] += 1
        outcome = determine(st, t, oth, phi_on)
        if outcome == UNCHANGED:
            continue
        changed += 1
        st.ctr[C_REFINED] += 1
        apply_determination(st, q, log, t, outcome, lit_values)
        if saturate(st, q, log, lit_values) != ST_OK:
            return changed
    return changed


@njit(cache=True)
def compare_pair(st, q, log, a, b, repeat, phi_on, lit_values):
    """Compare S-sets ``a`` and ``b``: edges of ``a`` first, then of ``b``.

    With ``repeat`` the directions alternate until one passes without
    refinement. Returns the total number of refining determinations.
    """
    total = 0
    d = 0
    use_memo = st.cfg[CFG_MEMO]
    while True:
        if d % 2 == 0:
            tgt = a
            oth = b
        else:
            tgt = b
            oth = a
        if use_memo and st.memo[tgt, oth] >= max(st.s_ver[tgt], st.s_ver[oth]):
            st.ctr[C_MEMO_SKIPS] += 1
            changed = 0
        else:
            changed = direction(st, q, log, tgt, oth, phi_on, lit_values)
            if st.status[0] != ST_OK:
                return total + changed
            if changed == 0 and use_memo:
                st.memo[tgt, oth] = st.ctr[C_CLOCK]
        total += changed
        d += 1
        if d >= 2 and (not repeat or changed == 0):
            break
    return total


@njit(cache=True)
def run_once(st, q, log, repeat, phi_on, lit_values):
    """One run: every unordered pair of S-sets compared once, lexicographically."""
    nsets = st.s_live.shape[0]
    for a in range(nsets):
        for b in range(a + 1, nsets):
            st.ctr[C_PAIRS] += 1
            compare_pair(st, q, log, a, b, repeat, phi_on, lit_values)
            if st.status[0] != ST_OK:
                return st.status[0]
    return st.status[0]
