"""Edge- and vertex-sequences.

Two layers live here:

* reference primitives on Python ints (:class:`Sequence`, :func:`intersect`,
  :func:`enforce_lcr`, ...) used for small cross-checks and debugging;
* :class:`Workspace`, which packs every sequence of a formula into uint64
  rows and drives the compiled kernels in :mod:`seqsat._engine`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from . import _engine as eng
from .core import CellLayout, EmptyFormula, Formula, build_layout, iter_bits


class DeadSequence(Exception):
    """A cell of the sequence emptied (K-rule violation)."""

    def __init__(self, cell: int, changes=()):
        super().__init__(f"cell {cell} has no 1 entry")
        self.cell = cell
        self.changes = list(changes)


class UnsatDetected(Exception):
    def __init__(self, reason: str, detail: int):
        super().__init__(f"{reason} ({detail})")
        self.reason = reason
        self.detail = detail


class Compliance(enum.Enum):
    LIVE = "live"
    DEAD = "dead"


# ---------------------------------------------------------------- reference primitives


class Sequence:
    """A bit-sequence over a layout, stored as one Python int (bit p = position p)."""

    __slots__ = ("layout", "bits")

    def __init__(self, layout: CellLayout, bits: int):
        self.layout = layout
        self.bits = bits & layout.full_mask

    @classmethod
    def ones(cls, layout: CellLayout) -> "Sequence":
        return cls(layout, layout.full_mask)

    @classmethod
    def from_list(cls, layout: CellLayout, values: Iterable[int]) -> "Sequence":
        bits = 0
        for p, b in enumerate(values):
            if b:
                bits |= 1 << p
        return cls(layout, bits)

    def copy(self) -> "Sequence":
        return Sequence(self.layout, self.bits)

    def __getitem__(self, pos: int) -> int:
        return (self.bits >> pos) & 1

    def to_list(self) -> list[int]:
        return [(self.bits >> p) & 1 for p in range(self.layout.total_bits)]

    def cell_bits(self, cell: int) -> tuple[int, ...]:
        return tuple((self.bits >> p) & 1 for p in self.layout.cell_range(cell))

    def ones_in_cell(self, cell: int) -> list[int]:
        return [p for p in self.layout.cell_range(cell) if (self.bits >> p) & 1]

    def popcount(self) -> int:
        return self.bits.bit_count()

    def has_literal(self, lit: int) -> bool:
        return bool(self.bits & self.layout.literal_mask(lit))

    def is_zero(self) -> bool:
        return self.bits == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Sequence) and self.layout is other.layout and self.bits == other.bits

    def __le__(self, other: "Sequence") -> bool:
        return self.bits & ~other.bits == 0

    def __hash__(self):
        return hash(self.bits)

    def dump(self) -> str:
        return dump_sequence(self)

    def __repr__(self) -> str:
        return f"Sequence({self.dump()})"


def _same_layout(a: Sequence, b: Sequence) -> None:
    if a.layout is not b.layout and a.layout != b.layout:
        raise ValueError("sequences use different layouts")


def intersect(a: Sequence, b: Sequence) -> Sequence:
    """Positionwise AND. Compliance is the caller's job."""
    _same_layout(a, b)
    return Sequence(a.layout, a.bits & b.bits)


def union_(a: Sequence, b: Sequence) -> Sequence:
    _same_layout(a, b)
    return Sequence(a.layout, a.bits | b.bits)


def enforce_krule(seq: Sequence) -> Compliance:
    lay = seq.layout
    for k in range(lay.num_cells):
        if not seq.bits & lay.cell_mask(k):
            return Compliance.DEAD
    return Compliance.LIVE


@dataclass(frozen=True)
class LcrChange:
    literal: int
    positions: tuple[int, ...]


def enforce_lcr(seq: Sequence) -> list[LcrChange]:
    """Zero the negation of every loner-cell literal, scanning cells left to
    right and restarting after each change. Mutates ``seq``.

    Raises :class:`DeadSequence` as soon as a cell has no 1 entry.
    """
    lay = seq.layout
    changes: list[LcrChange] = []
    restart = True
    while restart:
        restart = False
        for k in range(lay.num_cells):
            ones = seq.ones_in_cell(k)
            if not ones:
                raise DeadSequence(k, changes)
            if len(ones) == 1:
                neg = -lay.pos_literal[ones[0]]
                m = lay.literal_mask(neg)
                hit = seq.bits & m
                if hit:
                    changes.append(LcrChange(neg, tuple(iter_bits(hit))))
                    seq.bits &= ~m
                    restart = True
                    break
    return changes


def comply(seq: Sequence) -> bool:
    """LCR then K-rule on ``seq`` in place; False when it dies."""
    try:
        enforce_lcr(seq)
    except DeadSequence:
        return False
    return enforce_krule(seq) is Compliance.LIVE


def phi_check(inter: Sequence, endpoint_cells: Iterable[int]) -> bool:
    """True when the intersection must be treated as zero.

    Fires when some variable has all positions of both polarities zeroed and
    both polarities occur somewhere outside ``endpoint_cells``.
    """
    lay = inter.layout
    cells = set(endpoint_cells)
    seen: set[int] = set()
    for lit in lay.pos_literal:
        v = abs(lit)
        if v in seen:
            continue
        seen.add(v)
        pos, neg = lay.positions(v), lay.positions(-v)
        if not pos or not neg:
            continue
        if inter.bits & (lay.literal_mask(v) | lay.literal_mask(-v)):
            continue
        if any(lay.pos_cell[p] not in cells for p in pos) and any(
            lay.pos_cell[p] not in cells for p in neg
        ):
            return True
    return False


def is_edge_pure(seq: Sequence, lit: int) -> bool:
    """``lit`` has a 1 entry while ``-lit`` has none (or does not occur)."""
    return seq.has_literal(lit) and not seq.has_literal(-lit)


def is_edge_singleton(seq: Sequence, lit: int) -> bool:
    """``lit`` has exactly one position holding a 1 entry."""
    return (seq.bits & seq.layout.literal_mask(lit)).bit_count() == 1


def is_singleton(formula: Formula, lit: int) -> bool:
    """``lit`` appears in exactly one clause."""
    return sum(1 for c in formula.clauses if lit in c) == 1


def literal_label(lit: int, names: dict[int, str] | None = None) -> str:
    if names is None:
        return str(lit)
    if lit in names:
        return names[lit]
    if -lit in names:
        return "-" + names[-lit]
    return str(lit)


def dump_sequence(seq: Sequence, names: dict[int, str] | None = None) -> str:
    """Cells separated by '|', each bit written as ``<bit>_<literal>``."""
    lay = seq.layout
    cells = []
    for k in range(lay.num_cells):
        cells.append(
            " ".join(f"{seq[p]}_{literal_label(lay.pos_literal[p], names)}" for p in lay.cell_range(k))
        )
    return " | ".join(cells)


def initial_vertex_bits(layout: CellLayout, pos: int) -> int:
    lit = layout.pos_literal[pos]
    cell = layout.pos_cell[pos]
    bits = layout.full_mask & ~layout.literal_mask(-lit) & ~layout.cell_mask(cell)
    return bits | (1 << pos)


def initial_edge_bits(layout: CellLayout, pa: int, pb: int) -> int:
    x, y = layout.pos_literal[pa], layout.pos_literal[pb]
    bits = layout.full_mask & ~layout.literal_mask(-x) & ~layout.literal_mask(-y)
    bits &= ~layout.cell_mask(layout.pos_cell[pa]) & ~layout.cell_mask(layout.pos_cell[pb])
    return bits | (1 << pa) | (1 << pb)


# ---------------------------------------------------------------- views


@dataclass(frozen=True)
class Endpoint:
    clause: int  # 1-based
    literal: int
    position: int


@dataclass
class EdgeSequence:
    id: int
    sset: tuple[int, int]
    endpoint_a: Endpoint
    endpoint_b: Endpoint
    alive: bool
    seq: Sequence

    @property
    def label(self) -> tuple[int, int]:
        a, b = self.endpoint_a.literal, self.endpoint_b.literal
        return (a, b) if a <= b else (b, a)


@dataclass
class VertexSequence:
    id: int
    anchor: Endpoint
    alive: bool
    seq: Sequence


@dataclass
class SSet:
    id: int
    clause_pair: tuple[int, int]
    edge_ids: tuple[int, ...]


# ---------------------------------------------------------------- packing helpers


def words_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(row, dtype="<u8").tobytes(), "little")


def int_to_words(value: int, width: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(width * 8, "little"), dtype="<u8").astype(np.uint64)


def _csr(groups: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    start = np.zeros(len(groups) + 1, dtype=np.int64)
    for i, g in enumerate(groups):
        start[i + 1] = start[i] + len(g)
    flat = np.fromiter((x for g in groups for x in g), dtype=np.int64, count=int(start[-1]))
    return start, flat


MEMO_LIMIT = 4000

ORIGIN_NAMES = {
    eng.ORIGIN_CONSTRUCTION: "construction",
    eng.ORIGIN_COMPARING: "comparing",
    eng.ORIGIN_CASCADE: "cascade",
    eng.ORIGIN_SEEDED: "seeded",
}
KIND_NAMES = {
    eng.EV_EDGE_BIT: "edge_bit",
    eng.EV_VERTEX_BIT: "vertex_bit",
    eng.EV_EDGE_DEAD: "edge_dead",
    eng.EV_VERTEX_DEAD: "vertex_dead",
}
UNSAT_REASONS = {
    eng.REASON_CLAUSE_VERTICES: "clause-without-vertices",
    eng.REASON_EMPTY_SSET: "empty-sset",
}


class Workspace:
    """All sequences of one (preprocessed) formula plus the refinement state.

    Build with ``Workspace(formula)`` and call :meth:`construct`; the
    lower-level :func:`construct_vertex_sequences` and
    :func:`construct_edge_sequences` are exposed for step-by-step use.
    """

    def __init__(
        self,
        formula: Formula,
        *,
        log_events: bool = False,
        lifo: bool = False,
        memo: bool = True,
    ):
        if not formula.clauses:
            raise EmptyFormula("formula has no clauses")
        if any(len(c) == 0 for c in formula.clauses):
            raise ValueError("formula contains an empty clause")
        self.formula = formula
        self.layout = lay = build_layout(formula)
        C = lay.num_cells
        if any(len(lay.cell_range(k)) > 4 for k in range(C)):
            raise ValueError("cells hold at most 4 literals")
        # engine position of a layout position: 4 * cell + slot, so every
        # cell sits in its own nibble and never straddles a word
        self.epos = epos = np.array(
            [4 * k + (p - lay.cell_offsets[k]) for k in range(C) for p in lay.cell_range(k)],
            dtype=np.int64,
        )
        n = 4 * C
        W = (n + 63) // 64
        self.width = W
        self.lpos = lpos = np.full(n, -1, dtype=np.int64)
        lpos[epos] = np.arange(len(epos))

        lits = sorted(set(lay.pos_literal))
        self.lit_values = np.array(lits, dtype=np.int64)
        self.lit_id = {l: i for i, l in enumerate(lits)}
        L = len(lits)
        lit_neg = np.array([self.lit_id.get(-l, -1) for l in lits], dtype=np.int64)
        neg_row = np.where(lit_neg >= 0, lit_neg, L)

        cell_start = 4 * np.arange(C, dtype=np.int64)
        cell_end = cell_start + np.array([len(lay.cell_range(k)) for k in range(C)], dtype=np.int64)
        pos_cell = np.arange(n, dtype=np.int64) // 4
        pos_lit = np.zeros(n, dtype=np.int64)
        pos_lit[epos] = [self.lit_id[l] for l in lay.pos_literal]
        pos_negrow = np.full(n, L, dtype=np.int64)
        pos_negrow[epos] = neg_row[pos_lit[epos]]
        real = np.zeros(n, dtype=np.bool_)
        real[epos] = True

        def mask_row(value: int) -> np.ndarray:
            return self._pad(value)

        # row L is an all-zero sentinel for "negation absent"
        lit_mask = np.zeros((L + 1, W), dtype=np.uint64)
        for l, i in self.lit_id.items():
            lit_mask[i] = mask_row(lay.literal_mask(l))
        cell_mask = np.zeros((C, W), dtype=np.uint64)
        for k in range(C):
            cell_mask[k] = mask_row(lay.cell_mask(k))
        pos_bit = np.zeros((n, W), dtype=np.uint64)
        for p in range(n):
            pos_bit[p, p >> 6] = np.uint64(1) << np.uint64(p & 63)
        full = mask_row(lay.full_mask)
        base = np.zeros(W, dtype=np.uint64)
        for k in range(C):
            base[(4 * k) >> 6] |= np.uint64(1) << np.uint64((4 * k) & 63)
        lp_start, lp_pos = _csr([[int(epos[p]) for p in lay.positions(l)] for l in lits])
        phi_pairs = [(self.lit_id[l], self.lit_id[-l]) for l in lits if l > 0 and -l in self.lit_id]
        phi_pos = np.array([a for a, _ in phi_pairs], dtype=np.int64)
        phi_neg = np.array([b for _, b in phi_pairs], dtype=np.int64)
        phi_mask = np.zeros((len(phi_pairs), W), dtype=np.uint64)
        for m, (a, b) in enumerate(phi_pairs):
            phi_mask[m] = lit_mask[a] | lit_mask[b]

        # vertices: one per engine position; padding slots are born dead
        vbits = full[None, :] & ~lit_mask[pos_negrow] & ~cell_mask[pos_cell]
        vbits |= pos_bit
        vbits[~real] = 0
        lv_start, lv_verts = lp_start, lp_pos

        # s-sets and edges
        ssets: list[tuple[int, int]] = []
        sset_edges: list[list[int]] = []
        e_pa: list[int] = []
        e_pb: list[int] = []
        e_sset: list[int] = []
        for i, j in combinations(range(C), 2):
            sid = len(ssets)
            ssets.append((i, j))
            members = []
            for pa in range(cell_start[i], cell_end[i]):
                for pb in range(cell_start[j], cell_end[j]):
                    if self.lit_values[pos_lit[pa]] == -self.lit_values[pos_lit[pb]]:
                        continue
                    members.append(len(e_pa))
                    e_pa.append(pa)
                    e_pb.append(pb)
                    e_sset.append(sid)
            sset_edges.append(members)
        S = len(ssets)
        E = len(e_pa)
        pa_arr = np.array(e_pa, dtype=np.int64)
        pb_arr = np.array(e_pb, dtype=np.int64)
        e_la = pos_lit[pa_arr] if E else np.zeros(0, dtype=np.int64)
        e_lb = pos_lit[pb_arr] if E else np.zeros(0, dtype=np.int64)
        if E:
            ebits = (
                full[None, :]
                & ~lit_mask[neg_row[e_la]]
                & ~lit_mask[neg_row[e_lb]]
                & ~cell_mask[pos_cell[pa_arr]]
                & ~cell_mask[pos_cell[pb_arr]]
            )
            ebits |= pos_bit[pa_arr] | pos_bit[pb_arr]
            e_epmask = pos_bit[pa_arr] | pos_bit[pb_arr]
            e_epcells = cell_mask[pos_cell[pa_arr]] | cell_mask[pos_cell[pb_arr]]
        else:
            ebits = np.zeros((0, W), dtype=np.uint64)
            e_epmask = np.zeros((0, W), dtype=np.uint64)
            e_epcells = np.zeros((0, W), dtype=np.uint64)

        # label groups
        gid = np.full((L, L), -1, dtype=np.int64)
        g_members: list[list[int]] = []
        g_la: list[int] = []
        g_lb: list[int] = []
        e_group = np.zeros(E, dtype=np.int64)
        for e in range(E):
            a, b = int(e_la[e]), int(e_lb[e])
            if a > b:
                a, b = b, a
            g = gid[a, b]
            if g < 0:
                g = len(g_members)
                gid[a, b] = gid[b, a] = g
                g_members.append([])
                g_la.append(a)
                g_lb.append(b)
            g_members[g].append(e)
            e_group[e] = g
        G = len(g_members)
        g_start, g_edges = _csr(g_members)
        by_lit: list[list[int]] = [[] for _ in range(L)]
        for e in range(E):
            a, b = int(e_la[e]), int(e_lb[e])
            by_lit[a].append(e)
            if b != a:
                by_lit[b].append(e)
        le_start, le_edges = _csr(by_lit)
        s_start, s_edges = _csr(sset_edges)

        memo_on = bool(memo) and S <= MEMO_LIMIT
        self.st = eng.State(
            cell_start=cell_start,
            cell_end=cell_end,
            base=base,
            pos_cell=pos_cell,
            pos_lit=pos_lit,
            pos_negrow=pos_negrow,
            lit_neg=lit_neg,
            lit_mask=lit_mask,
            lp_start=lp_start,
            lp_pos=lp_pos,
            phi_pos=phi_pos,
            phi_neg=phi_neg,
            phi_mask=phi_mask,
            phi_wit=np.array([int(epos[next(iter(lay.positions(int(self.lit_values[a]))))]) for a, _ in phi_pairs], dtype=np.int64),
            ebits=np.ascontiguousarray(ebits),
            ealive=np.ones(E, dtype=np.bool_),
            e_la=np.ascontiguousarray(e_la),
            e_lb=np.ascontiguousarray(e_lb),
            e_sset=np.array(e_sset, dtype=np.int64),
            e_group=e_group,
            e_epmask=np.ascontiguousarray(e_epmask),
            e_epcells=np.ascontiguousarray(e_epcells),
            s_start=s_start,
            s_edges=s_edges,
            s_live=np.array([len(m) for m in sset_edges], dtype=np.int64),
            s_ver=np.zeros(S, dtype=np.int64),
            g_la=np.array(g_la, dtype=np.int64),
            g_lb=np.array(g_lb, dtype=np.int64),
            g_start=g_start,
            g_edges=g_edges,
            gid=gid,
            le_start=le_start,
            le_edges=le_edges,
            vbits=np.ascontiguousarray(vbits),
            valive=real.copy(),
            v_lit=pos_lit.copy(),
            lv_start=lv_start,
            lv_verts=lv_verts,
            r1done=np.zeros((G, L), dtype=np.bool_),
            r2done=np.zeros((G, L), dtype=np.bool_),
            gdead=np.zeros(G, dtype=np.bool_),
            vsdone=np.zeros((L, L), dtype=np.bool_),
            ldead=np.zeros(L, dtype=np.bool_),
            memo=np.full((S, S) if memo_on else (1, 1), -1, dtype=np.int64),
            cfg=np.array([int(log_events), int(lifo), int(memo_on)], dtype=np.int64),
            ctr=np.zeros(eng.N_COUNTERS, dtype=np.int64),
            status=np.zeros(4, dtype=np.int64),
            scratch=np.zeros((5, W), dtype=np.uint64),
        )
        self.queue = eng.new_queue()
        self.log = eng.new_log()
        self.ssets = [
            SSet(id=s, clause_pair=(i + 1, j + 1), edge_ids=tuple(sset_edges[s]))
            for s, (i, j) in enumerate(ssets)
        ]
        self._sset_index = {(i + 1, j + 1): s for s, (i, j) in enumerate(ssets)}
        self.constructed = False
        self.initial_live_bits = self.live_bits()
        self._log_cursor = 0
        self._edge_lookup: dict[tuple[int, int], int] | None = None

    # ------------------------------------------------------------ sizes

    @property
    def num_cells(self) -> int:
        return self.layout.num_cells

    @property
    def num_edges(self) -> int:
        return int(self.st.ealive.shape[0])

    @property
    def num_ssets(self) -> int:
        return len(self.ssets)

    @property
    def num_vertices(self) -> int:
        return self.layout.total_bits

    # ------------------------------------------------------------ position mapping

    def _pad(self, bits: int) -> np.ndarray:
        """Layout-position bit set -> engine words."""
        out = np.zeros(self.width, dtype=np.uint64)
        for p in iter_bits(bits):
            q = int(self.epos[p])
            out[q >> 6] |= np.uint64(1) << np.uint64(q & 63)
        return out

    def _unpad(self, row: np.ndarray) -> int:
        """Engine words -> layout-position bit set."""
        flags = np.unpackbits(row.view(np.uint8), bitorder="little")[self.epos]
        return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")

    def engine_vertex(self, v: int) -> int:
        return int(self.epos[v])

    @property
    def logging(self) -> bool:
        return bool(self.st.cfg[eng.CFG_LOG])

    # ------------------------------------------------------------ status

    @property
    def unsat(self) -> bool:
        return int(self.st.status[0]) == eng.ST_UNSAT

    @property
    def unsat_reason(self) -> tuple[str, int] | None:
        if not self.unsat:
            return None
        return UNSAT_REASONS[int(self.st.status[1])], int(self.st.status[2])

    def _mark_unsat(self, reason: int, detail: int) -> None:
        if not self.unsat:
            self.st.status[0] = eng.ST_UNSAT
            self.st.status[1] = reason
            self.st.status[2] = detail

    def raise_if_unsat(self) -> None:
        if self.unsat:
            reason, detail = self.unsat_reason
            raise UnsatDetected(reason, detail)

    def counters(self) -> dict[str, int]:
        return {name: int(self.st.ctr[i]) for i, name in enumerate(eng.COUNTER_NAMES)}

    # ------------------------------------------------------------ construction

    def construct(self) -> None:
        """Construct vertex- then edge-sequences and saturate the rules.

        Raises :class:`UnsatDetected` when construction already refutes.
        """
        construct_vertex_sequences(self)
        construct_edge_sequences(self)
        self.saturate()

    def saturate(self) -> None:
        eng.saturate(self.st, self.queue, self.log, self.lit_values)
        self.raise_if_unsat()

    def pending(self) -> list[tuple[int, int, int]]:
        head = int(self.st.status[3])
        items = list(self.queue)
        return items if self.st.cfg[eng.CFG_LIFO] else items[head:]

    # ------------------------------------------------------------ views

    def edge(self, e: int) -> EdgeSequence:
        st, lay = self.st, self.layout
        pa, pb = self.edge_endpoints(e)
        return EdgeSequence(
            id=e,
            sset=self.ssets[int(st.e_sset[e])].clause_pair,
            endpoint_a=Endpoint(lay.pos_cell[pa] + 1, lay.pos_literal[pa], pa),
            endpoint_b=Endpoint(lay.pos_cell[pb] + 1, lay.pos_literal[pb], pb),
            alive=bool(st.ealive[e]),
            seq=Sequence(lay, self._unpad(st.ebits[e])),
        )

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        """Positions of the two endpoints, in clause order."""
        return tuple(iter_bits(self._unpad(self.st.e_epmask[e])))  # type: ignore[return-value]

    def vertex(self, v: int) -> VertexSequence:
        lay = self.layout
        return VertexSequence(
            id=v,
            anchor=Endpoint(lay.pos_cell[v] + 1, lay.pos_literal[v], v),
            alive=bool(self.st.valive[self.epos[v]]),
            seq=Sequence(lay, self._unpad(self.st.vbits[self.epos[v]])),
        )

    def edges(self, alive_only: bool = False) -> Iterator[EdgeSequence]:
        for e in range(self.num_edges):
            if alive_only and not self.st.ealive[e]:
                continue
            yield self.edge(e)

    def vertices(self, alive_only: bool = False) -> Iterator[VertexSequence]:
        for v in range(self.num_vertices):
            if alive_only and not self.st.valive[self.epos[v]]:
                continue
            yield self.vertex(v)

    def sset(self, i: int, j: int) -> SSet:
        """S-set for 1-based clause indices ``i < j``."""
        return self.ssets[self._sset_index[(i, j)]]

    def sset_edges(self, i: int, j: int, alive_only: bool = False) -> list[EdgeSequence]:
        return [
            self.edge(e)
            for e in self.sset(i, j).edge_ids
            if not alive_only or self.st.ealive[e]
        ]

    def find_edge(self, pa: int, pb: int) -> int | None:
        """Edge id with endpoints at positions ``pa`` and ``pb`` (any order)."""
        lay = self.layout
        ci, cj = lay.pos_cell[pa], lay.pos_cell[pb]
        if ci == cj:
            return None
        if ci > cj:
            pa, pb, ci, cj = pb, pa, cj, ci
        s = self._sset_index[(ci + 1, cj + 1)]
        want = {pa, pb}
        for e in self.ssets[s].edge_ids:
            if set(self.edge_endpoints(e)) == want:
                return e
        return None

    def edge_bits(self, e: int) -> int:
        return self._unpad(self.st.ebits[e])

    def vertex_bits(self, v: int) -> int:
        return self._unpad(self.st.vbits[self.epos[v]])

    def edge_matrix(self) -> np.ndarray:
        """Boolean (edges x layout positions) image of every edge-sequence."""
        flags = np.unpackbits(self.st.ebits.view(np.uint8), axis=1, bitorder="little")
        return flags[:, self.epos].astype(bool)

    def vertex_matrix(self) -> np.ndarray:
        """Boolean (layout positions x layout positions) image of the vertex-sequences."""
        rows = self.st.vbits[self.epos]
        flags = np.unpackbits(rows.view(np.uint8), axis=1, bitorder="little")
        return flags[:, self.epos].astype(bool)

    def vertex_alive(self) -> np.ndarray:
        return self.st.valive[self.epos]

    def edge_lookup(self) -> dict[tuple[int, int], int]:
        """(position a, position b) -> edge id, both orders."""
        if self._edge_lookup is None:
            table = {}
            for e in range(self.num_edges):
                pa, pb = self.edge_endpoints(e)
                table[(pa, pb)] = table[(pb, pa)] = e
            self._edge_lookup = table
        return self._edge_lookup

    def live_edge_ids(self) -> np.ndarray:
        return np.flatnonzero(self.st.ealive)

    def live_bits(self) -> int:
        st = self.st
        total = 0
        for e in np.flatnonzero(st.ealive):
            total += eng.popcount_row(st.ebits[e])
        for v in np.flatnonzero(st.valive):
            total += eng.popcount_row(st.vbits[v])
        return total

    def snapshot(self) -> tuple[bytes, bytes, bytes, bytes]:
        """Hashable image of the live/dead sets and bit matrices."""
        st = self.st
        ebits = np.where(st.ealive[:, None], st.ebits, 0)
        vbits = np.where(st.valive[:, None], st.vbits, 0)
        return (
            st.ealive.tobytes(),
            st.valive.tobytes(),
            np.ascontiguousarray(ebits).tobytes(),
            np.ascontiguousarray(vbits).tobytes(),
        )

    # ------------------------------------------------------------ events

    def events(self, since: int = 0) -> list[dict]:
        """Logged refinement events (requires ``log_events=True``)."""
        out = []
        for i in range(since, len(self.log)):
            kind, seq, lit, pos, origin = self.log[i]
            if kind in (eng.EV_VERTEX_BIT, eng.EV_VERTEX_DEAD):
                seq = self.lpos[seq]
            if pos >= 0:
                pos = self.lpos[pos]
            out.append(
                {
                    "seq_no": i,
                    "kind": KIND_NAMES[kind],
                    "sequence": int(seq),
                    "literal": int(lit) if kind in (eng.EV_EDGE_BIT, eng.EV_VERTEX_BIT) else None,
                    "position": int(pos) if pos >= 0 else None,
                    "origin": ORIGIN_NAMES[origin],
                }
            )
        return out

    def new_events(self) -> list[dict]:
        """Events logged since the previous call."""
        out = self.events(self._log_cursor)
        self._log_cursor = len(self.log)
        return out

    # ------------------------------------------------------------ seeding

    def kill_edge(self, e: int) -> None:
        """Kill an edge from outside the rules (origin ``seeded``); queues Rule 3."""
        eng.kill_edge(self.st, self.queue, self.log, e, eng.ORIGIN_SEEDED, True)

    def zero_edge_literal(self, e: int, lit: int) -> bool:
        return bool(
            eng.zero_edge_literal(
                self.st, self.queue, self.log, e, self.lit_id[lit], eng.ORIGIN_SEEDED, self.lit_values
            )
        )


def construct_vertex_sequences(ws: Workspace) -> list[dict]:
    """Apply LCR and the K-rule to every vertex-sequence; deaths queue Rule 4."""
    mark = len(ws.log)
    eng.construct_vertices(ws.st, ws.queue, ws.log, ws.lit_values)
    return ws.events(mark)


def construct_edge_sequences(ws: Workspace) -> list[dict]:
    """Apply LCR and the K-rule to every edge-sequence; deaths queue Rule 3.

    An S-set without edges at all (every pair complementary) refutes at once.
    """
    mark = len(ws.log)
    eng.construct_edges(ws.st, ws.queue, ws.log, ws.lit_values)
    for s, sset in enumerate(ws.ssets):
        if not sset.edge_ids:
            ws._mark_unsat(eng.REASON_EMPTY_SSET, s)
            break
    ws.constructed = True
    return ws.events(mark)
