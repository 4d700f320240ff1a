"""The four refinement rules, applied through the compiled worklist.

Each ``apply_rule*`` performs one rule's action immediately and leaves its
consequences on the workspace queue; :func:`saturate` drains the queue.
:func:`check_fixpoint` re-derives every rule trigger from the bit matrices
alone, independently of the worklist bookkeeping.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from . import _engine as eng
from .sequences import UnsatDetected, Workspace, comply


@dataclass(frozen=True)
class RefinementEvent:
    seq_no: int
    kind: str
    sequence: int
    literal: int | None
    position: int | None
    origin: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "seq_no": self.seq_no,
                "kind": self.kind,
                "sequence": self.sequence,
                "literal": self.literal,
                "position": self.position,
                "origin": self.origin,
            }
        )


def _events(ws: Workspace, since: int) -> list[RefinementEvent]:
    return [RefinementEvent(**d) for d in ws.events(since)]


def export_events(ws: Workspace) -> str:
    """Line-JSON dump of the whole event log."""
    return "".join(ev.to_json() + "\n" for ev in _events(ws, 0))


def apply_rule1(ws: Workspace, edge: int, changed_literals: Iterable[int]) -> list[RefinementEvent]:
    """Zero each literal in ``edge`` and in every live edge carrying the same label."""
    mark = len(ws.log)
    st = ws.st
    g = int(st.e_group[edge])
    for lit in changed_literals:
        c = ws.lit_id.get(lit)
        if c is None:
            continue
        st.r1done[g, c] = True
        eng.rule1(st, ws.queue, ws.log, g, c, ws.lit_values)
    return _events(ws, mark)


def apply_rule2(ws: Workspace, edge: int, literal: int) -> list[RefinementEvent]:
    """``edge`` (label {a,b}) has every position of ``literal`` zeroed."""
    st = ws.st
    c = ws.lit_id[literal]
    if st.ealive[edge] and ws.edge_bits(edge) & ws.layout.literal_mask(literal):
        raise ValueError(f"literal {literal} still has a 1 entry in edge {edge}")
    mark = len(ws.log)
    g = int(st.e_group[edge])
    st.r2done[g, c] = True
    eng.rule2(st, ws.queue, ws.log, g, c, ws.lit_values)
    return _events(ws, mark)


def apply_rule3(ws: Workspace, edge: int) -> list[RefinementEvent]:
    """``edge`` is dead: kill its label everywhere and separate its literals."""
    st = ws.st
    mark = len(ws.log)
    g = int(st.e_group[edge])
    st.gdead[g] = True
    eng.kill_edge(st, ws.queue, ws.log, edge, eng.ORIGIN_CASCADE, False)
    eng.rule3(st, ws.queue, ws.log, g, ws.lit_values)
    return _events(ws, mark)


def apply_rule4(ws: Workspace, vertex: int) -> list[RefinementEvent]:
    """The vertex-sequence ``vertex`` is dead: its literal is in no solution."""
    st = ws.st
    mark = len(ws.log)
    ev = ws.engine_vertex(vertex)
    x = int(st.v_lit[ev])
    st.ldead[x] = True
    eng.kill_vertex(st, ws.queue, ws.log, ev, eng.ORIGIN_CASCADE, False)
    eng.rule4(st, ws.queue, ws.log, x, ws.lit_values)
    ws.raise_if_unsat()
    return _events(ws, mark)


def saturate(ws: Workspace) -> list[RefinementEvent]:
    """Drain the worklist; raises :class:`UnsatDetected` on refutation."""
    mark = len(ws.log)
    eng.saturate(ws.st, ws.queue, ws.log, ws.lit_values)
    ws.raise_if_unsat()
    return _events(ws, mark)


# ---------------------------------------------------------------- invariant checks


def _outside(lay, positions, cells) -> list[int]:
    return [p for p in positions if lay.pos_cell[p] not in cells]


def check_fixpoint(ws: Workspace) -> list[str]:
    """Every rule trigger visible in the bit matrices must already be discharged.

    Returns human-readable violations (empty when at a fixpoint). Meant for
    small instances: it works on Python ints and is quadratic in the edges.
    """
    lay = ws.layout
    st = ws.st
    problems: list[str] = []
    lits = sorted(set(lay.pos_literal))
    edges = [ws.edge(e) for e in range(ws.num_edges)]
    verts = [ws.vertex(v) for v in range(ws.num_vertices)]

    # compliance
    for e in edges:
        if e.alive:
            s = e.seq.copy()
            if not comply(s) or s != e.seq:
                problems.append(f"edge {e.id} not compliant")
    for v in verts:
        if v.alive:
            s = v.seq.copy()
            if not comply(s) or s != v.seq:
                problems.append(f"vertex {v.id} not compliant")

    # label groups: excluded literals and deaths
    groups: dict[tuple[int, int], list] = {}
    for e in edges:
        groups.setdefault(e.label, []).append(e)
    excluded: dict[tuple[int, int], set[int]] = {}
    dead_labels = set()
    for label, members in groups.items():
        if any(not e.alive for e in members):
            dead_labels.add(label)
            if any(e.alive for e in members):
                problems.append(f"label {label} partly dead")
            continue
        ex = set()
        for e in members:
            cells = {e.endpoint_a.clause - 1, e.endpoint_b.clause - 1}
            for c in lits:
                if c in label:
                    continue
                outside = _outside(lay, lay.positions(c), cells)
                if any(not e.seq[p] for p in outside):
                    ex.add(c)
        excluded[label] = ex
        for e in members:
            for c in ex:
                if e.seq.has_literal(c):
                    problems.append(f"rule 1: literal {c} live in edge {e.id} of label {label}")

    def label_of(a, b):
        return (a, b) if a <= b else (b, a)

    # rule 2
    for (a, b), ex in excluded.items():
        for c in ex:
            for lab, lit in ((label_of(a, c), b), (label_of(b, c), a)):
                for e in groups.get(lab, ()):
                    if e.alive and e.seq.has_literal(lit):
                        problems.append(f"rule 2: ({a},{b}) excludes {c} but edge {e.id} keeps {lit}")

    # rule 3
    for x, y in dead_labels:
        for v in verts:
            if v.alive and v.anchor.literal == x and v.seq.has_literal(y):
                problems.append(f"rule 3: vertex {v.id} keeps {y}")
            if v.alive and v.anchor.literal == y and v.seq.has_literal(x):
                problems.append(f"rule 3: vertex {v.id} keeps {x}")
        for e in edges:
            if not e.alive:
                continue
            if x in e.label and e.seq.has_literal(y):
                problems.append(f"rule 3: edge {e.id} keeps {y}")
            if y in e.label and e.seq.has_literal(x):
                problems.append(f"rule 3: edge {e.id} keeps {x}")

    # vertex sync and rule 4
    by_lit: dict[int, list] = {}
    for v in verts:
        by_lit.setdefault(v.anchor.literal, []).append(v)
    for x, vs in by_lit.items():
        if any(not v.alive for v in vs):
            if any(v.alive for v in vs):
                problems.append(f"rule 4: literal {x} partly dead")
            for v in verts:
                if v.alive and v.seq.has_literal(x):
                    problems.append(f"rule 4: vertex {v.id} keeps dead literal {x}")
            for e in edges:
                if e.alive and e.seq.has_literal(x):
                    problems.append(f"rule 4: edge {e.id} keeps dead literal {x}")
            continue
        for v in vs:
            cells = {v.anchor.clause - 1}
            for c in lits:
                if c == x:
                    continue
                if any(not v.seq[p] for p in _outside(lay, lay.positions(c), cells)):
                    for u in vs:
                        if u.seq.has_literal(c):
                            problems.append(f"vertex sync: {c} live in vertex {u.id}")
    if not ws.unsat:
        for k in range(lay.num_cells):
            if not any(st.valive[ws.engine_vertex(p)] for p in lay.cell_range(k)):
                problems.append(f"clause {k + 1} has no live vertex")
        for s in ws.ssets:
            if not any(st.ealive[e] for e in s.edge_ids):
                problems.append(f"S-set {s.clause_pair} empty")
    return problems


def endpoint_cells_intact(ws: Workspace) -> list[int]:
    """Live edges whose endpoint cells do not hold exactly their endpoint bit."""
    lay = ws.layout
    bad = []
    for e in ws.live_edge_ids():
        bits = ws.edge_bits(int(e))
        for p in ws.edge_endpoints(int(e)):
            cell_bits = bits & lay.cell_mask(lay.pos_cell[p])
            if cell_bits != 1 << p:
                bad.append(int(e))
                break
    return bad


__all__ = [
    "RefinementEvent",
    "UnsatDetected",
    "apply_rule1",
    "apply_rule2",
    "apply_rule3",
    "apply_rule4",
    "saturate",
    "export_events",
    "check_fixpoint",
    "endpoint_cells_intact",
]
