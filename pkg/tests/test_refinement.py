import json

import pytest
from hypothesis import given

from seqsat.comparing import decide
from seqsat.sequences import UnsatDetected, Workspace
from seqsat import refinement as R
from strategies import formulas


def built(f, **kw) -> Workspace:
    ws = Workspace(f, **kw)
    ws.construct()
    return ws


def test_constructed_example_is_at_fixpoint(five_clause):
    ws = built(five_clause)
    assert R.check_fixpoint(ws) == []
    assert R.endpoint_cells_intact(ws) == []
    v = decide(five_clause, use_preprocess=False)
    assert R.check_fixpoint(v.workspace) == []


@given(formulas(max_var=5, max_clauses=6))
def test_construction_reaches_fixpoint(f):
    try:
        ws = built(f)
    except UnsatDetected:
        return
    assert R.check_fixpoint(ws) == []
    assert R.endpoint_cells_intact(ws) == []


def test_killing_an_sset_refutes(five_clause):
    ws = built(five_clause)
    for e in ws.sset_edges(1, 2, alive_only=True):
        ws.kill_edge(e.id)
    with pytest.raises(UnsatDetected) as info:
        ws.saturate()
    assert info.value.reason == "empty-sset"


def test_rule4_on_every_vertex_of_a_clause_refutes(five_clause):
    ws = built(five_clause)
    with pytest.raises(UnsatDetected) as info:
        for p in range(3):
            if ws.vertex(p).alive:
                R.apply_rule4(ws, p)
    assert info.value.reason == "clause-without-vertices"


def test_rule4_cascade_is_logged(five_clause):
    ws = built(five_clause, log_events=True)
    p = next(v.id for v in ws.vertices(alive_only=True) if v.anchor.literal == 4)
    events = R.apply_rule4(ws, p)
    assert events
    assert {ev.origin for ev in events} == {"cascade"}
    assert any(ev.kind == "vertex_dead" for ev in events)
    assert not any(v.alive for v in ws.vertices() if v.anchor.literal == 4)
    assert all(not e.seq.has_literal(4) for e in ws.edges(alive_only=True))
    for line in R.export_events(ws).splitlines():
        json.loads(line)


def test_rule1_then_saturate(five_clause):
    ws = built(five_clause)
    e = ws.find_edge(1, 5)  # label (x, c)
    R.apply_rule1(ws, e, [4])
    assert not ws.edge(e).seq.has_literal(4)
    # rule 1 alone leaves the dependent rule 2 work queued
    assert R.check_fixpoint(ws)
    R.saturate(ws)
    assert R.check_fixpoint(ws) == []


def test_rule2_requires_zeroed_literal(five_clause):
    ws = built(five_clause)
    e = ws.find_edge(1, 5)
    with pytest.raises(ValueError):
        R.apply_rule2(ws, e, 4)
