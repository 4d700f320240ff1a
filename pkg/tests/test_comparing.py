import json
from math import comb

import pytest
from hypothesis import given

from seqsat.comparing import (
    CLAIM_NOTE,
    ComparePolicy,
    DetermineResult,
    Mode,
    Outcome,
    build_workspace,
    compare_ssets,
    decide,
    determine_edge,
    execute_round,
    execute_run,
    pairs_per_run,
)
from seqsat.core import Formula
from seqsat.oracle import brute_force_sat
from strategies import formulas


@pytest.mark.parametrize("c, want", [(1, 0), (2, 0), (3, 3), (4, 15), (5, 45), (6, 105)])
def test_pairs_per_run(c, want):
    assert pairs_per_run(c) == want == comb(comb(c, 2), 2)


def test_run_on_example(five_clause):
    ws = build_workspace(five_clause)
    ws.construct()
    stats = execute_run(ws)
    assert stats.sset_pairs_compared == 45
    assert stats.determinations > 0
    assert not stats.changed  # construction already left it stable


def test_decide_example_without_preprocessing(five_clause):
    v = decide(five_clause, use_preprocess=False)
    assert v.outcome is Outcome.EQUIVALENT
    assert v.claimed_sat
    assert v.runs == 1
    assert v.num_cells == 5 and v.num_positions == 15
    d = json.loads(v.to_json())
    assert d["schema"] == 1 and d["outcome"] == "equivalent"
    assert d["claim_note"] == CLAIM_NOTE
    assert d["runs"][0]["sset_pairs_compared"] == 45


def test_decide_unsat():
    v = decide(Formula(((1,), (-1,))))
    assert v.outcome is Outcome.UNSAT
    # all eight sign patterns over three variables
    clauses = tuple(
        tuple(s * v for s, v in zip(signs, (1, 2, 3)))
        for signs in [(a, b, c) for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    )
    v = decide(Formula(clauses))
    assert v.outcome is Outcome.UNSAT
    assert v.unsat_reason


def test_determine_edge_guards(five_clause):
    ws = build_workspace(five_clause)
    ws.construct()
    dead = next(e.id for e in ws.edges() if not e.alive)
    with pytest.raises(ValueError):
        determine_edge(ws, dead, 1)
    live = next(e.id for e in ws.edges(alive_only=True))
    own = int(ws.st.e_sset[live])
    with pytest.raises(ValueError):
        determine_edge(ws, live, own)
    other = (own + 1) % ws.num_ssets
    assert determine_edge(ws, live, other) is DetermineResult.UNCHANGED
    with pytest.raises(ValueError):
        compare_ssets(ws, 0, 0)
    assert compare_ssets(ws, 0, 1) is False


def test_policy_describe():
    p = ComparePolicy(mode=Mode.SINGLE_PASS, phi_enabled=False, lifo=True)
    assert p.describe() == {"mode": "single-pass", "phi": False, "worklist": "lifo"}
    assert not p.repeat and ComparePolicy().repeat


def test_run_hook_sees_every_run(five_clause):
    seen = []
    decide(five_clause, use_preprocess=False, on_run=lambda ws, s: seen.append(s.run_index),
           on_constructed=lambda ws: seen.append("built"))
    assert seen == ["built", 0]


@given(formulas(max_var=5, max_clauses=7))
def test_unsat_verdicts_are_sound(f):
    for pre in (True, False):
        v = decide(f, use_preprocess=pre)
        if v.outcome is Outcome.UNSAT:
            assert not brute_force_sat(f).sat


@given(formulas(max_var=4, max_clauses=6))
def test_policies_agree(f):
    results = set()
    for mode in Mode:
        for lifo in (False, True):
            v = decide(f, ComparePolicy(mode=mode, lifo=lifo), use_preprocess=False)
            snap = v.workspace.snapshot() if v.workspace is not None and v.outcome is not Outcome.UNSAT else None
            results.add((v.outcome, snap))
    assert len(results) == 1


def test_round_bound(five_clause):
    ws = build_workspace(five_clause)
    ws.construct()
    v = execute_round(ws)
    assert v.runs <= v.live_bits_at_round_start + 1
