import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from golden import bits
from seqsat.core import Formula, build_layout
from seqsat.sequences import (
    Compliance,
    DeadSequence,
    Sequence,
    Workspace,
    comply,
    dump_sequence,
    enforce_krule,
    enforce_lcr,
    initial_edge_bits,
    initial_vertex_bits,
    intersect,
    is_edge_pure,
    is_edge_singleton,
    is_singleton,
    phi_check,
    union_,
)
from strategies import formulas


def seqs(f):
    lay = build_layout(f)
    return st.integers(0, lay.full_mask).map(lambda b: Sequence(lay, b))


@st.composite
def formula_and_seqs(draw, k=2):
    f = draw(formulas(max_var=5, max_clauses=6))
    lay = build_layout(f)
    return f, [Sequence(lay, draw(st.integers(0, lay.full_mask))) for _ in range(k)]


def test_sequence_basics(five_clause):
    lay = build_layout(five_clause)
    s = Sequence.from_list(lay, bits("100 010 011 001 001"))
    assert s[0] == 1 and s[1] == 0
    assert s.cell_bits(2) == (0, 1, 1)
    assert s.ones_in_cell(2) == [7, 8]
    assert s.popcount() == 6
    assert s.has_literal(-5) and not s.has_literal(-1)
    assert not s.is_zero()
    assert Sequence.ones(lay).popcount() == 15
    assert s <= Sequence.ones(lay)
    assert s.copy() == s and s.copy() is not s
    assert "1_a" in dump_sequence(s, {1: "a", 2: "x", 3: "y", 4: "b", 5: "c"})


def test_layout_mismatch_rejected(five_clause):
    a = Sequence.ones(build_layout(five_clause))
    b = Sequence.ones(build_layout(Formula(((1, 2),))))
    with pytest.raises(ValueError):
        intersect(a, b)


def test_lcr_cascade_and_death(five_clause):
    lay = build_layout(five_clause)
    # loner -c in cell 4 zeroes c in cells 2 and 5, leaving cell 5 empty
    s = Sequence.from_list(lay, bits("100 011 011 001 001"))
    with pytest.raises(DeadSequence) as info:
        enforce_lcr(s)
    assert info.value.cell == 4
    s = Sequence.from_list(lay, bits("010 001 110 110 111"))
    assert enforce_lcr(s) == []


def test_krule(five_clause):
    lay = build_layout(five_clause)
    assert enforce_krule(Sequence.from_list(lay, bits("100 000 111 111 111"))) is Compliance.DEAD
    assert enforce_krule(Sequence.ones(lay)) is Compliance.LIVE


def test_initial_vertex_bits(five_clause):
    lay = build_layout(five_clause)
    # vertex on a (position 0): own cell reduced to a, every -a zeroed
    assert Sequence(lay, initial_vertex_bits(lay, 0)).to_list() == bits("100 011 011 011 011")


def test_singletons(five_clause):
    lay = build_layout(five_clause)
    s = Sequence.from_list(lay, bits("010 001 110 110 111"))
    assert is_edge_pure(s, 5)  # -c has no entries left
    assert not is_edge_pure(s, 4)
    assert is_edge_pure(s, 2)
    assert is_edge_singleton(s, 2) and is_edge_singleton(s, 4) and not is_edge_singleton(s, -1)
    assert is_singleton(five_clause, 2) and not is_singleton(five_clause, 4)


def test_phi_check():
    f = Formula(((1, 2), (-1, 3), (1, -3), (-2, 3)))
    lay = build_layout(f)
    # variable 1 fully zeroed with both signs occurring outside cells 0 and 3
    s = Sequence.from_list(lay, [0, 1, 0, 1, 0, 1, 0, 1])
    assert phi_check(s, [0, 3])
    # the only positive 1 lives in an endpoint cell, so the rule stays quiet
    assert not phi_check(s, [0, 2])
    assert not phi_check(Sequence.ones(lay), [0, 1])


@given(formula_and_seqs(3))
def test_intersection_union_algebra(data):
    _, (a, b, c) = data
    assert intersect(a, b) == intersect(b, a)
    assert union_(a, b) == union_(b, a)
    assert intersect(a, union_(b, c)) == union_(intersect(a, b), intersect(a, c))
    assert intersect(a, a) == a == union_(a, a)
    assert intersect(a, b) <= a <= union_(a, b)


@given(formula_and_seqs(1))
def test_lcr_idempotent_and_monotone(data):
    _, (s,) = data
    orig = s.copy()
    try:
        enforce_lcr(s)
    except DeadSequence:
        return
    assert s <= orig
    again = s.copy()
    assert enforce_lcr(again) == []
    assert again == s


@st.composite
def compliant_pair(draw):
    f = draw(formulas(max_var=5, max_clauses=6))
    lay = build_layout(f)
    out = []
    for _ in range(2):
        cleared = draw(st.sets(st.integers(0, lay.total_bits - 1), max_size=4))
        s = Sequence(lay, lay.full_mask & ~sum(1 << p for p in cleared))
        assume(comply(s))
        out.append(s)
    return out


@given(compliant_pair())
def test_union_of_compliant_is_compliant(pair):
    a, b = pair
    u = union_(a, b)
    before = u.copy()
    assert comply(u)
    assert u == before


def test_workspace_views(five_clause):
    ws = Workspace(five_clause)
    ws.construct()
    assert ws.num_cells == 5 and ws.num_ssets == 10
    assert ws.num_vertices == 15
    e = ws.find_edge(1, 5)
    assert ws.edge(e).label == (2, 5)
    assert ws.edge_endpoints(e) == (1, 5)
    assert ws.find_edge(0, 1) is None
    assert ws.edge_lookup()[(5, 1)] == e
    m = ws.edge_matrix()
    assert m.shape == (ws.num_edges, 15)
    assert [int(b) for b in m[e]] == ws.edge(e).seq.to_list()
    assert ws.vertex_matrix().shape == (15, 15)
    assert ws.vertex(0).seq.to_list()[0] == 1
    assert sum(v.alive for v in ws.vertices()) == len(list(ws.vertices(alive_only=True)))
    assert ws.live_bits() > 0


def test_workspace_rejects_wide_cells():
    with pytest.raises(ValueError):
        Workspace(Formula(((1, 2, 3, 4, 5),)))
