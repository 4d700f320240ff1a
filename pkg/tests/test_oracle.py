import pytest
from hypothesis import given

from seqsat.core import Formula
from seqsat.generators import (
    all_clauses,
    exhaustive_count,
    gen_exhaustive,
    gen_random_3sat,
    has_pure_literal,
)
from seqsat.oracle import (
    SolutionIndex,
    TooLarge,
    brute_force_sat,
    dpll,
    enumerate_assignments,
    enumerate_kc_membership,
    kc_member_from_solutions,
)
from seqsat.core import build_layout
from seqsat.solution import verify_assignment
from strategies import formulas


def test_example_oracles(five_clause):
    assert brute_force_sat(five_clause).sat
    assert dpll(five_clause).sat
    assert enumerate_assignments(five_clause)[0]
    res = brute_force_sat(five_clause, collect=True)
    # a is in no solution
    assert {sel[0] for sel in res.solutions} == {2, 3}
    assert all(1 not in sel for sel in res.solutions)
    assert (2, -1, -1, -1, -1) in res.solutions


def test_size_guards():
    big = Formula(tuple((v, v + 1) for v in range(1, 30)))
    with pytest.raises(TooLarge):
        brute_force_sat(big)
    with pytest.raises(TooLarge):
        enumerate_assignments(big)
    many = Formula(((1, 2, 3), (4, 5, 6), (7, 8, 9)))
    with pytest.raises(TooLarge):
        brute_force_sat(many, collect=True, max_solutions=5)


@given(formulas(max_var=6, max_clauses=10, distinct_vars=False))
def test_oracles_agree(f):
    bf = brute_force_sat(f)
    dp = dpll(f)
    en, model = enumerate_assignments(f)
    assert bf.sat == dp.sat == en
    if bf.sat:
        assert verify_assignment(f, bf.witness)
        assert verify_assignment(f, dp.witness)
        assert all(any((l > 0) == model[abs(l)] for l in c) for c in f.clauses)


@given(formulas(max_var=4, max_clauses=5))
def test_kc_membership_matches_solution_list(f):
    sols = brute_force_sat(f, collect=True).solutions
    occ = [(i + 1, l) for i, c in enumerate(f.clauses) for l in dict.fromkeys(c)]
    for a in occ[:4]:
        for b in occ:
            for z in occ[::2]:
                assert enumerate_kc_membership(f, a, b, z) == kc_member_from_solutions(sols, a, b, z)


def test_kc_membership_rejects_foreign_literal(five_clause):
    with pytest.raises(ValueError):
        enumerate_kc_membership(five_clause, (1, 4), (2, 4), (3, 4))
    assert not enumerate_kc_membership(five_clause, (1, 1), (2, -1), (3, 4))
    assert enumerate_kc_membership(five_clause, (1, 2), (2, -1), (3, -1))


def test_solution_index(five_clause):
    lay = build_layout(five_clause)
    sols = brute_force_sat(five_clause, collect=True).solutions
    idx = SolutionIndex.build(five_clause, lay, sols)
    assert len(idx.masks) == len(sols)
    assert idx.witnessed(0, 3) == 0  # a with -a: no solution
    w = idx.witnessed(1, 3)
    assert w & 1 << 1 and w & 1 << 3


@pytest.mark.parametrize("v, c, want", [(1, 1, 2), (2, 2, 36), (3, 4, 17901)])
def test_exhaustive_counts(v, c, want):
    assert exhaustive_count(v, c) == want
    if want < 1000:
        assert sum(1 for _ in gen_exhaustive(v, c)) == want


def test_all_clauses_are_quantum_free():
    cls = all_clauses(3)
    assert len(cls) == 6 + 12 + 8
    assert all(len({abs(l) for l in c}) == len(c) for c in cls)


@pytest.mark.parametrize("mode", ["uniform", "clean", "adversarial"])
def test_random_generator_is_seeded(mode):
    a = gen_random_3sat(6, 12, 7, mode)
    b = gen_random_3sat(6, 12, 7, mode)
    assert a == b and len(a.clauses) == 12
    assert all(1 <= len(c) <= 3 for c in a.clauses)
    if mode == "clean":
        assert not has_pure_literal(a.clauses)
        assert all(len(c) == 3 for c in a.clauses)
    if mode == "uniform":
        assert all(len({abs(l) for l in c}) == 3 for c in a.clauses)
