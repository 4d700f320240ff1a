"""Ground truth: clause-wise brute force, a vectorized assignment enumerator,
DPLL, and K_C membership queries."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np

from .core import Formula
from .solution import Assignment, lift_assignment, verify_assignment


class TooLarge(ValueError):
    pass


@dataclass
class OracleResult:
    sat: bool
    witness: Assignment | None = None
    solutions: list[tuple[int, ...]] | None = None  # literal per clause, clause order
    work: int = 0

    @property
    def status(self) -> str:
        return "SAT" if self.sat else "UNSAT"


def _selection_to_assignment(selection: tuple[int, ...]) -> Assignment:
    order: list[int] = []
    for l in selection:
        if l not in order:
            order.append(l)
    return Assignment({i + 1: l for i, l in enumerate(selection)}, tuple(order))


def brute_force_sat(
    formula: Formula,
    *,
    collect: bool = False,
    max_vars: int = 26,
    max_solutions: int | None = None,
) -> OracleResult:
    """Search one-literal-per-clause selections without complementary pairs.

    With ``collect`` every selection is listed (distinct literal values per
    clause); more than ``max_solutions`` of them raises :class:`TooLarge`.
    Without it a clause already hit by a chosen literal reuses that literal,
    which keeps the search near the size of the assignment space.
    """
    if formula.num_vars > max_vars:
        raise TooLarge(f"{formula.num_vars} variables exceed the brute-force bound {max_vars}")
    clauses = [tuple(dict.fromkeys(c)) for c in formula.clauses]
    n = len(clauses)
    counts: dict[int, int] = {}
    chosen: list[int] = []
    solutions: list[tuple[int, ...]] = []
    work = 0
    limit = max(sys.getrecursionlimit(), n + 100)
    sys.setrecursionlimit(limit)

    def rec(i: int) -> bool:
        nonlocal work
        work += 1
        if i == n:
            solutions.append(tuple(chosen))
            if max_solutions is not None and len(solutions) > max_solutions:
                raise TooLarge(f"more than {max_solutions} solutions")
            return not collect
        clause = clauses[i]
        if not collect:
            hit = next((l for l in clause if counts.get(l)), None)
            if hit is not None:
                options: tuple[int, ...] = (hit,)
            else:
                options = clause
        else:
            options = clause
        for l in options:
            if counts.get(-l):
                continue
            counts[l] = counts.get(l, 0) + 1
            chosen.append(l)
            if rec(i + 1):
                return True
            chosen.pop()
            counts[l] -= 1
        return False

    rec(0)
    if not solutions:
        return OracleResult(False, None, [] if collect else None, work)
    witness = _selection_to_assignment(solutions[0])
    return OracleResult(True, witness, solutions if collect else None, work)


def enumerate_assignments(formula: Formula, *, max_vars: int = 22) -> tuple[bool, dict[int, bool] | None]:
    """Evaluate every variable assignment at once with numpy."""
    vars_ = sorted({abs(l) for c in formula.clauses for l in c})
    if len(vars_) > max_vars:
        raise TooLarge(f"{len(vars_)} variables exceed {max_vars}")
    if not formula.clauses:
        return True, {}
    idx = {v: i for i, v in enumerate(vars_)}
    rows = np.arange(1 << len(vars_), dtype=np.int64)
    table = ((rows[:, None] >> np.arange(len(vars_))) & 1).astype(bool)
    ok = np.ones(len(rows), dtype=bool)
    for clause in formula.clauses:
        sat = np.zeros(len(rows), dtype=bool)
        for l in clause:
            col = table[:, idx[abs(l)]]
            sat |= col if l > 0 else ~col
        ok &= sat
        if not ok.any():
            return False, None
    r = int(np.flatnonzero(ok)[0])
    return True, {v: bool(table[r, i]) for v, i in idx.items()}


@dataclass
class DpllResult:
    sat: bool
    model: dict[int, bool] | None = None
    witness: Assignment | None = None
    decisions: int = 0


def dpll(formula: Formula) -> DpllResult:
    """Unit propagation plus branching on the most frequent unassigned variable."""
    clauses = [frozenset(c) for c in formula.clauses]
    if any(len(c) == 0 for c in clauses):
        return DpllResult(False)
    stats = {"decisions": 0}

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            if -lit in c:
                c = c - {-lit}
                if not c:
                    return None
            out.append(c)
        return out

    def search(cls, assigned: dict[int, bool]):
        while True:
            unit = next((c for c in cls if len(c) == 1), None)
            if unit is None:
                break
            (lit,) = unit
            assigned = {**assigned, abs(lit): lit > 0}
            cls = simplify(cls, lit)
            if cls is None:
                return None
        if not cls:
            return assigned
        freq: dict[int, int] = {}
        for c in cls:
            for l in c:
                freq[abs(l)] = freq.get(abs(l), 0) + 1
        v = max(sorted(freq), key=lambda k: freq[k])
        stats["decisions"] += 1
        for lit in (v, -v):
            nxt = simplify(cls, lit)
            if nxt is None:
                continue
            got = search(nxt, {**assigned, v: lit > 0})
            if got is not None:
                return got
        return None

    model = search(clauses, {})
    if model is None:
        return DpllResult(False, decisions=stats["decisions"])
    true_lits = [l for c in formula.clauses for l in c if model.get(abs(l), True) == (l > 0)]
    witness = lift_assignment(formula, true_lits)
    if not verify_assignment(formula, witness).ok:  # pragma: no cover - defensive
        raise AssertionError("DPLL produced an invalid witness")
    return DpllResult(True, model, witness, stats["decisions"])


# ---------------------------------------------------------------- K_C membership


Occurrence = tuple[int, int]  # (1-based clause index, literal)


def enumerate_kc_membership(
    formula: Formula,
    a: Occurrence,
    b: Occurrence,
    z: Occurrence,
    *,
    max_vars: int = 26,
) -> bool:
    """Is there a solution selecting ``a``, ``b`` and ``z`` from their clauses?

    Depth-first search over the remaining clauses with the three choices
    fixed up front.
    """
    if formula.num_vars > max_vars:
        raise TooLarge(f"{formula.num_vars} variables exceed {max_vars}")
    fixed: dict[int, int] = {}
    for clause_idx, lit in (a, b, z):
        if lit not in formula.clause(clause_idx):
            raise ValueError(f"{lit} is not in clause {clause_idx}")
        if fixed.get(clause_idx, lit) != lit:
            return False
        fixed[clause_idx] = lit
    lits = set(fixed.values())
    if any(-l in lits for l in lits):
        return False
    rest = [tuple(dict.fromkeys(c)) for i, c in enumerate(formula.clauses, start=1) if i not in fixed]
    counts = {l: 1 for l in lits}

    def rec(i: int) -> bool:
        if i == len(rest):
            return True
        clause = rest[i]
        hit = next((l for l in clause if counts.get(l)), None)
        for l in (hit,) if hit is not None else clause:
            if counts.get(-l):
                continue
            counts[l] = counts.get(l, 0) + 1
            if rec(i + 1):
                return True
            counts[l] -= 1
        return False

    return rec(0)


def kc_member_from_solutions(solutions, a: Occurrence, b: Occurrence, z: Occurrence) -> bool:
    """Same query answered by scanning a full solution list."""
    return any(
        s[a[0] - 1] == a[1] and s[b[0] - 1] == b[1] and s[z[0] - 1] == z[1] for s in solutions
    )


@dataclass
class SolutionIndex:
    """Position-level view of a full solution list over a cell layout.

    ``masks[i]`` has bit p set when solution i selects position p.
    """

    masks: list[int] = field(default_factory=list)

    @classmethod
    def build(cls, formula: Formula, layout, solutions) -> "SolutionIndex":
        masks = []
        for sel in solutions:
            m = 0
            for k, lit in enumerate(sel):
                m |= 1 << layout.position_in_cell(k, lit)
            masks.append(m)
        return cls(masks)

    def witnessed(self, pa: int, pb: int) -> int:
        """Union of solutions through both positions (0 when none)."""
        need = (1 << pa) | (1 << pb)
        out = 0
        for m in self.masks:
            if m & need == need:
                out |= m
        return out
