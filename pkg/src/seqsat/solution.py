"""Assignments: verification, extraction from edge-sequences, and the
cell-elimination loop that turns an equivalent workspace into a witness."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import ceil
from typing import Iterable

from .comparing import ComparePolicy, Outcome, Verdict, decide_reduced
from .core import Formula, iter_bits
from .preprocess import Status, is_quantum, preprocess
from .sequences import Sequence, Workspace, enforce_lcr, DeadSequence


@dataclass(frozen=True)
class Assignment:
    """One chosen literal per clause (1-based clause index -> literal).

    ``order`` lists the distinct chosen literals in the order they were
    decided, which is also the order of the DIMACS ``v`` line.
    """

    chosen: dict[int, int] = field(default_factory=dict)
    order: tuple[int, ...] = ()

    @property
    def literal_set(self) -> frozenset[int]:
        return frozenset(self.chosen.values())

    def v_line(self) -> str:
        return "v " + " ".join(str(l) for l in self.order) + (" 0" if self.order else "0")

    def model(self) -> dict[int, bool]:
        return {abs(l): l > 0 for l in self.literal_set}


@dataclass(frozen=True)
class Verification:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_assignment(formula: Formula, a: Assignment) -> Verification:
    """Check the selection against the clauses alone."""
    problems = []
    for idx, clause in enumerate(formula.clauses, start=1):
        lit = a.chosen.get(idx)
        if lit is None:
            problems.append(f"clause {idx} has no chosen literal")
        elif lit not in clause:
            problems.append(f"clause {idx}: chosen literal {lit} not in {clause}")
    extra = sorted(k for k in a.chosen if not 1 <= k <= len(formula.clauses))
    if extra:
        problems.append(f"choices for nonexistent clauses {extra}")
    lits = a.literal_set
    for l in sorted(lits):
        if l > 0 and -l in lits:
            problems.append(f"complementary pair {l}, {-l}")
    return Verification(not problems, tuple(problems))


def lift_assignment(formula: Formula, literals: Iterable[int]) -> Assignment:
    """Pick, for each clause, its first literal among ``literals``.

    Quantum clauses not hit by ``literals`` take a literal whose negation is
    not chosen (one always exists). Clauses left uncovered stay unchosen, so
    :func:`verify_assignment` reports them.
    """
    ordered: list[int] = []
    for l in literals:
        if l not in ordered:
            ordered.append(l)
    pool = set(ordered)
    chosen: dict[int, int] = {}
    pending_quantum = []
    for idx, clause in enumerate(formula.clauses, start=1):
        hit = next((l for l in clause if l in pool), None)
        if hit is not None:
            chosen[idx] = hit
        elif is_quantum(clause):
            pending_quantum.append(idx)
    for idx in pending_quantum:
        clause = formula.clauses[idx - 1]
        lit = next(l for l in clause if -l not in pool)
        chosen[idx] = lit
        if lit not in pool:
            pool.add(lit)
            ordered.append(lit)
    used = set(chosen.values())
    return Assignment(chosen, tuple(l for l in ordered if l in used))


# ---------------------------------------------------------------- singleton edges


class PreconditionViolated(ValueError):
    pass


class ExtractionFailed(RuntimeError):
    """The singleton-edge selection left a cell without a usable literal."""


def extract_from_singleton_edge(ws: Workspace, edge: int) -> Assignment:
    """Choose one literal per cell from an edge whose 1 entries are all
    edge-singletons or singletons.

    Order of choices: cells with a single usable literal, then literals whose
    negation has no usable 1 entry left, repeated to a fixpoint; when neither
    applies, the first usable literal of the first open cell is taken and the
    propagation resumes.
    """
    if not ws.st.ealive[edge]:
        raise PreconditionViolated(f"edge {edge} is dead")
    lay = ws.layout
    formula = ws.formula
    seq = Sequence(lay, ws.edge_bits(edge))
    counts: dict[int, int] = {}
    for c in formula.clauses:
        for l in set(c):
            counts[l] = counts.get(l, 0) + 1
    options: list[list[int]] = []
    for k in range(lay.num_cells):
        lits = [lay.pos_literal[p] for p in seq.ones_in_cell(k)]
        for l in lits:
            if (seq.bits & lay.literal_mask(l)).bit_count() != 1 and counts.get(l, 0) != 1:
                raise PreconditionViolated(f"literal {l} is neither an edge-singleton nor a singleton")
        options.append(lits)

    chosen: dict[int, int] = {}
    taken: set[int] = set()

    def usable(k: int) -> list[int]:
        return [l for l in options[k] if -l not in taken]

    def pick(k: int, l: int) -> None:
        chosen[k] = l
        taken.add(l)

    C = lay.num_cells
    while len(chosen) < C:
        progress = True
        while progress:
            progress = False
            for k in range(C):
                if k in chosen:
                    continue
                opts = usable(k)
                if not opts:
                    raise ExtractionFailed(f"cell {k + 1} has no usable literal")
                if len(opts) == 1:
                    pick(k, opts[0])
                    progress = True
            if progress:
                continue
            live = {l for k in range(C) if k not in chosen for l in usable(k)}
            for k in range(C):
                if k in chosen:
                    continue
                pure = next((l for l in usable(k) if -l not in live), None)
                if pure is not None:
                    pick(k, pure)
                    progress = True
                    break
        open_cells = [k for k in range(C) if k not in chosen]
        if open_cells:
            k = open_cells[0]
            pick(k, usable(k)[0])
    order: list[int] = []
    for k in sorted(chosen):
        if chosen[k] not in order:
            order.append(chosen[k])
    return Assignment({k + 1: l for k, l in chosen.items()}, tuple(order))


# ---------------------------------------------------------------- cell elimination


class ExtractionStalled(RuntimeError):
    """An equivalent workspace did not lead to a verified assignment."""

    def __init__(self, reason: str, formula: Formula, partial: tuple[int, ...] = (), stage: Formula | None = None):
        super().__init__(reason)
        self.reason = reason
        self.formula = formula
        self.partial = partial
        self.stage = stage


class SolveStatus(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    STALLED = "stalled"


@dataclass
class SolveReport:
    status: SolveStatus
    assignment: Assignment | None = None
    iterations: int = 0
    iteration_bound: int = 0
    verdicts: list[Verdict] = field(default_factory=list)
    reason: str | None = None
    stage: Formula | None = None
    chosen: tuple[int, ...] = ()
    solved_in_preprocess: bool = False


def _first_outside(seq: Sequence, cells: set[int]) -> int | None:
    lay = seq.layout
    for p in iter_bits(seq.bits):
        if lay.pos_cell[p] not in cells:
            return p
    return None


def solve(formula: Formula, policy: ComparePolicy = ComparePolicy()) -> SolveReport:
    """Decide, then peel off three cells at a time along a live edge.

    Each iteration takes the first live edge I_{x,y}, the first literal z with
    a 1 entry outside its endpoint cells, zeroes -z, drops the three cells and
    rebuilds a formula from the 1 entries that remain. Preprocessing output
    of every stage is kept. The final selection is verified against
    ``formula``; anything short of a verified witness is STALLED.
    """
    picked: list[int] = []
    verdicts: list[Verdict] = []
    current = formula
    iterations = 0
    bound: int | None = None
    stage_reason = None
    first = True
    while True:
        pre = preprocess(current)
        if pre.status is Status.SOLVED_UNSAT:
            if first:
                return SolveReport(SolveStatus.UNSAT, reason="preprocess-conflict")
            stage_reason = "a rebuilt stage was refuted by preprocessing"
            break
        picked.extend(pre.forced)
        if pre.status is Status.SOLVED_SAT:
            break
        reduced = pre.reduced
        if bound is None:
            bound = ceil(len(reduced) / 3) + 1
        verdict = decide_reduced(reduced, policy)
        verdict.preprocess = pre
        verdicts.append(verdict)
        if verdict.outcome is Outcome.UNSAT:
            if first:
                return SolveReport(SolveStatus.UNSAT, verdicts=verdicts, reason=verdict.unsat_reason)
            stage_reason = "a rebuilt stage was refuted by Comparing"
            break
        first = False
        iterations += 1
        if iterations > bound:
            stage_reason = f"iteration bound {bound} exceeded"
            break
        ws = verdict.workspace
        lay = ws.layout
        live = ws.live_edge_ids()
        if len(live) == 0:
            # a single cell survives preprocessing only if it is the whole stage
            picked.append(lay.pos_literal[0])
            break
        e = int(live[0])
        pa, pb = ws.edge_endpoints(e)
        x, y = lay.pos_literal[pa], lay.pos_literal[pb]
        seq = Sequence(lay, ws.edge_bits(e))
        used_cells = {lay.pos_cell[pa], lay.pos_cell[pb]}
        pz = _first_outside(seq, used_cells)
        if pz is None:
            picked.extend((x, y))
            break
        z = lay.pos_literal[pz]
        kz = lay.pos_cell[pz]
        seq.bits &= ~lay.literal_mask(-z)
        seq.bits &= ~lay.cell_mask(kz)
        seq.bits |= 1 << pz
        try:
            enforce_lcr(seq)
        except DeadSequence:
            stage_reason = f"fixing {z} emptied a cell of edge ({x},{y})"
            current = reduced
            break
        picked.extend((x, y, z))
        used_cells.add(kz)
        rest = []
        for k in range(lay.num_cells):
            if k in used_cells:
                continue
            rest.append(tuple(lay.pos_literal[p] for p in seq.ones_in_cell(k)))
        current = Formula(tuple(rest))
    a = lift_assignment(formula, picked)
    if stage_reason is None:
        check = verify_assignment(formula, a)
        if check.ok:
            return SolveReport(
                SolveStatus.SAT,
                assignment=a,
                iterations=iterations,
                iteration_bound=bound or 0,
                verdicts=verdicts,
                chosen=tuple(picked),
                solved_in_preprocess=iterations == 0,
            )
        stage_reason = "; ".join(check.violations)
    return SolveReport(
        SolveStatus.STALLED,
        assignment=a,
        iterations=iterations,
        iteration_bound=bound or 0,
        verdicts=verdicts,
        reason=stage_reason,
        stage=current,
        chosen=tuple(picked),
    )


def construct_solution(formula: Formula, policy: ComparePolicy = ComparePolicy()) -> Assignment | None:
    """Verified assignment, or None when the formula is refuted.

    Raises :class:`ExtractionStalled` when the procedure claims satisfiability
    but cannot produce a verified witness.
    """
    report = solve(formula, policy)
    if report.status is SolveStatus.UNSAT:
        return None
    if report.status is SolveStatus.STALLED:
        raise ExtractionStalled(report.reason or "stalled", formula, report.chosen, report.stage)
    return report.assignment
