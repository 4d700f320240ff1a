"""Pre-processing: normalization, quantum/pure clause removal, unit propagation.

All passes work on ``(origin, clause)`` pairs so that every reduced clause can
be traced back to its 1-based index in the input formula.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable

from seqsat.core import Formula

Indexed = list[tuple[int, tuple[int, ...]]]


class Status(enum.Enum):
    CONTINUE = "continue"
    SOLVED_SAT = "solved-sat"
    SOLVED_UNSAT = "solved-unsat"


class Conflict(Exception):
    """Unit propagation emptied a clause."""

    def __init__(self, clause_index: int, literal: int):
        self.clause_index = clause_index
        self.literal = literal
        super().__init__(f"clause {clause_index} emptied by forcing {literal}")


@dataclass
class PreprocessOutcome:
    reduced: Formula
    forced: tuple[int, ...]
    status: Status
    log: list[dict] = field(default_factory=list)
    origin: tuple[int, ...] = ()
    conflict_clause: int | None = None

    @property
    def forced_set(self) -> frozenset[int]:
        return frozenset(self.forced)

    def log_lines(self) -> str:
        return "".join(json.dumps(ev, sort_keys=True) + "\n" for ev in self.log)


def _indexed(formula: Formula) -> Indexed:
    return [(i + 1, c) for i, c in enumerate(formula.clauses)]


def _normalize(items: Indexed, log: list[dict] | None = None) -> Indexed:
    out: Indexed = []
    seen: set[tuple[int, ...]] = set()
    for origin, clause in items:
        norm = tuple(sorted(set(clause)))
        if log is not None and len(norm) != len(clause):
            log.append({"step": "dedup-literals", "clause": origin, "result": list(norm)})
        if norm in seen:
            if log is not None:
                log.append({"step": "duplicate-clause", "clause": origin})
            continue
        seen.add(norm)
        out.append((origin, norm))
    return out


def normalize(formula: Formula) -> Formula:
    """Sort literals, collapse repeated literals and drop repeated clauses."""
    return Formula(tuple(c for _, c in _normalize(_indexed(formula))))


def is_quantum(clause: Iterable[int]) -> bool:
    lits = set(clause)
    return any(-l in lits for l in lits)


def _strip_quantum(items: Indexed, log: list[dict]) -> tuple[Indexed, list[int]]:
    kept: Indexed = []
    removed: list[int] = []
    for origin, clause in items:
        if is_quantum(clause):
            removed.append(origin)
            log.append({"step": "quantum", "clause": origin})
        else:
            kept.append((origin, clause))
    return kept, removed


def strip_quantum(formula: Formula) -> tuple[Formula, list[int]]:
    kept, removed = _strip_quantum(_indexed(formula), [])
    return Formula(tuple(c for _, c in kept)), removed


def _strip_pure(items: Indexed, log: list[dict]) -> tuple[Indexed, list[int]]:
    reps: list[int] = []
    while True:
        present = {l for _, c in items for l in c}
        pures = {l for l in present if -l not in present}
        if not pures:
            return items, reps
        kept: Indexed = []
        for origin, clause in items:
            hit = [l for l in clause if l in pures]
            if hit:
                rep = min(hit)
                if rep not in reps:
                    reps.append(rep)
                log.append({"step": "pure", "clause": origin, "literal": rep})
            else:
                kept.append((origin, clause))
        items = kept


def strip_pure(formula: Formula) -> tuple[Formula, set[int]]:
    """Remove clauses holding a pure literal, repeatedly, until none remain."""
    kept, reps = _strip_pure(_indexed(formula), [])
    return Formula(tuple(c for _, c in kept)), set(reps)


def _propagate_units(items: Indexed, log: list[dict]) -> tuple[Indexed, list[int]]:
    forced: list[int] = []
    while True:
        unit = next((c[0] for _, c in items if len(c) == 1), None)
        if unit is None:
            return items, forced
        forced.append(unit)
        log.append({"step": "unit", "literal": unit})
        kept: Indexed = []
        for origin, clause in items:
            if clause == (unit,):
                continue
            if -unit in clause:
                clause = tuple(l for l in clause if l != -unit)
                if not clause:
                    log.append({"step": "conflict", "clause": origin, "literal": unit})
                    raise Conflict(origin, unit)
            kept.append((origin, clause))
        items = kept


def propagate_units(formula: Formula) -> tuple[Formula, set[int]]:
    """Consume size-1 clauses; raises :class:`Conflict` if a clause empties."""
    kept, forced = _propagate_units(_indexed(formula), [])
    return Formula(tuple(c for _, c in kept)), set(forced)


def preprocess(formula: Formula) -> PreprocessOutcome:
    log: list[dict] = []
    items = _normalize(_indexed(formula), log)
    forced: list[int] = []
    while True:
        before = items
        items, _ = _strip_quantum(items, log)
        items, reps = _strip_pure(items, log)
        try:
            items, units = _propagate_units(items, log)
        except Conflict as exc:
            forced.extend(l for l in reps if l not in forced)
            return PreprocessOutcome(
                reduced=Formula(tuple(c for _, c in items)),
                forced=tuple(forced),
                status=Status.SOLVED_UNSAT,
                log=log,
                origin=tuple(o for o, _ in items),
                conflict_clause=exc.clause_index,
            )
        for l in (*reps, *units):
            if l not in forced:
                forced.append(l)
        items = _normalize(items, log)
        if items == before:
            break
    status = Status.SOLVED_SAT if not items else Status.CONTINUE
    return PreprocessOutcome(
        reduced=Formula(tuple(c for _, c in items)),
        forced=tuple(forced),
        status=status,
        log=log,
        origin=tuple(o for o, _ in items),
    )


def normalize_only(formula: Formula) -> PreprocessOutcome:
    """Normalization without any reduction, for running the sequence engine on raw input."""
    items = _normalize(_indexed(formula))
    return PreprocessOutcome(
        reduced=Formula(tuple(c for _, c in items)),
        forced=(),
        status=Status.SOLVED_SAT if not items else Status.CONTINUE,
        origin=tuple(o for o, _ in items),
    )
