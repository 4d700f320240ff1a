"""Comparing: determinations, S-set pair comparisons, runs, rounds, verdicts."""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Callable

import numpy as np

from . import _engine as eng
from .core import Formula
from .preprocess import PreprocessOutcome, Status, normalize_only, preprocess
from .sequences import UnsatDetected, Workspace

CLAIM_NOTE = (
    "EQUIVALENT means the S-sets reached a stable state; treating that as "
    "satisfiable is the procedure's claim, not a verified certificate"
)


class Mode(enum.Enum):
    SINGLE_PASS = "single-pass"
    REPEAT_UNTIL_STABLE = "repeat-until-stable"


@dataclass(frozen=True)
class ComparePolicy:
    mode: Mode = Mode.REPEAT_UNTIL_STABLE
    phi_enabled: bool = True
    lifo: bool = False  # worklist discipline for the rule cascade

    @property
    def repeat(self) -> bool:
        return self.mode is Mode.REPEAT_UNTIL_STABLE

    def describe(self) -> dict:
        return {"mode": self.mode.value, "phi": self.phi_enabled, "worklist": "lifo" if self.lifo else "fifo"}


class Outcome(enum.Enum):
    EQUIVALENT = "equivalent"
    UNSAT = "unsat"
    SOLVED_IN_PREPROCESS = "solved-in-preprocess"


@dataclass
class RunStats:
    run_index: int
    sset_pairs_compared: int
    determinations: int
    intersections: int
    unions: int
    bit_changes: int
    edge_deaths: int
    vertex_deaths: int
    refined_determinations: int = 0
    memo_skipped_directions: int = 0
    prefilter_skips: int = 0
    subsumed_skips: int = 0
    phi_zeroed: int = 0

    @property
    def changed(self) -> bool:
        return self.refined_determinations > 0


_RUN_FIELDS = (
    "sset_pairs_compared",
    "determinations",
    "intersections",
    "unions",
    "bit_changes",
    "edge_deaths",
    "vertex_deaths",
    "refined_determinations",
    "memo_skipped_directions",
    "prefilter_skips",
    "subsumed_skips",
    "phi_zeroed",
)


@dataclass
class Verdict:
    outcome: Outcome
    rounds: list[RunStats] = field(default_factory=list)
    assignment: object | None = None  # Assignment when solved in preprocessing
    unsat_reason: str | None = None
    preprocess: PreprocessOutcome | None = None
    counters: dict = field(default_factory=dict)
    live_bits_at_round_start: int | None = None
    num_cells: int = 0
    num_positions: int = 0
    workspace: Workspace | None = field(default=None, repr=False, compare=False)
    claim_note: str = CLAIM_NOTE

    @property
    def runs(self) -> int:
        return len(self.rounds)

    @property
    def claimed_sat(self) -> bool:
        return self.outcome is not Outcome.UNSAT

    def to_dict(self) -> dict:
        d = {
            "schema": 1,
            "outcome": self.outcome.value,
            "runs": [asdict(r) for r in self.rounds],
            "unsat_reason": self.unsat_reason,
            "counters": self.counters,
            "cells": self.num_cells,
            "positions": self.num_positions,
            "live_bits_at_round_start": self.live_bits_at_round_start,
        }
        if self.outcome is Outcome.EQUIVALENT:
            d["claim_note"] = self.claim_note
        if self.preprocess is not None:
            d["preprocess"] = {
                "status": self.preprocess.status.value,
                "forced": sorted(self.preprocess.forced, key=lambda l: (abs(l), l < 0)),
                "reduced_clauses": len(self.preprocess.reduced),
            }
        if self.assignment is not None:
            d["assignment"] = sorted(self.assignment.literal_set, key=lambda l: (abs(l), l < 0))
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class DetermineResult(enum.Enum):
    UNCHANGED = eng.UNCHANGED
    REFINED = eng.REFINED
    DEAD = eng.DEAD


def pairs_per_run(num_cells: int) -> int:
    """C(C(c,2),2): S-set pair comparisons in one run."""
    return comb(comb(num_cells, 2), 2)


def determine_edge(ws: Workspace, target: int, other_sset: int, policy: ComparePolicy = ComparePolicy()) -> DetermineResult:
    """Determine one edge against one other S-set and apply the outcome.

    Refinements and deaths are saturated before returning.
    """
    st = ws.st
    if not st.ealive[target]:
        raise ValueError(f"edge {target} is dead")
    if int(st.e_sset[target]) == other_sset:
        raise ValueError("cannot determine an edge against its own S-set")
    st.ctr[eng.C_DETERMINATIONS] += 1
    out = eng.determine(st, target, other_sset, policy.phi_enabled)
    if out != eng.UNCHANGED:
        st.ctr[eng.C_REFINED] += 1
        eng.apply_determination(st, ws.queue, ws.log, target, out, ws.lit_values)
        eng.saturate(st, ws.queue, ws.log, ws.lit_values)
    ws.raise_if_unsat()
    return DetermineResult(out)


def compare_ssets(ws: Workspace, a: int, b: int, policy: ComparePolicy = ComparePolicy()) -> bool:
    """Compare S-sets ``a`` and ``b`` (edges of ``a`` determined first)."""
    if a == b:
        raise ValueError("an S-set is not compared with itself")
    changed = eng.compare_pair(ws.st, ws.queue, ws.log, a, b, policy.repeat, policy.phi_enabled, ws.lit_values)
    ws.raise_if_unsat()
    return changed > 0


def _snapshot(ws: Workspace) -> np.ndarray:
    return ws.st.ctr.copy()


def _diff(ws: Workspace, before: np.ndarray, index: int) -> RunStats:
    after = ws.st.ctr
    d = {name: int(after[i] - before[i]) for i, name in enumerate(eng.COUNTER_NAMES)}
    return RunStats(run_index=index, **{k: d[k] for k in _RUN_FIELDS})


def execute_run(ws: Workspace, policy: ComparePolicy = ComparePolicy(), index: int = 0) -> RunStats:
    """Compare every pair of S-sets once, in lexicographic order."""
    before = _snapshot(ws)
    eng.run_once(ws.st, ws.queue, ws.log, policy.repeat, policy.phi_enabled, ws.lit_values)
    stats = _diff(ws, before, index)
    ws.raise_if_unsat()
    return stats


RunHook = Callable[[Workspace, RunStats], None]


def execute_round(
    ws: Workspace,
    policy: ComparePolicy = ComparePolicy(),
    *,
    on_run: RunHook | None = None,
) -> Verdict:
    """Repeat runs until one makes no refinement, or the workspace refutes."""
    runs: list[RunStats] = []
    start_bits = ws.live_bits()
    bound = start_bits + 1
    while True:
        before = _snapshot(ws)
        eng.run_once(ws.st, ws.queue, ws.log, policy.repeat, policy.phi_enabled, ws.lit_values)
        stats = _diff(ws, before, len(runs))
        runs.append(stats)
        if on_run is not None:
            on_run(ws, stats)
        if ws.unsat:
            reason, _ = ws.unsat_reason
            return _verdict(ws, Outcome.UNSAT, runs, start_bits, reason)
        if not stats.changed:
            return _verdict(ws, Outcome.EQUIVALENT, runs, start_bits)
        if len(runs) > bound:
            raise AssertionError(f"{len(runs)} runs exceed the bound {bound}")


def _verdict(ws, outcome, runs, start_bits, reason=None) -> Verdict:
    return Verdict(
        outcome=outcome,
        rounds=runs,
        unsat_reason=reason,
        counters=ws.counters(),
        live_bits_at_round_start=start_bits,
        num_cells=ws.num_cells,
        num_positions=ws.layout.total_bits,
        workspace=ws,
    )


def build_workspace(formula: Formula, policy: ComparePolicy = ComparePolicy(), *, log_events: bool = False) -> Workspace:
    return Workspace(formula, log_events=log_events, lifo=policy.lifo)


def decide_reduced(
    formula: Formula,
    policy: ComparePolicy = ComparePolicy(),
    *,
    log_events: bool = False,
    on_run: RunHook | None = None,
    on_constructed: Callable[[Workspace], None] | None = None,
) -> Verdict:
    """Construct, saturate and compare a formula that needs no preprocessing."""
    ws = build_workspace(formula, policy, log_events=log_events)
    try:
        ws.construct()
    except UnsatDetected as exc:
        v = _verdict(ws, Outcome.UNSAT, [], None, exc.reason)
        return v
    if on_constructed is not None:
        on_constructed(ws)
    return execute_round(ws, policy, on_run=on_run)


def decide(
    formula: Formula,
    policy: ComparePolicy = ComparePolicy(),
    *,
    use_preprocess: bool = True,
    log_events: bool = False,
    on_run: RunHook | None = None,
    on_constructed: Callable[[Workspace], None] | None = None,
) -> Verdict:
    """Full pipeline: preprocess, construct, saturate, rounds.

    With ``use_preprocess=False`` only normalization is applied, so the
    sequences see pures, units and quantum clauses as they are.
    """
    from .solution import lift_assignment

    pre = preprocess(formula) if use_preprocess else normalize_only(formula)
    if pre.status is Status.SOLVED_UNSAT:
        return Verdict(outcome=Outcome.UNSAT, unsat_reason="preprocess-conflict", preprocess=pre)
    if pre.status is Status.SOLVED_SAT:
        assignment = lift_assignment(formula, pre.forced)
        return Verdict(outcome=Outcome.SOLVED_IN_PREPROCESS, assignment=assignment, preprocess=pre)
    v = decide_reduced(pre.reduced, policy, log_events=log_events, on_run=on_run, on_constructed=on_constructed)
    v.preprocess = pre
    return v
