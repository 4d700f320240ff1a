"""Differential runs against the oracles, invariant audits and
counterexample minimization.

A corpus spec (JSON) names the instances and the checks; every instance is
checked independently and the records are folded into a :class:`DiffReport`.
Findings are split into violations of asserted properties (soundness,
refinement safety, termination accounting, confluence, oracle agreement)
and measured claims (missed UNSAT, unwitnessed 1 bits, stalled extraction).
"""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .comparing import ComparePolicy, Mode, Outcome, Verdict, decide, pairs_per_run
from .core import EmptyFormula, Formula
from .dimacs import emit_dimacs, parse_dimacs
from .generators import MODES, gen_exhaustive, gen_random_3sat
from .oracle import TooLarge, brute_force_sat, dpll
from .sequences import Workspace
from .solution import SolveStatus, solve, verify_assignment

FINDINGS_ENV = "SEQSAT_FINDINGS_DIR"

# kinds that make an audit fail
SOUNDNESS_KINDS = ("false-unsat", "witness-invalid", "survival")
INVARIANT_KINDS = ("termination", "confluence", "oracle-disagreement")
# kinds that are measured and reported only
CLAIM_KINDS = ("missed-unsat", "coverage", "stalled")
ALL_KINDS = SOUNDNESS_KINDS + INVARIANT_KINDS + CLAIM_KINDS


class SpecError(ValueError):
    pass


class FlakyPredicate(RuntimeError):
    """The failing predicate could not be re-established."""


# ---------------------------------------------------------------- corpus spec


def policy_from_dict(d: dict) -> ComparePolicy:
    unknown = set(d) - {"mode", "phi", "worklist"}
    if unknown:
        raise SpecError(f"unknown policy keys {sorted(unknown)}")
    try:
        mode = Mode(d.get("mode", Mode.REPEAT_UNTIL_STABLE.value))
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    worklist = d.get("worklist", "fifo")
    if worklist not in ("fifo", "lifo"):
        raise SpecError(f"worklist must be fifo or lifo, not {worklist!r}")
    phi = d.get("phi", True)
    if not isinstance(phi, bool):
        raise SpecError("phi must be a boolean")
    return ComparePolicy(mode=mode, phi_enabled=phi, lifo=worklist == "lifo")


def _int_range(value, name: str) -> tuple[int, int]:
    if isinstance(value, int):
        return value, value
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, int) for v in value)
        and 1 <= value[0] <= value[1]
    ):
        return int(value[0]), int(value[1])
    raise SpecError(f"{name} must be a positive int or a [low, high] pair")


@dataclass(frozen=True)
class Stratum:
    """``count`` seeded random formulas; sizes drawn uniformly from the ranges."""

    count: int
    mode: str = "uniform"
    vars: tuple[int, int] = (3, 12)
    clauses: tuple[int, int] = (1, 40)
    seed: int = 0
    quantum_prob: float = 0.1

    @classmethod
    def from_dict(cls, d: dict) -> "Stratum":
        unknown = set(d) - {"count", "mode", "vars", "clauses", "seed", "quantum_prob"}
        if unknown:
            raise SpecError(f"unknown stratum keys {sorted(unknown)}")
        if not isinstance(d.get("count"), int) or d["count"] < 0:
            raise SpecError("stratum count must be a non-negative int")
        mode = d.get("mode", "uniform")
        if mode not in MODES:
            raise SpecError(f"stratum mode must be one of {MODES}")
        st = cls(
            count=d["count"],
            mode=mode,
            vars=_int_range(d.get("vars", [3, 12]), "vars"),
            clauses=_int_range(d.get("clauses", [1, 40]), "clauses"),
            seed=int(d.get("seed", 0)),
            quantum_prob=float(d.get("quantum_prob", 0.1)),
        )
        if mode != "adversarial" and st.vars[0] < 3:
            raise SpecError("uniform and clean strata need at least 3 variables")
        return st

    def instances(self) -> Iterator[tuple[str, Formula]]:
        for i in range(self.count):
            seed = self.seed + i
            rng = random.Random(seed)
            for _ in range(100):
                nv = rng.randint(*self.vars)
                nc = rng.randint(*self.clauses)
                try:
                    f = gen_random_3sat(nv, nc, seed, self.mode, quantum_prob=self.quantum_prob)
                except ValueError:
                    continue  # clean mode found no pure-free formula at this size
                yield f"{self.mode}-s{seed}-v{nv}-c{nc}", f
                break


@dataclass
class CorpusSpec:
    id: str
    exhaustive: tuple[int, int] | None = None
    random: list[Stratum] = field(default_factory=list)
    policy: ComparePolicy = ComparePolicy()
    preprocess: bool = True
    solve: bool = True
    survival: bool = True
    coverage: bool = True
    confluence: bool = False
    minimize: bool = True
    max_solutions: int = 20000
    findings_dir: str | None = None
    limit: int | None = None
    stride: int = 1

    _KEYS = {
        "schema", "id", "exhaustive", "random", "policy", "preprocess", "solve", "survival",
        "coverage", "confluence", "minimize", "max_solutions", "findings_dir", "limit", "stride",
    }

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusSpec":
        if not isinstance(d, dict):
            raise SpecError("corpus spec must be a JSON object")
        unknown = set(d) - cls._KEYS
        if unknown:
            raise SpecError(f"unknown spec keys {sorted(unknown)}")
        if d.get("schema", 1) != 1:
            raise SpecError(f"unsupported spec schema {d.get('schema')!r}")
        if not isinstance(d.get("id"), str) or not d["id"]:
            raise SpecError("spec needs a non-empty string id")
        ex = d.get("exhaustive")
        if ex is not None:
            if not isinstance(ex, dict) or set(ex) - {"max_vars", "max_clauses"}:
                raise SpecError("exhaustive must be {max_vars, max_clauses}")
            ex = (ex.get("max_vars", 3), ex.get("max_clauses", 4))
            if not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in ex):
                raise SpecError("exhaustive bounds must be positive ints")
        strata = d.get("random", [])
        if not isinstance(strata, list):
            raise SpecError("random must be a list of strata")
        bools = {}
        for key in ("preprocess", "solve", "survival", "coverage", "confluence", "minimize"):
            if key in d:
                if not isinstance(d[key], bool):
                    raise SpecError(f"{key} must be a boolean")
                bools[key] = d[key]
        limit = d.get("limit")
        if limit is not None and (not isinstance(limit, int) or limit < 0):
            raise SpecError("limit must be a non-negative int")
        stride = d.get("stride", 1)
        if not isinstance(stride, int) or stride < 1:
            raise SpecError("stride must be a positive int")
        return cls(
            id=d["id"],
            exhaustive=ex,
            random=[Stratum.from_dict(s) for s in strata],
            policy=policy_from_dict(d.get("policy", {})),
            max_solutions=int(d.get("max_solutions", 20000)),
            findings_dir=d.get("findings_dir"),
            limit=limit,
            stride=stride,
            **bools,
        )

    @classmethod
    def load(cls, path) -> "CorpusSpec":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise SpecError(f"cannot read spec: {exc}") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"spec is not valid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        d = {
            "schema": 1,
            "id": self.id,
            "random": [
                {**asdict(s), "vars": list(s.vars), "clauses": list(s.clauses)} for s in self.random
            ],
            "policy": self.policy.describe(),
            "preprocess": self.preprocess,
            "solve": self.solve,
            "survival": self.survival,
            "coverage": self.coverage,
            "confluence": self.confluence,
            "minimize": self.minimize,
            "max_solutions": self.max_solutions,
            "stride": self.stride,
        }
        if self.exhaustive is not None:
            d["exhaustive"] = {"max_vars": self.exhaustive[0], "max_clauses": self.exhaustive[1]}
        if self.findings_dir is not None:
            d["findings_dir"] = self.findings_dir
        if self.limit is not None:
            d["limit"] = self.limit
        return d

    def instances(self) -> Iterator[tuple[str, Formula]]:
        def raw():
            if self.exhaustive is not None:
                for i, f in enumerate(gen_exhaustive(*self.exhaustive)):
                    yield f"exh{self.exhaustive[0]}x{self.exhaustive[1]}-{i}", f
            for s in self.random:
                yield from s.instances()

        n = 0
        for i, item in enumerate(raw()):
            if i % self.stride:
                continue
            if self.limit is not None and n >= self.limit:
                return
            n += 1
            yield item


BUILTIN_SPECS = {
    "exhaustive": {"id": "exhaustive-3x4", "exhaustive": {"max_vars": 3, "max_clauses": 4}},
    "nightly": {"id": "exhaustive-4x5", "exhaustive": {"max_vars": 4, "max_clauses": 5}},
    # most draws reduce to a handful of cells; the last stratum covers the
    # full size range with fewer, slower instances. Solution enumeration for
    # the per-run audits explodes past ~20 clauses, so this sweep checks
    # soundness and witnesses only.
    "random-sweep": {
        "id": "random-sweep",
        "survival": False,
        "coverage": False,
        "random": [
            {"count": 6000, "mode": "uniform", "vars": [3, 12], "clauses": [1, 12], "seed": 100000},
            {"count": 3800, "mode": "adversarial", "vars": [1, 12], "clauses": [1, 40], "seed": 200000},
            {"count": 200, "mode": "uniform", "vars": [3, 12], "clauses": [13, 40], "seed": 300000},
        ],
    },
}


def resolve_spec(name_or_path: str) -> CorpusSpec:
    """A builtin spec name or a path to a JSON spec."""
    if name_or_path in BUILTIN_SPECS:
        return CorpusSpec.from_dict(BUILTIN_SPECS[name_or_path])
    return CorpusSpec.load(name_or_path)


# ---------------------------------------------------------------- per-instance checks


@dataclass
class Finding:
    kind: str
    instance: str
    detail: str
    dimacs: str
    minimized: str | None = None
    path: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class InstanceRecord:
    name: str
    ours: str  # "sat-claimed" | "sat-preprocess" | "unsat"
    oracle: str  # "sat" | "unsat"
    cells: int = 0
    runs: int = 0
    intersections: int = 0
    findings: list[Finding] = field(default_factory=list)
    survival_checks: int = 0
    survival_skipped: bool = False
    cov_bits: int = 0
    cov_unwitnessed: int = 0
    cov_audited: bool = False
    solve_status: str | None = None
    seconds: float = 0.0

    @property
    def agrees(self) -> bool:
        return (self.ours != "unsat") == (self.oracle == "sat")


def _label(v: Verdict) -> str:
    if v.outcome is Outcome.UNSAT:
        return "unsat"
    if v.outcome is Outcome.SOLVED_IN_PREPROCESS:
        return "sat-preprocess"
    return "sat-claimed"


def solution_positions(ws: Workspace, solutions) -> np.ndarray:
    """(solutions x cells) array of chosen layout positions."""
    lay = ws.layout
    out = np.zeros((len(solutions), lay.num_cells), dtype=np.int64)
    for s, sel in enumerate(solutions):
        for k, lit in enumerate(sel):
            out[s, k] = lay.position_in_cell(k, lit)
    return out


@dataclass
class Witnesses:
    """Per edge and per vertex, the positions used by solutions through it.

    ``edge_need[e]`` is the union of the solutions choosing both endpoints of
    edge e (all False when none does); ``vertex_need`` likewise per position.
    """

    edge_need: np.ndarray
    edge_used: np.ndarray
    vertex_need: np.ndarray
    vertex_used: np.ndarray

    @classmethod
    def build(cls, ws: Workspace, sol_positions: np.ndarray) -> "Witnesses":
        npos = ws.layout.total_bits
        S = sol_positions.shape[0]
        chosen = np.zeros((S, npos), dtype=bool)
        if S:
            chosen[np.repeat(np.arange(S), sol_positions.shape[1]), sol_positions.ravel()] = True
        vertex_used = chosen.any(axis=0)
        vertex_need = np.zeros((npos, npos), dtype=bool)
        for p in np.flatnonzero(vertex_used):
            vertex_need[p] = chosen[chosen[:, p]].any(axis=0)
        E = ws.num_edges
        edge_need = np.zeros((E, npos), dtype=bool)
        edge_used = np.zeros(E, dtype=bool)
        for e in range(E):
            pa, pb = ws.edge_endpoints(e)
            if not (vertex_used[pa] and vertex_used[pb]):
                continue
            rows = chosen[:, pa] & chosen[:, pb]
            if rows.any():
                edge_used[e] = True
                edge_need[e] = chosen[rows].any(axis=0)
        return cls(edge_need, edge_used, vertex_need, vertex_used)


def survival_problems(ws: Workspace, wit: Witnesses, stage: str) -> list[str]:
    """Every edge and vertex between chosen positions of a solution must be
    alive with every chosen position of that solution set."""
    out = []
    emat = ws.edge_matrix()
    ealive = ws.st.ealive
    for e in np.flatnonzero(wit.edge_used):
        if not ealive[e]:
            out.append(f"{stage}: edge {ws.edge(int(e)).label} on a solution is dead")
        elif (wit.edge_need[e] & ~emat[e]).any():
            out.append(f"{stage}: edge {ws.edge(int(e)).label} on a solution lost a chosen bit")
        if len(out) >= 5:
            return out
    vmat = ws.vertex_matrix()
    valive = ws.vertex_alive()
    for p in np.flatnonzero(wit.vertex_used):
        if not valive[p]:
            out.append(f"{stage}: vertex {p} on a solution is dead")
        elif (wit.vertex_need[p] & ~vmat[p]).any():
            out.append(f"{stage}: vertex {p} on a solution lost a chosen bit")
        if len(out) >= 5:
            break
    return out


def coverage_audit(ws: Workspace, wit: Witnesses) -> tuple[int, int, list[str]]:
    """Every 1 bit of a live edge I_{x,y} should lie on a solution through x and y.

    Returns (bits checked, bits without a witnessing solution, examples).
    """
    lay = ws.layout
    emat = ws.edge_matrix()
    live = ws.st.ealive
    lost = emat & ~wit.edge_need & live[:, None]
    checked = int(emat[live].sum())
    missing = int(lost.sum())
    examples = []
    for e in np.flatnonzero(lost.any(axis=1))[:5]:
        pa, pb = ws.edge_endpoints(int(e))
        zs = [lay.pos_literal[p] for p in np.flatnonzero(lost[e])]
        examples.append(
            f"edge ({lay.pos_literal[pa]}@C{lay.pos_cell[pa] + 1},"
            f"{lay.pos_literal[pb]}@C{lay.pos_cell[pb] + 1}) keeps {zs}"
        )
    return checked, missing, examples


_POLICY_VARIANTS = [
    (Mode.REPEAT_UNTIL_STABLE, False),
    (Mode.SINGLE_PASS, False),
    (Mode.REPEAT_UNTIL_STABLE, True),
    (Mode.SINGLE_PASS, True),
]


def confluence_problems(formula: Formula, spec: CorpusSpec) -> list[str]:
    results = []
    for mode, lifo in _POLICY_VARIANTS:
        pol = replace(spec.policy, mode=mode, lifo=lifo)
        v = decide(formula, pol, use_preprocess=spec.preprocess)
        snap = v.workspace.snapshot() if v.workspace is not None and v.outcome is not Outcome.UNSAT else None
        results.append((pol.describe(), v.outcome, snap))
    base_desc, base_out, base_snap = results[0]
    out = []
    for desc, outcome, snap in results[1:]:
        if outcome is not base_out:
            out.append(f"{desc}: {outcome.value} vs {base_desc}: {base_out.value}")
        elif base_out is not Outcome.UNSAT and snap != base_snap:
            out.append(f"{desc}: final bit matrices differ from {base_desc}")
    return out


def check_instance(name: str, formula: Formula, spec: CorpusSpec) -> InstanceRecord:
    """Run every check the spec enables on one formula."""
    t0 = time.perf_counter()
    findings: list[Finding] = []
    payload = emit_dimacs(formula)

    def find(kind: str, detail: str) -> None:
        findings.append(Finding(kind, name, detail, payload))

    bf = brute_force_sat(formula)
    dp = dpll(formula)
    if bf.sat != dp.sat:
        find("oracle-disagreement", f"brute force {bf.status}, DPLL {'SAT' if dp.sat else 'UNSAT'}")
    oracle_sat = bf.sat
    rec = InstanceRecord(name=name, ours="?", oracle="sat" if oracle_sat else "unsat")

    state: dict = {}

    def witnesses_for(ws: Workspace) -> Witnesses | None:
        if "wit" not in state:
            try:
                res = brute_force_sat(ws.formula, collect=True, max_solutions=spec.max_solutions)
                state["wit"] = Witnesses.build(ws, solution_positions(ws, res.solutions))
            except TooLarge:
                state["wit"] = None
        return state["wit"]

    survival_msgs: list[str] = []

    def survival_check(ws: Workspace, stage: str) -> None:
        if not (spec.survival and oracle_sat):
            return
        wit = witnesses_for(ws)
        if wit is None:
            rec.survival_skipped = True
            return
        rec.survival_checks += 1
        if not survival_msgs:
            survival_msgs.extend(survival_problems(ws, wit, stage))

    verdict = decide(
        formula,
        spec.policy,
        use_preprocess=spec.preprocess,
        on_constructed=lambda ws: survival_check(ws, "construction"),
        on_run=lambda ws, stats: survival_check(ws, f"run {stats.run_index}"),
    )
    rec.ours = _label(verdict)
    rec.cells = verdict.num_cells
    rec.runs = verdict.runs
    rec.intersections = int(verdict.counters.get("intersections", 0)) if verdict.counters else 0
    if survival_msgs:
        find("survival", "; ".join(survival_msgs[:5]))

    if verdict.outcome is Outcome.UNSAT and oracle_sat:
        find("false-unsat", f"refuted ({verdict.unsat_reason}) but the oracle has a witness")
    if verdict.outcome is not Outcome.UNSAT and not oracle_sat:
        find("missed-unsat", f"{verdict.outcome.value} on an unsatisfiable formula")
    if verdict.assignment is not None:
        check = verify_assignment(formula, verdict.assignment)
        if not check.ok:
            find("witness-invalid", "preprocessing witness: " + "; ".join(check.violations))

    # termination accounting
    c = verdict.num_cells
    runs = verdict.rounds
    if runs:
        bound = (verdict.live_bits_at_round_start or 0) + 1
        if len(runs) > bound:
            find("termination", f"{len(runs)} runs exceed live bits + 1 = {bound}")
        complete = runs if verdict.outcome is not Outcome.UNSAT else runs[:-1]
        want = pairs_per_run(c)
        for r in complete:
            if r.sset_pairs_compared != want:
                find("termination", f"run {r.run_index} compared {r.sset_pairs_compared} pairs, expected {want}")
                break

    if spec.coverage and verdict.outcome is Outcome.EQUIVALENT:
        ws = verdict.workspace
        wit = witnesses_for(ws)
        if wit is not None:
            checked, missing, examples = coverage_audit(ws, wit)
            rec.cov_audited = True
            rec.cov_bits = checked
            rec.cov_unwitnessed = missing
            if missing:
                find("coverage", f"{missing}/{checked} live bits without a witnessing solution: " + "; ".join(examples))

    if spec.solve and verdict.outcome is Outcome.EQUIVALENT:
        report = solve(formula, spec.policy)
        rec.solve_status = report.status.value
        if report.status is SolveStatus.SAT:
            check = verify_assignment(formula, report.assignment)
            if not check.ok:
                find("witness-invalid", "solve witness: " + "; ".join(check.violations))
            if not oracle_sat:
                find("witness-invalid", "solve produced a witness for an unsatisfiable formula")
        elif report.status is SolveStatus.UNSAT and oracle_sat:
            find("false-unsat", "solve refuted a satisfiable formula")
        elif report.status is SolveStatus.STALLED and oracle_sat:
            find("stalled", report.reason or "stalled")

    if spec.confluence:
        msgs = confluence_problems(formula, spec)
        if msgs:
            find("confluence", "; ".join(msgs))

    rec.findings = findings
    rec.seconds = time.perf_counter() - t0
    return rec


def _check_args(args) -> InstanceRecord:
    return check_instance(*args)


# ---------------------------------------------------------------- minimization


def minimize_counterexample(
    formula: Formula,
    predicate: Callable[[Formula], bool],
    *,
    max_checks: int = 5000,
) -> Formula:
    """Greedy clause removal, then literal removal, to a local minimum.

    The predicate must hold on ``formula`` twice in a row; otherwise, or when
    it stops holding on the final result, :class:`FlakyPredicate` is raised.
    """
    checks = 0

    def holds(clauses) -> bool:
        nonlocal checks
        if not clauses or any(len(c) == 0 for c in clauses):
            return False
        checks += 1
        try:
            return bool(predicate(Formula(tuple(clauses))))
        except (EmptyFormula, ValueError):
            return False

    start = [tuple(c) for c in formula.clauses]
    first, second = holds(start), holds(start)
    if not first:
        raise FlakyPredicate("predicate does not hold on the input formula")
    if not second:
        raise FlakyPredicate("predicate held once and then failed on the same input")
    cur = start
    changed = True
    while changed and checks < max_checks:
        changed = False
        i = 0
        while i < len(cur) and checks < max_checks:
            cand = cur[:i] + cur[i + 1:]
            if holds(cand):
                cur = cand
                changed = True
            else:
                i += 1
        for i in range(len(cur)):
            j = 0
            while j < len(cur[i]) and len(cur[i]) > 1 and checks < max_checks:
                clause = cur[i][:j] + cur[i][j + 1:]
                cand = cur[:i] + [clause] + cur[i + 1:]
                if holds(cand):
                    cur = cand
                    changed = True
                else:
                    j += 1
    if not holds(cur):
        raise FlakyPredicate("minimized formula no longer satisfies the predicate")
    return Formula(tuple(cur))


def finding_predicate(kind: str, spec: CorpusSpec) -> Callable[[Formula], bool]:
    """Re-check one finding kind under the same policy and flags."""
    focused = replace(
        spec,
        solve=kind in ("stalled", "witness-invalid", "false-unsat"),
        survival=kind == "survival",
        coverage=kind == "coverage",
        confluence=kind == "confluence",
        minimize=False,
    )

    def pred(f: Formula) -> bool:
        if f.num_vars > 26:
            return False
        rec = check_instance("candidate", f, focused)
        return any(x.kind == kind for x in rec.findings)

    return pred


def findings_dir(spec: CorpusSpec | None = None) -> Path:
    if spec is not None and spec.findings_dir:
        return Path(spec.findings_dir)
    return Path(os.environ.get(FINDINGS_ENV, "findings"))


def write_finding(finding: Finding, directory: Path, corpus_id: str, policy: ComparePolicy) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in finding.instance)
    path = directory / f"{corpus_id}-{finding.kind}-{safe}.cnf"
    text = finding.minimized or finding.dimacs
    comments = [
        f"kind: {finding.kind}",
        f"instance: {finding.instance}",
        f"policy: {json.dumps(policy.describe())}",
        f"detail: {finding.detail[:500]}",
    ]
    if finding.minimized:
        comments.append("original formula:")
        comments.extend("  " + line for line in finding.dimacs.splitlines())
    body = "".join(f"c {line}\n" for line in comments) + text
    path.write_text(body)
    return path


# ---------------------------------------------------------------- report


@dataclass
class DiffReport:
    corpus_id: str
    policy: dict
    instances: int = 0
    agreements: int = 0
    oracle_sat: int = 0
    oracle_unsat: int = 0
    outcomes: dict = field(default_factory=dict)
    findings: list[Finding] = field(default_factory=list)
    survival_instances: int = 0
    survival_checkpoints: int = 0
    survival_skipped: int = 0
    cov_instances: int = 0
    cov_bits: int = 0
    cov_unwitnessed: int = 0
    solve_counts: dict = field(default_factory=dict)
    max_cells: int = 0
    seconds: float = 0.0

    def add(self, rec: InstanceRecord) -> None:
        self.instances += 1
        self.agreements += rec.agrees
        if rec.oracle == "sat":
            self.oracle_sat += 1
        else:
            self.oracle_unsat += 1
        self.outcomes[rec.ours] = self.outcomes.get(rec.ours, 0) + 1
        self.findings.extend(rec.findings)
        if rec.survival_checks:
            self.survival_instances += 1
            self.survival_checkpoints += rec.survival_checks
        self.survival_skipped += rec.survival_skipped
        if rec.cov_audited:
            self.cov_instances += 1
            self.cov_bits += rec.cov_bits
            self.cov_unwitnessed += rec.cov_unwitnessed
        if rec.solve_status:
            self.solve_counts[rec.solve_status] = self.solve_counts.get(rec.solve_status, 0) + 1
        self.max_cells = max(self.max_cells, rec.cells)

    def of_kind(self, *kinds: str) -> list[Finding]:
        return [f for f in self.findings if f.kind in kinds]

    @property
    def disagreements(self) -> list[Finding]:
        return self.of_kind("false-unsat", "missed-unsat")

    @property
    def soundness_violations(self) -> list[Finding]:
        return self.of_kind(*SOUNDNESS_KINDS)

    @property
    def survival_violations(self) -> list[Finding]:
        return self.of_kind("survival")

    @property
    def completeness_violations(self) -> list[Finding]:
        return self.of_kind("coverage")

    @property
    def invariant_violations(self) -> list[Finding]:
        return self.of_kind(*INVARIANT_KINDS)

    @property
    def ok(self) -> bool:
        """No asserted property failed; measured claims do not count."""
        return not self.soundness_violations and not self.invariant_violations

    @property
    def agreement_rate(self) -> float:
        return self.agreements / self.instances if self.instances else 1.0

    @property
    def cov_rate(self) -> float:
        return 1 - self.cov_unwitnessed / self.cov_bits if self.cov_bits else 1.0

    def to_dict(self) -> dict:
        counts = {k: len(self.of_kind(k)) for k in ALL_KINDS}
        return {
            "schema": 1,
            "corpus_id": self.corpus_id,
            "policy": self.policy,
            "instances": self.instances,
            "agreements": self.agreements,
            "agreement_rate": self.agreement_rate,
            "oracle": {"sat": self.oracle_sat, "unsat": self.oracle_unsat},
            "outcomes": self.outcomes,
            "finding_counts": counts,
            "soundness_ok": self.ok,
            "survival": {
                "instances": self.survival_instances,
                "checkpoints": self.survival_checkpoints,
                "skipped": self.survival_skipped,
                "violations": counts["survival"],
            },
            "coverage": {
                "instances": self.cov_instances,
                "bits_checked": self.cov_bits,
                "bits_unwitnessed": self.cov_unwitnessed,
                "agreement_rate": self.cov_rate,
            },
            "solve": self.solve_counts,
            "max_cells": self.max_cells,
            "seconds": round(self.seconds, 3),
            "disagreements": [f.to_dict() for f in self.disagreements],
            "findings": [f.to_dict() for f in self.findings],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def differential_run(
    spec: CorpusSpec,
    policy: ComparePolicy | None = None,
    *,
    workers: int = 1,
    progress: Callable[[InstanceRecord], None] | None = None,
    max_minimize: int = 10,
) -> DiffReport:
    """Check every instance of the corpus and minimize the first findings.

    Minimized counterexamples are written as DIMACS into the findings
    directory (``findings_dir`` in the spec, else ``$SEQSAT_FINDINGS_DIR``,
    else ``./findings``).
    """
    if policy is not None:
        spec = replace(spec, policy=policy)
    t0 = time.perf_counter()
    report = DiffReport(corpus_id=spec.id, policy=spec.policy.describe())
    items = ((name, f, spec) for name, f in spec.instances())
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            records: Iterable[InstanceRecord] = pool.map(_check_args, items, chunksize=32)
            for rec in records:
                report.add(rec)
                if progress:
                    progress(rec)
    else:
        for args in items:
            rec = _check_args(args)
            report.add(rec)
            if progress:
                progress(rec)
    if report.findings:
        out_dir = findings_dir(spec)
        minimized_per_kind: dict[str, int] = {}
        for finding in report.findings:
            n = minimized_per_kind.get(finding.kind, 0)
            if spec.minimize and n < max_minimize:
                minimized_per_kind[finding.kind] = n + 1
                original, _ = parse_dimacs(finding.dimacs)
                try:
                    small = minimize_counterexample(original, finding_predicate(finding.kind, spec))
                    finding.minimized = emit_dimacs(small)
                except FlakyPredicate as exc:
                    finding.detail += f" [not minimized: {exc}]"
            finding.path = str(write_finding(finding, out_dir, spec.id, spec.policy))
    report.seconds = time.perf_counter() - t0
    return report
