"""Work accounting and scaling sweeps.

``n`` counts literal positions after preprocessing and ``c`` counts cells,
so c <= n <= 3c. The ceiling every measured intersection count is compared
with is M * n**8, where M = 648 + 324 + LCR_STEPS.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .comparing import ComparePolicy, Outcome, decide, pairs_per_run
from .core import Formula
from .generators import gen_random_3sat

# steps charged for LCR compliance of one sequence, per position: one scan
# for loner cells, one look-up of the negation, one K-rule check
LCR_STEPS = 3
M_CONSTANT = 648 + 324 + LCR_STEPS

CSV_FIELDS = (
    "name", "vars", "clauses_in", "c", "n", "outcome", "runs", "pairs_per_run",
    "determinations", "intersections", "unions", "bit_changes", "seconds",
    "runs_over_n3", "pairs_over_c4", "intersections_over_bound",
)


@dataclass
class WorkReport:
    name: str
    vars: int
    clauses_in: int
    c: int
    n: int
    outcome: str
    runs: int
    pairs_per_run: int
    determinations: int
    intersections: int
    unions: int
    bit_changes: int
    seconds: float
    M: int = M_CONSTANT

    @property
    def bound(self) -> int:
        return self.M * self.n**8

    @property
    def within_bound(self) -> bool:
        return self.intersections < self.bound or self.n == 0

    @property
    def runs_over_n3(self) -> float:
        return self.runs / self.n**3 if self.n else 0.0

    @property
    def pairs_over_c4(self) -> float:
        return self.pairs_per_run / self.c**4 if self.c else 0.0

    def row(self) -> dict:
        d = {k: getattr(self, k) for k in CSV_FIELDS if hasattr(self, k)}
        d["seconds"] = round(self.seconds, 4)
        d["intersections_over_bound"] = self.intersections / self.bound if self.n else 0.0
        return d

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(
            schema=1,
            bound=self.bound,
            within_bound=self.within_bound,
            runs_over_n3=self.runs_over_n3,
            pairs_over_c4=self.pairs_over_c4,
        )
        return d


def work_report(
    formula: Formula,
    policy: ComparePolicy = ComparePolicy(),
    *,
    name: str = "",
    use_preprocess: bool = True,
) -> WorkReport:
    t0 = time.perf_counter()
    v = decide(formula, policy, use_preprocess=use_preprocess)
    dt = time.perf_counter() - t0
    ctr = v.counters or {}
    return WorkReport(
        name=name,
        vars=formula.num_vars,
        clauses_in=len(formula.clauses),
        c=v.num_cells,
        n=v.num_positions,
        outcome=v.outcome.value,
        runs=v.runs,
        pairs_per_run=pairs_per_run(v.num_cells) if v.outcome is not Outcome.SOLVED_IN_PREPROCESS else 0,
        determinations=int(ctr.get("determinations", 0)),
        intersections=int(ctr.get("intersections", 0)),
        unions=int(ctr.get("unions", 0)),
        bit_changes=int(ctr.get("bit_changes", 0)),
        seconds=dt,
    )


def to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def fit_exponent(ns, counts) -> tuple[float, float]:
    """Least-squares slope and intercept of log(count) against log(n)."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    return float(slope), float(intercept)


def scaling_instance(n: int, seed: int) -> Formula:
    """Clean 3-literal formula with n/3 clauses over roughly n/9 variables.

    No pure literals and no units, so preprocessing keeps all n positions.
    """
    if n % 3:
        raise ValueError("n must be a multiple of 3")
    c = n // 3
    num_vars = max(5, round(c / 3))
    return gen_random_3sat(num_vars, c, seed, "clean")


@dataclass
class ScalingReport:
    sizes: list[int]
    reports: list[WorkReport] = field(default_factory=list)
    exponent: float = math.nan
    intercept: float = math.nan
    M: int = M_CONSTANT

    @property
    def within_bound(self) -> bool:
        return all(r.within_bound for r in self.reports)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "sizes": self.sizes,
            "M": self.M,
            "fitted_exponent": self.exponent,
            "fitted_intercept": self.intercept,
            "within_bound": self.within_bound,
            "instances": [r.to_dict() for r in self.reports],
        }


def scaling_sweep(
    sizes=(30, 60, 120, 240),
    *,
    seed: int = 1,
    instances: int = 1,
    policy: ComparePolicy = ComparePolicy(),
    progress=None,
) -> ScalingReport:
    """Decide clean random formulas of each size and fit intersections ~ n^k."""
    rep = ScalingReport(sizes=list(sizes))
    for n in sizes:
        for i in range(instances):
            f = scaling_instance(n, seed + i)
            r = work_report(f, policy, name=f"scaling-n{n}-s{seed + i}")
            rep.reports.append(r)
            if progress:
                progress(r)
    usable = [r for r in rep.reports if r.intersections > 0 and r.n > 0]
    if len({r.n for r in usable}) >= 2:
        rep.exponent, rep.intercept = fit_exponent([r.n for r in usable], [r.intersections for r in usable])
    return rep
