import csv
import io
import math

import pytest

from seqsat.core import Formula
from seqsat.generators import has_pure_literal
from seqsat.preprocess import Status, preprocess
from seqsat.stats import (
    CSV_FIELDS,
    LCR_STEPS,
    M_CONSTANT,
    fit_exponent,
    scaling_instance,
    scaling_sweep,
    to_csv,
    work_report,
)

FIVE = Formula(((1, 2, 3), (-1, -2, 3), (1, -2, -3), (-1, 2, -3), (1, 2, -3)))


def test_constant():
    assert LCR_STEPS == 3
    assert M_CONSTANT == 648 + 324 + 3


def test_work_report_five_cells():
    r = work_report(FIVE, name="five")
    assert r.c == 5 and r.n == 15
    assert r.pairs_per_run == 45
    assert r.runs >= 1 and r.intersections > 0
    assert r.within_bound and r.bound == M_CONSTANT * 15**8
    assert math.isclose(r.pairs_over_c4, 45 / 625)
    d = r.to_dict()
    assert d["schema"] == 1 and d["within_bound"]


def test_preprocess_solved_report(five_clause):
    r = work_report(five_clause)
    assert r.outcome == "solved-in-preprocess"
    assert r.n == 0 and r.pairs_per_run == 0 and r.within_bound


def test_csv():
    text = to_csv([work_report(FIVE, name="a"), work_report(FIVE, name="b", use_preprocess=False)])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["name"] for r in rows] == ["a", "b"]
    assert tuple(rows[0]) == CSV_FIELDS
    assert rows[0]["pairs_per_run"] == "45"


def test_fit_exponent_recovers_power_law():
    ns = [10, 20, 40, 80]
    slope, _ = fit_exponent(ns, [3 * n**4 for n in ns])
    assert slope == pytest.approx(4.0)


@pytest.mark.parametrize("n", [30, 60, 120])
def test_scaling_instances_keep_all_positions(n):
    f = scaling_instance(n, 1)
    assert sum(len(c) for c in f.clauses) == n
    assert not has_pure_literal(f.clauses)
    pre = preprocess(f)
    assert pre.status is Status.CONTINUE
    assert sum(len(c) for c in pre.reduced.clauses) == n
    with pytest.raises(ValueError):
        scaling_instance(n + 1, 1)


def test_small_scaling_sweep():
    rep = scaling_sweep((15, 30))
    assert [r.n for r in rep.reports] == [15, 30]
    assert rep.within_bound
    assert not math.isnan(rep.exponent)
    assert rep.to_dict()["fitted_exponent"] == rep.exponent
