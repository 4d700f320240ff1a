"""Instance generators: exhaustive small corpora and seeded random formulas."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterator

from .core import Formula


def all_clauses(num_vars: int, max_size: int = 3) -> list[tuple[int, ...]]:
    """Every sorted, quantum-free clause over variables 1..num_vars.

    Ordered by size, then lexicographically.
    """
    lits = sorted([v for v in range(1, num_vars + 1)] + [-v for v in range(1, num_vars + 1)])
    out = []
    for size in range(1, max_size + 1):
        for combo in combinations(lits, size):
            if len({abs(l) for l in combo}) == size:
                out.append(combo)
    return out


def gen_exhaustive(max_vars: int = 3, max_clauses: int = 4) -> Iterator[Formula]:
    """Every set of 1..max_clauses distinct clauses from :func:`all_clauses`."""
    pool = all_clauses(max_vars)
    for k in range(1, max_clauses + 1):
        for combo in combinations(pool, k):
            yield Formula(combo)


def exhaustive_count(max_vars: int, max_clauses: int) -> int:
    from math import comb

    n = len(all_clauses(max_vars))
    return sum(comb(n, k) for k in range(1, max_clauses + 1))


def has_pure_literal(clauses) -> bool:
    lits = {l for c in clauses for l in c}
    return any(-l not in lits for l in lits)


MODES = ("uniform", "clean", "adversarial")


def gen_random_3sat(
    num_vars: int,
    num_clauses: int,
    seed: int,
    mode: str = "uniform",
    *,
    quantum_prob: float = 0.1,
    max_attempts: int = 10_000,
) -> Formula:
    """Seeded random formula.

    ``uniform``: three distinct variables per clause, random signs.
    ``clean``: uniform, sorted literals, no duplicate clause and no pure
    literal (redrawn until it holds).
    ``adversarial``: clause sizes 1 to 3, repeated literals, duplicate clauses
    and quantum clauses (each clause is quantum with ``quantum_prob``).
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    if mode == "adversarial":
        return Formula(tuple(_adversarial_clause(rng, num_vars, quantum_prob) for _ in range(num_clauses)))
    if num_vars < 3:
        raise ValueError("3 distinct variables per clause need num_vars >= 3")

    def clause():
        vs = rng.sample(range(1, num_vars + 1), 3)
        return tuple(v if rng.random() < 0.5 else -v for v in vs)

    if mode == "uniform":
        return Formula(tuple(clause() for _ in range(num_clauses)))
    for _ in range(max_attempts):
        seen: set[tuple[int, ...]] = set()
        cls = []
        while len(cls) < num_clauses:
            c = tuple(sorted(clause()))
            if c not in seen:
                seen.add(c)
                cls.append(c)
        if not has_pure_literal(cls):
            return Formula(tuple(cls))
    raise ValueError(f"no pure-free formula with {num_vars} vars and {num_clauses} clauses found")


def _adversarial_clause(rng: random.Random, num_vars: int, quantum_prob: float) -> tuple[int, ...]:
    def lit():
        v = rng.randint(1, num_vars)
        return v if rng.random() < 0.5 else -v

    if rng.random() < quantum_prob:
        l = lit()
        extra = [lit()] if rng.random() < 0.5 else []
        body = [l, -l, *extra]
        rng.shuffle(body)
        return tuple(body)
    size = rng.choices((1, 2, 3), weights=(1, 3, 6))[0]
    body = [lit() for _ in range(size)]
    if size > 1 and rng.random() < 0.2:
        body[-1] = body[0]
    return tuple(body)
