"""Literals, clauses, formulas and the shared cell layout.

Literals are plain nonzero ints (``-v`` negates ``v``); a clause is a tuple
of literals and its 1-based index is its position in ``Formula.clauses``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class EmptyFormula(ValueError):
    """Raised when a layout is requested for a formula with no clauses."""


def negate(lit: int) -> int:
    if lit == 0:
        raise ValueError("0 is not a literal")
    return -lit


def check_literal(lit: int) -> int:
    if not isinstance(lit, int) or isinstance(lit, bool) or lit == 0:
        raise ValueError(f"invalid literal {lit!r}")
    return lit


@dataclass(frozen=True)
class Formula:
    """An ordered collection of clauses.

    Clauses are stored exactly as given; use
    :func:`seqsat.preprocess.normalize` for the sorted, deduplicated form.
    """

    clauses: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        cl = tuple(tuple(check_literal(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", cl)

    @classmethod
    def of(cls, clauses: Iterable[Iterable[int]]) -> "Formula":
        return cls(tuple(tuple(c) for c in clauses))

    @property
    def num_vars(self) -> int:
        """Number of distinct variables."""
        return len({abs(l) for c in self.clauses for l in c})

    @property
    def max_var(self) -> int:
        return max((abs(l) for c in self.clauses for l in c), default=0)

    @property
    def literals(self) -> set[int]:
        return {l for c in self.clauses for l in c}

    def __len__(self) -> int:
        return len(self.clauses)

    def clause(self, index: int) -> tuple[int, ...]:
        """Clause by 1-based index."""
        if index < 1:
            raise IndexError(index)
        return self.clauses[index - 1]


@dataclass(frozen=True)
class CellLayout:
    """Maps (clause, slot) occurrences onto global bit positions.

    Cell ``k`` (0-based) occupies ``[cell_offsets[k], cell_offsets[k+1])``.
    Every sequence built from the same formula shares one layout.
    """

    cell_offsets: tuple[int, ...]
    total_bits: int
    pos_literal: tuple[int, ...]
    pos_cell: tuple[int, ...]
    occ_index: dict[tuple[int, int], int] = field(compare=False, repr=False)
    _lit_positions: dict[int, tuple[int, ...]] = field(compare=False, repr=False)

    @property
    def num_cells(self) -> int:
        return len(self.cell_offsets)

    def cell_range(self, cell: int) -> range:
        """Positions of 0-based cell ``cell``."""
        start = self.cell_offsets[cell]
        end = self.cell_offsets[cell + 1] if cell + 1 < len(self.cell_offsets) else self.total_bits
        return range(start, end)

    def cell_mask(self, cell: int) -> int:
        r = self.cell_range(cell)
        return ((1 << len(r)) - 1) << r.start

    def positions(self, lit: int) -> tuple[int, ...]:
        return self._lit_positions.get(lit, ())

    def position_in_cell(self, cell: int, lit: int) -> int:
        for p in self.cell_range(cell):
            if self.pos_literal[p] == lit:
                return p
        raise KeyError(f"{lit} not in cell {cell}")

    def literal_mask(self, lit: int) -> int:
        m = 0
        for p in self._lit_positions.get(lit, ()):
            m |= 1 << p
        return m

    @property
    def full_mask(self) -> int:
        return (1 << self.total_bits) - 1


def build_layout(formula: Formula) -> CellLayout:
    """Deterministic layout: cells in clause order, slots in literal order."""
    if not formula.clauses:
        raise EmptyFormula("formula has no clauses")
    offsets: list[int] = []
    pos_literal: list[int] = []
    pos_cell: list[int] = []
    occ: dict[tuple[int, int], int] = {}
    lit_pos: dict[int, list[int]] = {}
    for ci, clause in enumerate(formula.clauses):
        offsets.append(len(pos_literal))
        for slot, lit in enumerate(clause):
            p = len(pos_literal)
            occ[(ci + 1, slot)] = p
            pos_literal.append(lit)
            pos_cell.append(ci)
            lit_pos.setdefault(lit, []).append(p)
    return CellLayout(
        cell_offsets=tuple(offsets),
        total_bits=len(pos_literal),
        pos_literal=tuple(pos_literal),
        pos_cell=tuple(pos_cell),
        occ_index=occ,
        _lit_positions={k: tuple(v) for k, v in lit_pos.items()},
    )


def positions_of(layout: CellLayout, formula: Formula, lit: int) -> list[int]:
    """Ascending global positions of every occurrence of ``lit``."""
    check_literal(lit)
    return list(layout.positions(lit))


def iter_bits(mask: int) -> Iterable[int]:
    """Set bit indices of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def format_clauses(clauses: Sequence[Sequence[int]]) -> str:
    return " ".join("(" + ",".join(map(str, c)) + ")" for c in clauses)
