"""Edge/vertex-sequence 3-SAT decision procedure with oracle-backed auditing."""

from seqsat.core import CellLayout, EmptyFormula, Formula, build_layout, negate, positions_of
from seqsat.dimacs import emit_dimacs, parse_dimacs
from seqsat.preprocess import preprocess
from seqsat.comparing import ComparePolicy, Verdict, decide
from seqsat.solution import Assignment, construct_solution, verify_assignment

__all__ = [
    "Assignment",
    "CellLayout",
    "ComparePolicy",
    "EmptyFormula",
    "Formula",
    "Verdict",
    "build_layout",
    "construct_solution",
    "decide",
    "emit_dimacs",
    "negate",
    "parse_dimacs",
    "positions_of",
    "preprocess",
    "verify_assignment",
]

__version__ = "0.1.0"
