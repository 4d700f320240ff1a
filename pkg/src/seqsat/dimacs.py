"""DIMACS CNF reading and writing (3-SAT subset)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Union

from seqsat.core import Formula


class DimacsError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class MalformedHeader(DimacsError):
    pass


class ClauseTooLarge(DimacsError):
    pass


class UnterminatedClause(DimacsError):
    pass


@dataclass
class ParseDiagnostics:
    warnings: list[tuple[int, str]] = field(default_factory=list)
    declared_vars: int | None = None
    clause_count_declared: int | None = None
    clause_count_parsed: int = 0
    header_seen: bool = False

    def warn(self, line: int, message: str) -> None:
        self.warnings.append((line, message))


def parse_dimacs(
    text: Union[str, IO[str], Iterable[str]], *, strict: bool = False
) -> tuple[Formula, ParseDiagnostics]:
    """Parse DIMACS CNF text.

    Lenient by default: a missing header, count mismatches and a final clause
    without its terminating ``0`` produce warnings. ``strict=True`` turns
    those into errors. Clauses with more than three literals always raise
    :class:`ClauseTooLarge`.
    """
    if isinstance(text, str):
        lines: Iterable[str] = text.splitlines()
    else:
        lines = text
    diag = ParseDiagnostics()
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    current_start = 0
    lineno = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line[0] in "c%":
            if line[0] == "%":
                # SATLIB trailer: the rest of the file is not clause data
                diag.warn(lineno, "'%' trailer; ignoring remainder")
                break
            continue
        if line[0] == "p":
            parts = line.split()
            if diag.header_seen:
                raise MalformedHeader("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise MalformedHeader(f"expected 'p cnf <vars> <clauses>', got {line!r}", lineno)
            try:
                nv, nc = int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedHeader(f"non-integer counts in {line!r}", lineno) from None
            if nv < 0 or nc < 0:
                raise MalformedHeader("negative counts", lineno)
            if clauses or current:
                raise MalformedHeader("header after clause data", lineno)
            diag.header_seen = True
            diag.declared_vars, diag.clause_count_declared = nv, nc
            continue
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise DimacsError(f"unexpected token {tok!r}", lineno) from None
            if v == 0:
                if not current:
                    diag.warn(lineno, "empty clause")
                clauses.append(tuple(current))
                current = []
            else:
                if not current:
                    current_start = lineno
                current.append(v)
                if len(current) > 3:
                    raise ClauseTooLarge(
                        "clause with more than 3 literals (3-SAT allows at most 3)", current_start
                    )
    if current:
        if strict:
            raise UnterminatedClause("last clause is missing its terminating 0", current_start)
        diag.warn(current_start, "last clause is missing its terminating 0; accepted")
        clauses.append(tuple(current))
    if not diag.header_seen:
        if strict:
            raise MalformedHeader("missing 'p cnf' header")
        diag.warn(0, "missing 'p cnf' header")
    diag.clause_count_parsed = len(clauses)
    if diag.clause_count_declared is not None and diag.clause_count_declared != len(clauses):
        msg = f"header declares {diag.clause_count_declared} clauses, parsed {len(clauses)}"
        if strict:
            raise DimacsError(msg)
        diag.warn(lineno, msg)
    if diag.declared_vars is not None:
        top = max((abs(l) for c in clauses for l in c), default=0)
        if top > diag.declared_vars:
            msg = f"variable {top} exceeds declared count {diag.declared_vars}"
            if strict:
                raise DimacsError(msg)
            diag.warn(lineno, msg)
    if any(len(c) == 0 for c in clauses):
        # an empty clause is trivially unsatisfiable and has no cell
        raise DimacsError("empty clause in input")
    return Formula(tuple(clauses)), diag


def emit_dimacs(formula: Formula, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p cnf {formula.max_var} {len(formula.clauses)}")
    out.extend(" ".join(map(str, c)) + " 0" for c in formula.clauses)
    return "\n".join(out) + "\n"


def read_dimacs_file(path, *, strict: bool = False) -> tuple[Formula, ParseDiagnostics]:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh, strict=strict)


def write_dimacs_file(path, formula: Formula, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_dimacs(formula, comments))
