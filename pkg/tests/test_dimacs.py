import io

import pytest
from hypothesis import given

from seqsat.dimacs import (
    ClauseTooLarge,
    DimacsError,
    MalformedHeader,
    UnterminatedClause,
    emit_dimacs,
    parse_dimacs,
    read_dimacs_file,
    write_dimacs_file,
)
from strategies import formulas


def test_parse_basic():
    f, diag = parse_dimacs("c hi\np cnf 3 2\n1 -2 0\nc mid\n3 0\n")
    assert f.clauses == ((1, -2), (3,))
    assert diag.header_seen and not diag.warnings


def test_clause_spanning_lines():
    f, _ = parse_dimacs("p cnf 3 1\n1\n-2\n3 0\n")
    assert f.clauses == ((1, -2, 3),)


def test_missing_header_is_a_warning_unless_strict():
    f, diag = parse_dimacs("1 2 0\n")
    assert f.clauses == ((1, 2),)
    assert any("header" in msg for _, msg in diag.warnings)
    with pytest.raises(MalformedHeader):
        parse_dimacs("1 2 0\n", strict=True)


def test_unterminated_last_clause():
    f, diag = parse_dimacs("p cnf 2 1\n1 2\n")
    assert f.clauses == ((1, 2),)
    assert diag.warnings
    with pytest.raises(UnterminatedClause):
        parse_dimacs("p cnf 2 1\n1 2\n", strict=True)


def test_count_mismatch():
    _, diag = parse_dimacs("p cnf 2 3\n1 2 0\n")
    assert any("declares 3" in msg for _, msg in diag.warnings)
    with pytest.raises(DimacsError):
        parse_dimacs("p cnf 2 3\n1 2 0\n", strict=True)


@pytest.mark.parametrize(
    "text, exc",
    [
        ("p cnf 4 1\n1 2 3 4 0\n", ClauseTooLarge),
        ("p cnf x 1\n1 0\n", MalformedHeader),
        ("p dnf 1 1\n1 0\n", MalformedHeader),
        ("p cnf 1 1\np cnf 1 1\n1 0\n", MalformedHeader),
        ("1 0\np cnf 1 1\n", MalformedHeader),
        ("p cnf 1 1\n1 a 0\n", DimacsError),
        ("p cnf 1 1\n0\n", DimacsError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_dimacs(text)


def test_error_carries_line_number():
    with pytest.raises(ClauseTooLarge) as info:
        parse_dimacs("p cnf 4 2\n1 0\n1 2 3 4 0\n")
    assert info.value.line == 3


def test_percent_trailer():
    f, diag = parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n")
    assert f.clauses == ((1, 2),)
    assert diag.warnings


def test_accepts_file_objects(tmp_path, five_clause):
    path = tmp_path / "x.cnf"
    write_dimacs_file(path, five_clause, ["example"])
    assert path.read_text().startswith("c example\np cnf 5 5\n")
    f, _ = read_dimacs_file(path)
    assert f == five_clause
    f2, _ = parse_dimacs(io.StringIO(emit_dimacs(five_clause)))
    assert f2 == five_clause


@given(formulas(max_var=9, max_clauses=12, distinct_vars=False))
def test_round_trip(f):
    g, diag = parse_dimacs(emit_dimacs(f), strict=True)
    assert g == f
    assert not diag.warnings
