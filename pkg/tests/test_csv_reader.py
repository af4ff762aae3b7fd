import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otdp.errors import EmptyInputError, ParseError, TableTooLargeError
from otdp.ingest import is_missing, parse_csv, scan_csv_dimensions, serialize_csv


def test_minimal_well_formed():
    table = parse_csv("a,b,label\n1,x,Normal\n2,y,Attack")
    assert (table.n_rows, table.n_cols) == (2, 3)
    assert table.column_names == ("a", "b", "label")
    assert table.rows == [["1", "x", "Normal"], ["2", "y", "Attack"]]


def test_ragged_row_error_message():
    with pytest.raises(ParseError, match=r"row 2: expected 2 cells, found 1"):
        parse_csv("1,2\n3", has_header=False)


def test_missing_question_mark_counted():
    # Hand-counted 5-row fixture: one '?' at data row 1, column 0.
    text = "a,b\n?,1\n2,3\n4,5\n6,7\n8,9"
    table = parse_csv(text)
    assert table.columns[0].missing_count == 1
    assert table.columns[1].missing_count == 0
    # per-column accounting closes: missing + present = n_rows
    for j, meta in enumerate(table.columns):
        present = sum(not is_missing(c) for c in table.column_values(j))
        assert meta.missing_count + present == table.n_rows


@pytest.mark.parametrize("token", ["", "?", "NaN", "nan", " ? ", " NAN "])
def test_missing_tokens(token):
    assert is_missing(token)


@pytest.mark.parametrize("token", ["0", "none", "nan1", "x"])
def test_non_missing_tokens(token):
    assert not is_missing(token)


def test_empty_file_errors():
    with pytest.raises(EmptyInputError):
        parse_csv("")
    with pytest.raises(EmptyInputError):
        parse_csv("a,b\n")  # header only


def test_single_column_rejected():
    with pytest.raises(ParseError, match="at least 2 columns"):
        parse_csv("a\n1\n2")


@pytest.mark.parametrize("delimiter", [",", ";", "\t"])
def test_delimiters(delimiter):
    text = delimiter.join(["a", "b"]) + "\n" + delimiter.join(["1", "2"])
    table = parse_csv(text, delimiter=delimiter)
    assert table.rows == [["1", "2"]]


def test_unsupported_delimiter():
    with pytest.raises(ParseError, match="unsupported delimiter"):
        parse_csv("a|b\n1|2", delimiter="|")


def test_header_synthesis_without_header():
    table = parse_csv("1,2\n3,4", has_header=False)
    assert table.column_names == ("col_0", "col_1")


def test_quoted_cells_and_embedded_delimiter():
    table = parse_csv('a,b\n"x,y",2')
    assert table.rows == [["x,y", "2"]]


def test_roundtrip_byte_exact_for_unquoted_input():
    text = "a,b,label\n1,x,Normal\n2,y,Attack\n"
    table = parse_csv(text)
    assert serialize_csv(table) == text


def test_roundtrip_stable_after_quoting_normalization():
    text = 'a,b\n"x,y",2\n3,4\n'
    table = parse_csv(text)
    once = serialize_csv(table)
    again = serialize_csv(parse_csv(once))
    assert once == again
    assert parse_csv(once).rows == table.rows


_plain_cell = st.text(
    alphabet=st.characters(
        codec="ascii", categories=("L", "N", "P", "Zs"), exclude_characters=',"\r\n'
    ),
    min_size=1,
    max_size=8,
).map(lambda s: s.strip() or "x")


@settings(deadline=None, max_examples=40)
@given(st.lists(st.tuples(_plain_cell, _plain_cell), min_size=1, max_size=12))
def test_roundtrip_property_for_plain_cells(rows):
    text = "h1,h2\n" + "\n".join(f"{a},{b}" for a, b in rows) + "\n"
    table = parse_csv(text)
    assert serialize_csv(table) == text


def test_latin1_fallback():
    data = "a,b\nnormé,1\n".encode("latin-1")
    table = parse_csv(data)
    assert table.rows[0][0] == "normé"


def test_trailing_blank_lines_tolerated_interior_rejected():
    assert parse_csv("a,b\n1,2\n\n").n_rows == 1
    with pytest.raises(ParseError, match="found 0"):
        parse_csv("a,b\n1,2\n\n3,4")


def test_max_cells_overflow_reports_dimensions():
    text = "a,b\n" + "\n".join(f"{i},{i}" for i in range(10))
    with pytest.raises(TableTooLargeError) as err:
        parse_csv(text, max_cells=6)
    assert err.value.n_rows == 10
    assert err.value.n_cols == 2


def test_scan_dimensions():
    text = "a,b\n" + "\n".join(f"{i},{i}" for i in range(10))
    assert scan_csv_dimensions(text) == (10, 2)


def test_parse_from_path(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("a,b\n1,2\n")
    table = parse_csv(path)
    assert table.source_name.endswith("t.csv")
    assert table.n_rows == 1
