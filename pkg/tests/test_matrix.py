import random
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valueprobe.errors import ParseError, ValidationError
from valueprobe.lexicon import parse_lexicon
from valueprobe.matrix import (
    CountMatrix,
    aggregate_matrix,
    build_count_matrix,
    column_totals,
    format_matrix_csv,
    parse_matrix_csv,
    row_totals,
)

from .conftest import FIXTURES


def rec(ft, text, ok=True):
    return SimpleNamespace(fine_type_id=ft, cleaned_text=text, ok=ok)


def test_s2_security_personal_row(s2):
    assert s2.row("Security-Personal") == dict(SE=205, TR=5, CO=59, BE=36, UN=111, SD=41, ST=15, HE=10, AC=63, PO=79)
    assert row_totals(s2)[0] == 624


def by_label(m):
    return {label: m.row(label) for label in m.row_labels}


def test_s2_aggregation_matches_reference_block(s2, s2_agg):
    agg = aggregate_matrix(s2)
    assert by_label(agg) == by_label(s2_agg)
    assert agg.row_labels == agg.col_labels
    assert agg.row("SE") == dict(SE=429, TR=12, CO=119, BE=78, UN=149, SD=94, ST=35, HE=29, AC=96, PO=102)


def test_s3_aggregation_and_se_column(s3, s3_agg):
    assert by_label(aggregate_matrix(s3)) == by_label(s3_agg)
    assert column_totals(s3)[s3.col_labels.index("SE")] == 341


def test_fixture_columns_follow_circle(s2, spec):
    assert s2.col_labels == tuple(spec.circle_order)
    assert s2.shape == (17, 10)


@settings(max_examples=30)
@given(st.integers(0, 2**31))
def test_aggregation_equals_group_by_sum(seed):
    rng = np.random.default_rng(seed)
    cols = ("A", "B", "C")
    parents = tuple(rng.choice(cols, size=17))
    cells = rng.integers(0, 50, size=(17, 3))
    m = CountMatrix(tuple(f"r{i}" for i in range(17)), cols, cells, parents)
    agg = aggregate_matrix(m)
    for k, c in enumerate(agg.row_labels):
        expected = [sum(int(cells[i, j]) for i in range(17) if parents[i] == c) for j in range(3)]
        assert list(agg.cells[k]) == expected
    assert agg.cells.sum() == cells.sum()
    assert set(agg.row_labels) == set(parents)


def test_single_row_per_parent_is_identity():
    m = CountMatrix(("A", "B"), ("A", "B"), np.array([[3, 1], [0, 2]]), ("A", "B"))
    assert aggregate_matrix(m) == m


def test_zero_matrix_totals():
    m = CountMatrix(("A", "B"), ("A", "B"), np.zeros((2, 2), dtype=int), ("A", "B"))
    assert list(row_totals(m)) == [0, 0]
    assert list(column_totals(m)) == [0, 0]


def test_hand_scored_corpus(spec, lexicon):
    records = [
        rec("Security-Personal", "Alarm and danger; caution!"),
        rec("Security-Personal", "We must obey the rules and protect nature."),
        rec("Tradition", "Tradition and customs matter; danger too."),
        rec("Face", "power power power"),  # unmapped: probed but not tabulated
        rec("Tradition", "alarm alarm", ok=False),  # failed requests are skipped
    ]
    m = build_count_matrix(records, lexicon, spec)
    assert m.row("Security-Personal") == dict(SE=3, CO=2, TR=0, BE=0, UN=2, SD=0, ST=0, HE=0, AC=0, PO=0)
    assert m.row("Tradition") == dict(SE=1, CO=0, TR=2, BE=0, UN=0, SD=0, ST=0, HE=0, AC=0, PO=0)
    assert m.cells.sum() == 10


def test_empty_corpus_gives_zero_matrix(spec, lexicon):
    m = build_count_matrix([], lexicon, spec)
    assert m.shape == (17, 10)
    assert not m.cells.any()


def test_record_order_does_not_matter(spec, lexicon):
    records = [rec(ft.id, f"alarm obey {ft.name_text} success") for ft in spec.fine_types]
    shuffled = records[:]
    random.Random(3).shuffle(shuffled)
    assert build_count_matrix(records, lexicon, spec) == build_count_matrix(shuffled, lexicon, spec)


def test_unknown_fine_type_is_listed(spec, lexicon):
    with pytest.raises(ValidationError, match="Nope"):
        build_count_matrix([rec("Nope", "alarm")], lexicon, spec)


def test_lexicon_circle_mismatch(spec):
    lex = parse_lexicon("%\n1\tSE\n2\tXX\n%\nalarm\t1\n")
    with pytest.raises(ValidationError):
        build_count_matrix([], lex, spec)


def test_csv_round_trip(s2, spec):
    text = format_matrix_csv(s2)
    assert parse_matrix_csv(text, spec.congruence_map(), spec.circle_order) == s2
    raw = (FIXTURES / "table_s2.csv").read_text()
    assert parse_matrix_csv(raw, spec.congruence_map()).col_labels[:3] == ("SE", "TR", "CO")


@pytest.mark.parametrize("text, line", [
    ("prompt,SE,CO\nSE,1\n", 2),
    ("prompt,SE,CO\nSE,1,x\n", 2),
    ("prompt,SE,CO\nSE,1,2\nSE,1,2\n", 3),
    ("prompt,SE,CO\nSE,1,2\nZZ,1,2\n", 3),
    ("prompt,SE,CO\nSE,-1,2\n", 2),
    ("prompt,SE,SE\n", 1),
])
def test_csv_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_matrix_csv(text, {"SE": "SE", "CO": "CO"}, source="m.csv")
    assert err.value.line == line
    assert f"m.csv:line {line}" in str(err.value)
