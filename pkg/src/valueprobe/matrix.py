"""Prompt-class by lexicon-category count matrices."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, ParseError, ValidationError
from .lexicon import Lexicon, score_text
from .probes import ValueSpec

LABEL_HEADER = "prompt"


@dataclass(frozen=True, eq=False)
class CountMatrix:
    """Integer counts, rows = prompt classes, columns = categories.

    ``row_parents[i]`` names the column congruent with row ``i``.
    """

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: np.ndarray
    row_parents: tuple[str, ...]

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.int64, copy=True).reshape(len(self.row_labels), len(self.col_labels))
        if (cells < 0).any():
            raise ValidationError("count matrix cells must be non-negative")
        if len(self.row_parents) != len(self.row_labels):
            raise ValidationError("every row needs a congruent column")
        missing = sorted({p for p in self.row_parents if p not in self.col_labels})
        if missing:
            raise ValidationError(f"congruent columns not present in the matrix: {missing}")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        object.__setattr__(self, "row_parents", tuple(self.row_parents))

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    @property
    def congruence_map(self) -> dict[str, str]:
        return dict(zip(self.row_labels, self.row_parents))

    def congruent_col(self, row: int) -> int:
        return self.col_labels.index(self.row_parents[row])

    def congruent_rows(self, col: int) -> list[int]:
        name = self.col_labels[col]
        return [i for i, p in enumerate(self.row_parents) if p == name]

    def row(self, label: str) -> dict[str, int]:
        i = self.row_labels.index(label)
        return dict(zip(self.col_labels, (int(v) for v in self.cells[i])))

    def cell(self, row_label: str, col_label: str) -> int:
        return int(self.cells[self.row_labels.index(row_label), self.col_labels.index(col_label)])

    @property
    def is_aggregated(self) -> bool:
        return self.row_labels == self.row_parents

    def reorder_columns(self, order: Sequence[str]) -> "CountMatrix":
        if sorted(order) != sorted(self.col_labels):
            raise ValidationError(f"column labels {list(self.col_labels)} do not match {list(order)}")
        idx = [self.col_labels.index(c) for c in order]
        return CountMatrix(self.row_labels, tuple(order), self.cells[:, idx], self.row_parents)

    def __eq__(self, other):
        if not isinstance(other, CountMatrix):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.row_parents == other.row_parents
            and np.array_equal(self.cells, other.cells)
        )


def row_totals(m: CountMatrix) -> np.ndarray:
    return m.cells.sum(axis=1)


def column_totals(m: CountMatrix) -> np.ndarray:
    return m.cells.sum(axis=0)


def build_count_matrix(records: Iterable, lexicon: Lexicon, spec: ValueSpec) -> CountMatrix:
    """Sum per-document category counts into one row per mapped fine type.

    ``records`` are corpus records (anything with ``fine_type_id``,
    ``cleaned_text`` and ``ok``). Failed records and records of unmapped
    fine types are skipped.
    """
    circle = list(spec.circle_order)
    if set(lexicon.category_names) != set(circle):
        raise ValidationError(
            f"dictionary categories {lexicon.category_names} do not match the value spec circle {circle}"
        )
    rows = spec.mapped_fine_types
    index = {ft.id: i for i, ft in enumerate(rows)}
    known = {ft.id for ft in spec.fine_types}
    cells = np.zeros((len(rows), len(circle)), dtype=np.int64)
    unknown = set()
    for rec in records:
        if rec.fine_type_id not in known:
            unknown.add(rec.fine_type_id)
            continue
        if not rec.ok or rec.fine_type_id not in index:
            continue
        counts = score_text(rec.cleaned_text, lexicon).counts
        cells[index[rec.fine_type_id]] += [counts[c] for c in circle]
    if unknown:
        raise ValidationError(f"corpus references fine types not in the value spec: {sorted(unknown)}")
    return CountMatrix(tuple(ft.id for ft in rows), tuple(circle), cells, tuple(ft.parent_value for ft in rows))


def aggregate_matrix(m: CountMatrix) -> CountMatrix:
    """Sum fine rows sharing a parent; one row per column label, in column order."""
    cols = m.col_labels
    cells = np.zeros((len(cols), len(cols)), dtype=np.int64)
    for i, parent in enumerate(m.row_parents):
        cells[cols.index(parent)] += m.cells[i]
    return CountMatrix(cols, cols, cells, cols)


def matrix_from_rows(
    rows: Mapping[str, Sequence[int]], col_labels: Sequence[str], congruence: Mapping[str, str]
) -> CountMatrix:
    labels = tuple(rows)
    missing = [r for r in labels if r not in congruence]
    if missing:
        raise ValidationError(f"rows without a congruent column: {missing}")
    return CountMatrix(labels, tuple(col_labels), np.array([rows[r] for r in labels]), tuple(congruence[r] for r in labels))


def parse_matrix_csv(
    text: str,
    congruence: Mapping[str, str],
    circle_order: Sequence[str] | None = None,
    source: str | None = None,
) -> CountMatrix:
    """Parse the CSV matrix format: header ``prompt,<categories...>``, one row per class.

    ``congruence`` maps each row label to its congruent column. With
    ``circle_order`` the columns are reordered into that order.
    """
    reader = csv.reader(io.StringIO(text))
    header = None
    labels, values = [], []
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if header is None:
            header = [c.strip() for c in row]
            if len(header) < 2:
                raise ParseError("header needs a label column and at least one category", lineno, source)
            if len(set(header[1:])) != len(header) - 1:
                raise ParseError("duplicate category in header", lineno, source)
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(row)}", lineno, source)
        label = row[0].strip()
        if label in labels:
            raise ParseError(f"duplicate row label {label!r}", lineno, source)
        if label not in congruence:
            raise ParseError(f"row {label!r} has no congruent column in the value spec", lineno, source)
        try:
            nums = [int(c) for c in row[1:]]
        except ValueError:
            raise ParseError("cells must be integers", lineno, source) from None
        if any(n < 0 for n in nums):
            raise ParseError("cells must be non-negative", lineno, source)
        labels.append(label)
        values.append(nums)
    if header is None:
        raise ParseError("empty matrix file", None, source)
    cols = tuple(header[1:])
    cells = np.array(values, dtype=np.int64).reshape(len(labels), len(cols))
    try:
        m = CountMatrix(tuple(labels), cols, cells, tuple(congruence[r] for r in labels))
    except ValidationError as exc:
        raise ParseError(str(exc), None, source) from None
    if circle_order is not None:
        m = m.reorder_columns(circle_order)
    return m


def read_matrix_csv(path: str | Path, spec: ValueSpec) -> CountMatrix:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read matrix {path}: {exc}") from exc
    return parse_matrix_csv(text, spec.congruence_map(), spec.circle_order, source=str(path))


def format_matrix_csv(m: CountMatrix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([LABEL_HEADER, *m.col_labels])
    for label, row in zip(m.row_labels, m.cells):
        writer.writerow([label, *(int(v) for v in row)])
    return buf.getvalue()


def write_matrix_csv(m: CountMatrix, path: str | Path) -> None:
    try:
        Path(path).write_text(format_matrix_csv(m), encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc
