"""Hit, validity, signal-to-noise and profile-match metrics over count matrices.

Undefined quantities (zero totals, zero variance) are ``None``; a signal to
noise ratio with nothing on the noise side is ``math.inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..matrix import CountMatrix, aggregate_matrix, column_totals, row_totals
from ..probes import circular_distance

HIT, MISS, TIE = "hit", "miss", "tie"


def _status(values: np.ndarray, congruent: set[int]) -> Optional[str]:
    if values.sum() == 0 or not congruent:
        return None
    winners = set(np.flatnonzero(values == values.max()).tolist())
    if winners <= congruent:
        return HIT
    if winners & congruent:
        return TIE
    return MISS


@dataclass(frozen=True)
class HitResult:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    row_status: tuple[Optional[str], ...]
    row_winners: tuple[tuple[str, ...], ...]
    col_status: tuple[Optional[str], ...]
    col_winners: tuple[tuple[str, ...], ...]

    @property
    def row_hits(self) -> int:
        return sum(s == HIT for s in self.row_status)

    @property
    def col_hits(self) -> int:
        return sum(s == HIT for s in self.col_status)

    @property
    def row_rate(self) -> Optional[float]:
        defined = sum(s is not None for s in self.row_status)
        return self.row_hits / defined if defined else None

    @property
    def col_rate(self) -> Optional[float]:
        defined = sum(s is not None for s in self.col_status)
        return self.col_hits / defined if defined else None

    def misses(self) -> list[tuple[str, tuple[str, ...]]]:
        return [(r, w) for r, s, w in zip(self.row_labels, self.row_status, self.row_winners) if s == MISS]


def hits(m: CountMatrix) -> HitResult:
    """Row hit: the congruent cell is the strict row maximum. Column hit: the
    column maximum lies only in congruent rows. Shared maxima are ties."""
    row_status, row_winners = [], []
    for i, row in enumerate(m.cells):
        row_status.append(_status(row, {m.congruent_col(i)}))
        row_winners.append(_winners(row, m.col_labels))
    col_status, col_winners = [], []
    for j in range(len(m.col_labels)):
        col = m.cells[:, j]
        col_status.append(_status(col, set(m.congruent_rows(j))))
        col_winners.append(_winners(col, m.row_labels))
    return HitResult(m.row_labels, m.col_labels, tuple(row_status), tuple(row_winners),
                     tuple(col_status), tuple(col_winners))


def _winners(values: np.ndarray, labels: Sequence[str]) -> tuple[str, ...]:
    if values.sum() == 0:
        return ()
    return tuple(labels[k] for k in np.flatnonzero(values == values.max()))


def concept_validity(m: CountMatrix) -> list[Optional[float]]:
    totals = row_totals(m)
    out = []
    for i, total in enumerate(totals):
        out.append(None if total == 0 else int(m.cells[i, m.congruent_col(i)]) / int(total))
    return out


def discriminant_validity(m: CountMatrix) -> list[Optional[float]]:
    """Per column, the share of its counts that fall in congruent rows.

    Works on fine or aggregated matrices alike: aggregation preserves both
    the column totals and the congruent-row sums.
    """
    totals = column_totals(m)
    out = []
    for j, total in enumerate(totals):
        rows = m.congruent_rows(j)
        if total == 0 or not rows:
            out.append(None)
        else:
            out.append(int(m.cells[rows, j].sum()) / int(total))
    return out


def signal_noise(validity: Optional[float]) -> Optional[float]:
    if validity is None:
        return None
    if not 0.0 <= validity <= 1.0:
        raise ValueError(f"validity must lie in [0, 1], got {validity}")
    if validity == 1.0:
        return math.inf
    return validity / (1.0 - validity)


def expected_profile(parent: str, circle_order: Sequence[str]) -> np.ndarray:
    """Expected counts pattern: half the circle minus the circular distance.

    For 10 values the parent scores 5, its neighbours 4, the opposite value 0.
    """
    half = len(circle_order) // 2
    return np.array([half - circular_distance(parent, w, circle_order) for w in circle_order], dtype=float)


def pearson(x: Sequence[float], y: Sequence[float]) -> Optional[float]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        return None
    return float(xc @ yc) / denom


@dataclass(frozen=True)
class ProfileMatch:
    rows: tuple[Optional[float], ...]
    columns: tuple[Optional[float], ...]


def profile_match(m: CountMatrix, circle_order: Sequence[str] | None = None) -> ProfileMatch:
    """Correlate observed count patterns with the circumplex expectation.

    Rows are compared across categories; columns are compared across the
    aggregated prompt rows.
    """
    circle = list(circle_order or m.col_labels)
    ordered = m.reorder_columns(circle)
    rows = tuple(pearson(ordered.cells[i], expected_profile(p, circle)) for i, p in enumerate(ordered.row_parents))
    agg = aggregate_matrix(ordered)
    columns = tuple(pearson(agg.cells[:, j], expected_profile(c, circle)) for j, c in enumerate(agg.col_labels))
    # back to the caller's column order
    col_pos = {c: k for k, c in enumerate(circle)}
    return ProfileMatch(rows, tuple(columns[col_pos[c]] for c in m.col_labels))


@dataclass(frozen=True)
class RowMetrics:
    label: str
    parent: str
    total: int
    congruent: int
    status: Optional[str]
    validity: Optional[float]
    snr: Optional[float]
    profile_match: Optional[float]

    @property
    def hit(self) -> bool:
        return self.status == HIT


@dataclass(frozen=True)
class ColumnMetrics:
    label: str
    total: int
    congruent: int
    status: Optional[str]
    validity: Optional[float]
    snr: Optional[float]
    profile_match: Optional[float]

    @property
    def hit(self) -> bool:
        return self.status == HIT


def mean_defined(values) -> Optional[float]:
    vals = [v for v in values if v is not None]
    if not vals:
        return None
    if any(math.isinf(v) for v in vals):
        return math.inf
    return math.fsum(vals) / len(vals)


@dataclass(frozen=True)
class MetricTable:
    rows: tuple[RowMetrics, ...]
    columns: tuple[ColumnMetrics, ...]
    hits: HitResult
    summary: dict = field(default_factory=dict)

    def row(self, label: str) -> RowMetrics:
        return next(r for r in self.rows if r.label == label)

    def column(self, label: str) -> ColumnMetrics:
        return next(c for c in self.columns if c.label == label)


def compute_metrics(m: CountMatrix, circle_order: Sequence[str] | None = None) -> MetricTable:
    h = hits(m)
    cv = concept_validity(m)
    dv = discriminant_validity(m)
    pm = profile_match(m, circle_order)
    rtot, ctot = row_totals(m), column_totals(m)

    rows = tuple(
        RowMetrics(
            label=label,
            parent=m.row_parents[i],
            total=int(rtot[i]),
            congruent=int(m.cells[i, m.congruent_col(i)]),
            status=h.row_status[i],
            validity=cv[i],
            snr=signal_noise(cv[i]),
            profile_match=pm.rows[i],
        )
        for i, label in enumerate(m.row_labels)
    )
    columns = tuple(
        ColumnMetrics(
            label=label,
            total=int(ctot[j]),
            congruent=int(m.cells[m.congruent_rows(j), j].sum()),
            status=h.col_status[j],
            validity=dv[j],
            snr=signal_noise(dv[j]),
            profile_match=pm.columns[j],
        )
        for j, label in enumerate(m.col_labels)
    )
    summary = {
        "row_hits": h.row_hits,
        "row_hit_rate": h.row_rate,
        "column_hits": h.col_hits,
        "column_hit_rate": h.col_rate,
        "mean_concept_validity": mean_defined(r.validity for r in rows),
        "mean_concept_snr": mean_defined(r.snr for r in rows),
        "mean_concept_profile_match": mean_defined(r.profile_match for r in rows),
        "mean_discriminant_validity": mean_defined(c.validity for c in columns),
        "mean_discriminant_snr": mean_defined(c.snr for c in columns),
        "mean_discriminant_profile_match": mean_defined(c.profile_match for c in columns),
    }
    return MetricTable(rows, columns, h, summary)
