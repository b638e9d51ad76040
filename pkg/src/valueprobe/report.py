"""Tabular and JSON renderings of metric, structure and baseline results.

CSV tables come in two views: full precision (``repr`` of the float, which
round-trips exactly) and a 2-decimal view for comparison with printed
tables. Undefined values are written as ``NA`` in CSV and ``null`` in JSON;
an infinite ratio is ``inf`` in both.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Optional, Sequence

import numpy as np

from . import svg
from .baseline import InstrumentBaseline
from .errors import ValidationError
from .matrix import column_totals
from .metrics import FrequencyStats, MetricTable, RegressionResult
from .structure import StructureResult

NA = "NA"
INF = "inf"


def cell(value, decimals: Optional[int] = None) -> str:
    if value is None:
        return NA
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isinf(v):
            return INF if v > 0 else "-" + INF
        if math.isnan(v):
            return NA
        return f"{v:.{decimals}f}" if decimals is not None else repr(v)
    return str(value)


def json_number(value):
    if value is None:
        return None
    v = float(value)
    if math.isinf(v):
        return INF if v > 0 else "-" + INF
    if math.isnan(v):
        return None
    return v


def from_json_number(value) -> Optional[float]:
    if value is None:
        return None
    if value == INF:
        return math.inf
    if value == "-" + INF:
        return -math.inf
    return float(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence], decimals: Optional[int] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([cell(v, decimals) for v in row])
    return buf.getvalue()


def dumps(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


ROW_HEADER = ("prompt", "parent", "total", "congruent", "status", "concept_validity", "snr", "profile_match")
COLUMN_HEADER = ("category", "total", "congruent", "status", "discriminant_validity", "snr", "profile_match")


def metric_rows_csv(table: MetricTable, decimals: Optional[int] = None) -> str:
    return to_csv(ROW_HEADER, (
        (r.label, r.parent, r.total, r.congruent, r.status, r.validity, r.snr, r.profile_match) for r in table.rows
    ), decimals)


def metric_columns_csv(table: MetricTable, decimals: Optional[int] = None) -> str:
    return to_csv(COLUMN_HEADER, (
        (c.label, c.total, c.congruent, c.status, c.validity, c.snr, c.profile_match) for c in table.columns
    ), decimals)


def regression_to_dict(res: RegressionResult) -> dict:
    return {
        "n": res.n,
        "scaled_predictors": res.scaled,
        "intercept": {"b": res.intercept, "se": res.intercept_se, "ci": list(res.intercept_ci)},
        "predictors": [
            {"name": p.name, "b": json_number(p.b), "se": json_number(p.b_se), "ci": [json_number(v) for v in p.b_ci],
             "t": json_number(p.t), "p": json_number(p.p), "beta": json_number(p.beta),
             "beta_ci": [json_number(v) for v in p.beta_ci], "sr2": json_number(p.sr2), "r": json_number(p.r)}
            for p in res.predictors
        ],
        "r2": json_number(res.r2),
        "adj_r2": json_number(res.adj_r2),
        "f": json_number(res.f_stat),
        "f_pvalue": json_number(res.f_pvalue),
        "df": [res.df_model, res.df_resid],
    }


def metrics_to_dict(table: MetricTable, kind: str, regression: RegressionResult | None = None) -> dict:
    return {
        "kind": kind,
        "rows": [
            {"label": r.label, "parent": r.parent, "total": r.total, "congruent": r.congruent, "status": r.status,
             "concept_validity": json_number(r.validity), "snr": json_number(r.snr),
             "profile_match": json_number(r.profile_match)}
            for r in table.rows
        ],
        "columns": [
            {"label": c.label, "total": c.total, "congruent": c.congruent, "status": c.status,
             "discriminant_validity": json_number(c.validity), "snr": json_number(c.snr),
             "profile_match": json_number(c.profile_match)}
            for c in table.columns
        ],
        "misses": [{"row": r, "winners": list(w)} for r, w in table.hits.misses()],
        "summary": {k: (json_number(v) if isinstance(v, float) else v) for k, v in table.summary.items()},
        "regression": regression_to_dict(regression) if regression is not None else None,
    }


def structure_to_dict(res: StructureResult) -> dict:
    cfg, fit = res.configuration, res.fit

    def pts(a):
        return [[float(x) for x in row] for row in np.asarray(a)]

    return {
        "labels": list(cfg.labels),
        "correlation_method": res.correlation_method,
        "dissimilarity_method": res.dissimilarity_method,
        "correlation": pts(res.correlation),
        "dissimilarity": pts(res.dissimilarity.d),
        "coordinates": pts(cfg.coords),
        "fitted": pts(fit.rotated),
        "target": pts(res.target),
        "stress": cfg.stress,
        "iterations": cfg.iterations,
        "converged": cfg.converged,
        "phi": fit.phi_overall,
        "phi_per_dimension": list(fit.phi_per_dimension),
        "alienation": fit.alienation,
        "procrustes_scale": fit.scale,
    }


def structure_svg(res: StructureResult) -> str:
    title = f"Ordinal MDS, phi = {res.fit.phi_overall:.3f}"
    return svg.scatter(res.configuration.labels, res.fit.rotated, title, reference=res.target)


WORDFREQ_HEADER = ("category", "entries", "matched", "mean", "sd", "median", "min", "max", "range", "unmatched", "flag")


def wordfreq_csv(stats: Sequence[FrequencyStats], decimals: Optional[int] = None) -> str:
    return to_csv(WORDFREQ_HEADER, (
        (s.category, s.n_entries, s.count, s.mean, s.sd, s.median, s.min, s.max, s.range, len(s.missing),
         "empty" if s.empty else "")
        for s in stats
    ), decimals)


def instrument_items_csv(b: InstrumentBaseline) -> str:
    return to_csv(("fine_type", "parent", "item", "tokens", *b.categories),
                  ((i.fine_type_id, i.parent_value, i.item_index, i.token_total, *i.counts) for i in b.items))


def instrument_matches_csv(b: InstrumentBaseline) -> str:
    return to_csv(("fine_type", "parent", "item", "position", "token", "entry", "category", "congruent"),
                  ((m.fine_type_id, m.parent_value, m.item_index, m.position, m.token, m.entry, m.category,
                    m.congruent) for m in b.matches))


def instrument_to_dict(b: InstrumentBaseline) -> dict:
    def hit_report(h):
        return {
            "rows": [{"label": r, "status": s, "winners": list(w)}
                     for r, s, w in zip(h.row_labels, h.row_status, h.row_winners)],
            "row_hits": h.row_hits,
            "row_hit_rate": json_number(h.row_rate),
        }

    agg_totals = column_totals(b.aggregated)
    return {
        "categories": list(b.categories),
        "items": len(b.items),
        "tokens": sum(i.token_total for i in b.items),
        "matches": len(b.matches),
        "category_totals": {c: int(t) for c, t in zip(b.aggregated.col_labels, agg_totals)},
        "fine_types": hit_report(b.fine_hits),
        "values": hit_report(b.value_hits),
        "mismatches": [{"fine_type": m.fine_type_id, "item": m.item_index, "token": m.token,
                        "entry": m.entry, "category": m.category} for m in b.mismatches],
    }


def bar_chart_from_metrics(data: dict) -> str:
    try:
        cols = data["columns"]
        labels = [c["label"] for c in cols]
        values = [c["total"] for c in cols]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"metrics document lacks column totals: {exc}") from None
    return svg.bar_chart(labels, values, f"Dictionary counts by category ({data.get('kind', 'unknown')})")


def scatter_from_structure(data: dict) -> str:
    try:
        return svg.scatter(data["labels"], data["fitted"], f"Ordinal MDS, phi = {float(data['phi']):.3f}",
                           reference=data.get("target"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"structure document is incomplete: {exc}") from None


def summary_text(metrics: Sequence[dict], structure: dict | None) -> str:
    lines = []
    for data in metrics:
        s = data.get("summary", {})
        lines.append(f"[{data.get('kind', 'unknown')}]")
        lines.append(f"  row hits: {s.get('row_hits')} of {len(data.get('rows', []))}")
        lines.append(f"  column hits: {s.get('column_hits')} of {len(data.get('columns', []))}")
        for key in ("mean_concept_validity", "mean_concept_snr", "mean_discriminant_validity", "mean_discriminant_snr"):
            lines.append(f"  {key}: {_fmt(s.get(key))}")
        for miss in data.get("misses", []):
            lines.append(f"  miss: {miss['row']} peaks at {', '.join(miss['winners'])}")
    if structure is not None:
        lines.append("[structure]")
        lines.append(f"  phi: {_fmt(structure.get('phi'), 3)}")
        lines.append(f"  alienation: {_fmt(structure.get('alienation'), 3)}")
        lines.append(f"  stress: {_fmt(structure.get('stress'), 4)}")
    return "\n".join(lines) + "\n"


def _fmt(v, decimals: int = 2) -> str:
    if v is None:
        return NA
    if v == INF:
        return INF
    return f"{float(v):.{decimals}f}"
