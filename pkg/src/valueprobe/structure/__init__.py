"""Value-space structure: correlations -> dissimilarities -> ordinal MDS -> procrustes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from ..errors import ValidationError
from ..matrix import CountMatrix, aggregate_matrix
from .mds import Configuration, Dissimilarity, isotonic_regression, kruskal_stress, ordinal_mds, torgerson
from .procrustes import FitResult, alienation, procrustes_fit, theoretical_target, tucker_phi

CORRELATIONS = ("spearman", "pearson")
DISSIMILARITIES = ("sqrt2", "oneminus")


def rank_correlation_matrix(m: CountMatrix, method: str = "spearman") -> np.ndarray:
    """Correlations between category columns across prompt rows.

    ``spearman`` ranks each column (ties get average ranks) before the
    Pearson step.
    """
    if method not in CORRELATIONS:
        raise ValidationError(f"unknown correlation {method!r}")
    data = m.cells.astype(float)
    for j, label in enumerate(m.col_labels):
        if np.ptp(data[:, j]) == 0:
            raise ValidationError(f"column {label!r} is constant; its correlations are undefined")
    if method == "spearman":
        data = np.column_stack([rankdata(data[:, j]) for j in range(data.shape[1])])
    z = data - data.mean(axis=0)
    z /= np.sqrt((z * z).sum(axis=0))
    r = np.clip(z.T @ z, -1.0, 1.0)
    np.fill_diagonal(r, 1.0)
    return r


def to_dissimilarity(corr: np.ndarray, labels: Sequence[str], method: str = "sqrt2") -> Dissimilarity:
    """``sqrt2``: sqrt(2(1 - r)), the distance between standardized profiles. ``oneminus``: 1 - r."""
    corr = np.asarray(corr, dtype=float)
    if (corr < -1 - 1e-12).any() or (corr > 1 + 1e-12).any():
        raise ValidationError("correlations must lie in [-1, 1]")
    gap = np.clip(1.0 - corr, 0.0, 2.0)
    if method == "sqrt2":
        d = np.sqrt(2.0 * gap)
    elif method == "oneminus":
        d = gap
    else:
        raise ValidationError(f"unknown dissimilarity {method!r}")
    d = (d + d.T) / 2
    np.fill_diagonal(d, 0.0)
    return Dissimilarity(tuple(labels), d)


@dataclass(frozen=True)
class StructureResult:
    correlation: np.ndarray
    dissimilarity: Dissimilarity
    configuration: Configuration
    target: np.ndarray
    fit: FitResult
    correlation_method: str
    dissimilarity_method: str


def structure_report(
    m: CountMatrix,
    circle_order: Sequence[str] | None = None,
    correlation: str = "spearman",
    dissimilarity: str = "sqrt2",
    n_starts: int = 1,
) -> StructureResult:
    if not m.is_aggregated:
        m = aggregate_matrix(m)
    circle = list(circle_order or m.col_labels)
    corr = rank_correlation_matrix(m, correlation)
    dis = to_dissimilarity(corr, m.col_labels, dissimilarity)
    config = ordinal_mds(dis, dims=2, n_starts=n_starts)
    full_target = theoretical_target(circle)
    target = full_target[[circle.index(label) for label in m.col_labels]]
    fit = procrustes_fit(config.coords, target)
    return StructureResult(corr, dis, config, target, fit, correlation, dissimilarity)


__all__ = [
    "CORRELATIONS", "DISSIMILARITIES",
    "Configuration", "Dissimilarity", "FitResult", "StructureResult",
    "alienation", "isotonic_regression", "kruskal_stress", "ordinal_mds", "procrustes_fit",
    "rank_correlation_matrix", "structure_report", "theoretical_target", "to_dissimilarity",
    "torgerson", "tucker_phi",
]
