from .regression import CollinearityError, PredictorEstimate, RegressionResult, frequency_regression, standardize
from .validity import (
    HIT,
    MISS,
    TIE,
    ColumnMetrics,
    HitResult,
    MetricTable,
    ProfileMatch,
    RowMetrics,
    compute_metrics,
    concept_validity,
    discriminant_validity,
    expected_profile,
    hits,
    mean_defined,
    pearson,
    profile_match,
    signal_noise,
)
from .wordfreq import FrequencyStats, UnigramTable, category_frequency_stats, read_unigram_csv

__all__ = [
    "HIT", "MISS", "TIE",
    "ColumnMetrics", "HitResult", "MetricTable", "ProfileMatch", "RowMetrics",
    "compute_metrics", "concept_validity", "discriminant_validity", "expected_profile",
    "hits", "mean_defined", "pearson", "profile_match", "signal_noise",
    "CollinearityError", "PredictorEstimate", "RegressionResult", "frequency_regression", "standardize",
    "FrequencyStats", "UnigramTable", "category_frequency_stats", "read_unigram_csv",
]
