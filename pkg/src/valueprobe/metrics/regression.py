"""Category-total regression on scaled predictors (word frequency, value preference)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from ..errors import ValidationError

MAX_CONDITION = 1e8


class CollinearityError(ValidationError):
    pass


@dataclass(frozen=True)
class PredictorEstimate:
    name: str
    b: float
    b_se: float
    b_ci: tuple[float, float]
    t: float
    p: float
    beta: float
    beta_ci: tuple[float, float]
    sr2: float
    r: float


@dataclass(frozen=True)
class RegressionResult:
    predictors: tuple[PredictorEstimate, ...]
    intercept: float
    intercept_se: float
    intercept_ci: tuple[float, float]
    r2: float
    adj_r2: float
    f_stat: float
    f_pvalue: float
    df_model: int
    df_resid: int
    n: int
    fitted: np.ndarray
    residuals: np.ndarray
    means: dict
    sds: dict
    scaled: bool = True

    @property
    def names(self) -> list[str]:
        return [p.name for p in self.predictors]

    def coef(self) -> np.ndarray:
        return np.array([self.intercept, *(p.b for p in self.predictors)])

    def predict(self, predictors: Mapping[str, Sequence[float]]) -> np.ndarray:
        """Predict from raw (unscaled) predictor values."""
        y = np.full(len(next(iter(predictors.values()))), self.intercept, dtype=float)
        for p in self.predictors:
            x = np.asarray(predictors[p.name], dtype=float)
            if self.scaled:
                x = (x - self.means[p.name]) / self.sds[p.name]
            y = y + p.b * x
        return y


def standardize(x: Sequence[float]) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    sd = x.std(ddof=1)
    if not sd > 0:
        raise ValidationError("cannot standardize a constant vector")
    return (x - x.mean()) / sd


def _check_conditioning(Xs: np.ndarray) -> None:
    sv = np.linalg.svd(Xs, compute_uv=False)
    cond = sv[0] / sv[-1] if sv[-1] > 0 else math.inf
    if cond > MAX_CONDITION:
        raise CollinearityError(f"predictors are collinear (condition number {cond:.3g})")


def _ols(X: np.ndarray, y: np.ndarray):
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < X.shape[1]:
        raise CollinearityError("design matrix is rank deficient")
    fitted = X @ coef
    resid = y - fitted
    return coef, fitted, resid


def _r2(y: np.ndarray, resid: np.ndarray) -> float:
    sst = float(((y - y.mean()) ** 2).sum())
    return 1.0 - float(resid @ resid) / sst


def frequency_regression(
    outcome: Sequence[float],
    predictors: Mapping[str, Sequence[float]],
    level: float = 0.95,
    scale: bool = True,
) -> RegressionResult:
    """OLS of ``outcome`` on the predictors with an intercept.

    Predictors are standardized first unless ``scale`` is false, so ``b`` is
    in outcome units per predictor SD; ``beta`` comes from a refit on
    the standardized outcome; ``sr2`` is the drop in R^2 when a predictor
    is left out; ``r`` is the zero-order correlation.
    """
    y = np.asarray(outcome, dtype=float)
    names = list(predictors)
    n, p = len(y), len(names)
    if p == 0:
        raise ValidationError("at least one predictor is required")
    if n < p + 2:
        raise ValidationError(f"{n} observations cannot support {p} predictors")
    raw = {k: np.asarray(v, dtype=float) for k, v in predictors.items()}
    for k, v in raw.items():
        if v.shape != y.shape:
            raise ValidationError(f"predictor {k!r} has {v.size} values, outcome has {n}")
    if not y.std(ddof=1) > 0:
        raise ValidationError("outcome is constant")

    Z = np.column_stack([standardize(raw[k]) for k in names])
    Xs = np.column_stack([np.ones(n), Z])
    _check_conditioning(Xs)
    X = Xs if scale else np.column_stack([np.ones(n), *(raw[k] for k in names)])
    coef, fitted, resid = _ols(X, y)
    df_resid = n - p - 1
    sigma2 = float(resid @ resid) / df_resid
    cov = sigma2 * np.linalg.inv(X.T @ X)
    se = np.sqrt(np.diag(cov))
    tcrit = stats.t.ppf(0.5 + level / 2, df_resid)

    ys = standardize(y)
    coef_s, _, resid_s = _ols(Xs, ys)
    sigma2_s = float(resid_s @ resid_s) / df_resid
    se_s = np.sqrt(np.diag(sigma2_s * np.linalg.inv(Xs.T @ Xs)))

    r2 = _r2(y, resid)
    estimates = []
    for k, name in enumerate(names, start=1):
        if p == 1:
            r2_reduced = 0.0
        else:
            keep = [0] + [j for j in range(1, p + 1) if j != k]
            _, _, resid_red = _ols(X[:, keep], y)
            r2_reduced = _r2(y, resid_red)
        t_val = coef[k] / se[k] if se[k] > 0 else math.copysign(math.inf, coef[k])
        estimates.append(PredictorEstimate(
            name=name,
            b=float(coef[k]),
            b_se=float(se[k]),
            b_ci=(float(coef[k] - tcrit * se[k]), float(coef[k] + tcrit * se[k])),
            t=float(t_val),
            p=float(2 * stats.t.sf(abs(t_val), df_resid)),
            beta=float(coef_s[k]),
            beta_ci=(float(coef_s[k] - tcrit * se_s[k]), float(coef_s[k] + tcrit * se_s[k])),
            sr2=max(0.0, r2 - r2_reduced),
            r=float(np.corrcoef(raw[name], y)[0, 1]),
        ))

    f_stat = (r2 / p) / ((1 - r2) / df_resid) if r2 < 1 else math.inf
    return RegressionResult(
        predictors=tuple(estimates),
        intercept=float(coef[0]),
        intercept_se=float(se[0]),
        intercept_ci=(float(coef[0] - tcrit * se[0]), float(coef[0] + tcrit * se[0])),
        r2=r2,
        adj_r2=1 - (1 - r2) * (n - 1) / df_resid,
        f_stat=f_stat,
        f_pvalue=float(stats.f.sf(f_stat, p, df_resid)) if math.isfinite(f_stat) else 0.0,
        df_model=p,
        df_resid=df_resid,
        n=n,
        fitted=fitted,
        residuals=resid,
        means={k: float(v.mean()) for k, v in raw.items()},
        sds={k: float(v.std(ddof=1)) for k, v in raw.items()},
        scaled=scale,
    )
