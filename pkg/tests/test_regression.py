import numpy as np
import pytest
import statsmodels.api as sm
from hypothesis import given, settings
from hypothesis import strategies as st

from valueprobe.errors import ValidationError
from valueprobe.metrics import CollinearityError, frequency_regression, standardize


def normal_equations(X, y):
    X1 = np.column_stack([np.ones(len(y)), X])
    return np.linalg.solve(X1.T @ X1, X1.T @ y)


def r2_of(X, y):
    coef = normal_equations(X, y)
    resid = y - np.column_stack([np.ones(len(y)), X]) @ coef
    return 1 - resid @ resid / ((y - y.mean()) @ (y - y.mean()))


def test_planted_coefficients_recovered_exactly():
    rng = np.random.default_rng(0)
    x1, x2 = rng.normal(size=10), rng.normal(size=10)
    y = 2 * x1 + 3 * x2 + 7
    res = frequency_regression(y, {"x1": x1, "x2": x2}, scale=False)
    assert [p.b for p in res.predictors] == pytest.approx([2, 3], abs=1e-9)
    assert res.intercept == pytest.approx(7, abs=1e-9)
    assert res.r2 == pytest.approx(1, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.booleans())
def test_matches_normal_equations(seed, p, scale):
    rng = np.random.default_rng(seed)
    n = 10
    X = rng.normal(size=(n, p)) * rng.uniform(0.5, 50, size=p)
    y = X @ rng.normal(size=p) + rng.normal(size=n) * 3 + 100
    names = [f"x{k}" for k in range(p)]
    res = frequency_regression(y, dict(zip(names, X.T)), scale=scale)
    design = np.column_stack([standardize(c) for c in X.T]) if scale else X
    oracle = normal_equations(design, y)
    assert res.coef() == pytest.approx(oracle, abs=1e-9 * max(1.0, np.abs(oracle).max()))
    assert res.predict(dict(zip(names, X.T))) == pytest.approx(res.fitted, abs=1e-9)
    sse = res.residuals @ res.residuals
    assert res.r2 == pytest.approx(1 - sse / ((y - y.mean()) @ (y - y.mean())), abs=1e-12)
    # sr2 is the R^2 lost when a predictor is dropped
    for k, est in enumerate(res.predictors):
        reduced = r2_of(np.delete(X, k, axis=1), y) if p > 1 else 0.0
        assert est.sr2 == pytest.approx(max(0.0, r2_of(X, y) - reduced), abs=1e-9)
        assert 0 <= est.sr2 <= res.r2 + 1e-12
        assert est.r == pytest.approx(np.corrcoef(X[:, k], y)[0, 1], abs=1e-12)


def test_matches_statsmodels_inference():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(10, 2))
    y = 850 + 120 * X[:, 0] - 40 * X[:, 1] + rng.normal(scale=60, size=10)
    res = frequency_regression(y, {"freq": X[:, 0], "pref": X[:, 1]})
    Z = sm.add_constant(np.column_stack([standardize(X[:, 0]), standardize(X[:, 1])]))
    fit = sm.OLS(y, Z).fit()
    ci = fit.conf_int(0.05)
    assert res.coef() == pytest.approx(fit.params, abs=1e-9)
    assert [p.b_se for p in res.predictors] == pytest.approx(fit.bse[1:], abs=1e-9)
    assert [p.b_ci[0] for p in res.predictors] == pytest.approx(ci[1:, 0], abs=1e-9)
    assert [p.p for p in res.predictors] == pytest.approx(fit.pvalues[1:], abs=1e-9)
    assert res.r2 == pytest.approx(fit.rsquared, abs=1e-12)
    assert res.adj_r2 == pytest.approx(fit.rsquared_adj, abs=1e-12)
    assert res.f_stat == pytest.approx(fit.fvalue, rel=1e-9)
    assert res.f_pvalue == pytest.approx(fit.f_pvalue, abs=1e-12)
    fit_s = sm.OLS(standardize(y), Z).fit()
    assert [p.beta for p in res.predictors] == pytest.approx(fit_s.params[1:], abs=1e-9)


def test_beta_equals_b_when_outcome_standardized():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(10, 2))
    y = standardize(X @ [1.0, -2.0] + rng.normal(size=10))
    res = frequency_regression(y, {"a": X[:, 0], "b": X[:, 1]})
    for p in res.predictors:
        assert p.beta == pytest.approx(p.b, abs=1e-12)


def test_collinear_predictors_rejected():
    x = np.arange(10.0)
    with pytest.raises(CollinearityError):
        frequency_regression(x ** 2, {"a": x, "b": 2 * x + 1})


@pytest.mark.parametrize("outcome, predictors", [
    (np.ones(10), {"a": np.arange(10.0)}),
    (np.arange(3.0), {"a": np.arange(3.0), "b": np.arange(3.0) ** 2}),
    (np.arange(10.0), {}),
    (np.arange(10.0), {"a": np.arange(9.0)}),
])
def test_invalid_inputs(outcome, predictors):
    with pytest.raises(ValidationError):
        frequency_regression(outcome, predictors)
