import math

import numpy as np
import pytest
from scipy import stats

from selekta.errors import DegreesOfFreedomError, InputError, NumericalError
from selekta.linear import (criteria, cv_rmse, durbin_watson, info_criteria, ols, ols_fit,
                            significance_stars)
from selekta.dataset import make_folds
from selekta.numeric import RngStream

from conftest import planted


def test_ols_against_textbook_formulas():
    g = np.random.default_rng(11)
    X = g.normal(size=(30, 3))
    y = 1.0 + X @ [0.5, -1.0, 0.0] + 0.3 * g.normal(size=30)
    fit = ols(X, y, ["a", "b", "c"])
    D = np.column_stack([np.ones(30), X])
    beta = np.linalg.solve(D.T @ D, D.T @ y)
    resid = y - D @ beta
    s2 = resid @ resid / 26
    se = np.sqrt(s2 * np.diag(np.linalg.inv(D.T @ D)))
    assert np.isclose(fit.intercept, beta[0], atol=1e-12)
    assert np.allclose(fit.coefficients, beta[1:], atol=1e-12)
    assert np.allclose(fit.standard_errors, se[1:], atol=1e-12)
    assert np.allclose(fit.p_values, 2 * stats.t.sf(np.abs(beta[1:] / se[1:]), 26), atol=1e-12)
    tss = np.sum((y - y.mean()) ** 2)
    r2 = 1 - resid @ resid / tss
    assert np.isclose(fit.r2, r2)
    assert np.isclose(fit.adj_r2, 1 - (1 - r2) * 29 / 26)
    assert np.isclose(fit.f_stat, (r2 / 3) / ((1 - r2) / 26))
    assert fit.f_df == (3, 26)
    assert np.isclose(fit.sigma_hat, math.sqrt(s2))


def test_ols_fit_keeps_dataset_order():
    data = planted(0)
    fit = ols_fit(data, ["x3", "x1"])
    assert fit.subset == ("x1", "x3")
    assert fit.k == 3 and fit.n == data.n


def test_ols_needs_degrees_of_freedom():
    g = np.random.default_rng(0)
    with pytest.raises(DegreesOfFreedomError):
        ols(g.normal(size=(4, 3)), g.normal(size=4), ["a", "b", "c"])
    with pytest.raises(InputError):
        ols(np.empty((5, 0)), np.ones(5), [])


def test_durbin_watson_alternating_and_constant():
    e = np.array([1.0, -1.0] * 16)
    assert durbin_watson(e) == pytest.approx(3.875, abs=1e-12)
    assert durbin_watson(np.full(10, 0.3)) == 0.0
    with pytest.raises(NumericalError):
        durbin_watson(np.zeros(5))
    with pytest.raises(InputError):
        durbin_watson([1.0])


def test_durbin_watson_bounds():
    e = np.random.default_rng(5).normal(size=200)
    assert 0.0 <= durbin_watson(e) <= 4.0
    assert abs(durbin_watson(e) - 2.0) < 0.5


def test_full_model_cp_equals_parameter_count(surrogate):
    full = ols_fit(surrogate, surrogate.feature_codes)
    assert info_criteria(full, full).cp == pytest.approx(13.0, abs=1e-10)


def test_criteria_formula():
    # rss 8, n 32, k 8, s2_full 0.3
    ic = criteria(8.0, 32, 8, 0.3)
    ll = 32 * math.log(2 * math.pi * 8 / 32) + 32
    assert ic.cp == pytest.approx(8 / 0.3 - 32 + 16)
    assert ic.aic == pytest.approx(ll + 18)
    assert ic.bic == pytest.approx(ll + 9 * math.log(32))


def test_cv_rmse_matches_manual_loop():
    data = planted(3, n=25, p=3)
    folds = make_folds(25, 5, RngStream(1))
    errs = []
    for train, test in folds.splits():
        D = np.column_stack([np.ones(len(train)), data.X[train]])
        b = np.linalg.lstsq(D, data.y[train], rcond=None)[0]
        pred = np.column_stack([np.ones(len(test)), data.X[test]]) @ b
        errs.append(np.sqrt(np.mean((data.y[test] - pred) ** 2)))
    assert cv_rmse(data.X, data.y, folds) == pytest.approx(np.mean(errs), abs=1e-12)


@pytest.mark.parametrize("p,stars", [(0.005, "***"), (0.01, "**"), (0.049, "**"), (0.05, "*"),
                                     (0.0999, "*"), (0.1, ""), (0.5, "")])
def test_significance_stars(p, stars):
    assert significance_stars(p) == stars
