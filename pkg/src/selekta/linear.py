"""OLS with the usual regression diagnostics and information criteria."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DegreesOfFreedomError, InputError, NumericalError
from .numeric import qr_inverse_gram, qr_least_squares


@dataclass
class OlsFit:
    subset: tuple
    intercept: float
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    residuals: np.ndarray
    rss: float
    tss: float
    sigma_hat: float
    r2: float
    adj_r2: float
    f_stat: float
    f_df: tuple
    f_pvalue: float
    dw: float
    intercept_se: float = float("nan")

    @property
    def n(self):
        return len(self.residuals)

    @property
    def k(self):
        """Parameter count including the intercept."""
        return len(self.subset) + 1

    def coef(self, code):
        return float(self.coefficients[self.subset.index(code)])

    def as_dict(self):
        return {
            "subset": list(self.subset),
            "intercept": self.intercept,
            "coefficients": dict(zip(self.subset, self.coefficients.tolist())),
            "standard_errors": dict(zip(self.subset, self.standard_errors.tolist())),
            "p_values": dict(zip(self.subset, self.p_values.tolist())),
            "rss": self.rss,
            "sigma_hat": self.sigma_hat,
            "r2": self.r2,
            "adj_r2": self.adj_r2,
            "f_stat": self.f_stat,
            "f_df": list(self.f_df),
            "dw": self.dw,
        }


@dataclass(frozen=True)
class InfoCriteria:
    cp: float
    aic: float
    bic: float


def ols(X, y, names) -> OlsFit:
    """Fit ``y ~ 1 + X`` and compute the full diagnostic block."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if p == 0:
        raise InputError("subset must contain at least one feature")
    k = p + 1
    if n <= k:
        raise DegreesOfFreedomError(f"need n > k, got n={n}, k={k}")
    D = np.column_stack([np.ones(n), X])
    beta = qr_least_squares(D, y, names=("(intercept)",) + tuple(names))
    resid = y - D @ beta
    rss = float(resid @ resid)
    yc = y - y.mean()
    tss = float(yc @ yc)
    df = n - k
    s2 = rss / df
    se = np.sqrt(s2 * np.diag(qr_inverse_gram(D)))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = beta / se
    pv = 2.0 * stats.t.sf(np.abs(t), df)
    r2 = 1.0 - rss / tss
    adj = 1.0 - (1.0 - r2) * (n - 1) / df
    with np.errstate(divide="ignore"):
        f = ((tss - rss) / p) / s2 if s2 > 0 else math.inf
    fp = float(stats.f.sf(f, p, df)) if math.isfinite(f) else 0.0
    try:
        dw = durbin_watson(resid)
    except NumericalError:
        dw = float("nan")
    return OlsFit(
        subset=tuple(names),
        intercept=float(beta[0]),
        coefficients=beta[1:],
        standard_errors=se[1:],
        t_stats=t[1:],
        p_values=pv[1:],
        residuals=resid,
        rss=rss,
        tss=tss,
        sigma_hat=math.sqrt(s2),
        r2=r2,
        adj_r2=adj,
        f_stat=float(f),
        f_df=(p, df),
        f_pvalue=fp,
        dw=dw,
        intercept_se=float(se[0]),
    )


def ols_fit(data, subset) -> OlsFit:
    """OLS of the standardized response on ``subset`` (kept in dataset order)."""
    subset = data.order(subset)
    return ols(data.columns(subset), data.y, subset)


def durbin_watson(residuals) -> float:
    e = np.asarray(residuals, dtype=float)
    if e.size < 2:
        raise InputError("Durbin-Watson needs at least 2 residuals")
    ss = float(e @ e)
    if ss == 0.0:
        raise NumericalError("Durbin-Watson undefined for zero residual sum of squares")
    d = np.diff(e)
    return float(d @ d) / ss


def criteria(rss, n, k, s2_full) -> InfoCriteria:
    """Mallows' Cp, AIC and BIC for a model with ``k`` parameters (intercept counted).

    AIC and BIC use the Gaussian log-likelihood with the error variance as
    one further parameter, so the penalty counts ``k + 1``.
    """
    if n <= k:
        raise DegreesOfFreedomError(f"need n > k, got n={n}, k={k}")
    ll = n * math.log(2.0 * math.pi * rss / n) + n
    return InfoCriteria(
        cp=rss / s2_full - n + 2 * k,
        aic=ll + 2 * (k + 1),
        bic=ll + math.log(n) * (k + 1),
    )


def info_criteria(fit: OlsFit, full_fit: OlsFit, n=None) -> InfoCriteria:
    n = fit.n if n is None else n
    return criteria(fit.rss, n, fit.k, full_fit.sigma_hat ** 2)


def gaussian_aic(rss, n, k, penalty=2.0):
    """AIC-style score with a configurable per-parameter penalty."""
    return n * math.log(2.0 * math.pi * rss / n) + n + penalty * (k + 1)


def intercept_only_rss(y):
    yc = np.asarray(y) - np.mean(y)
    return float(yc @ yc)


def cv_rmse(X, y, folds) -> float:
    """Mean over folds of held-out RMSE for OLS with intercept on columns of ``X``."""
    X = np.asarray(X, dtype=float)
    errs = []
    for train, test in folds.splits():
        D = np.column_stack([np.ones(len(train)), X[train]])
        beta = qr_least_squares(D, y[train])
        pred = beta[0] + X[test] @ beta[1:]
        r = y[test] - pred
        errs.append(math.sqrt(float(r @ r) / len(test)))
    return float(np.mean(errs))


def significance_stars(p):
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""
