"""LASSO by cyclic coordinate descent, with a CV-tuned penalty.

The objective is ``(1/(2n)) * ||y - X b||^2 + lam * ||b||_1``. The intercept
is not penalized; it is absorbed by centering ``X`` and ``y`` on the rows
being fitted and recovered afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputError
from .linear import ols_fit


def soft_threshold(z, t):
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


def objective(X, y, beta, lam):
    r = y - X @ beta
    return float(r @ r) / (2 * len(y)) + lam * float(np.abs(beta).sum())


def lasso_coordinate_descent(X, y, lam, beta0=None, tol=1e-9, max_sweeps=100_000, history=None):
    """Minimize the LASSO objective over ``beta`` for already-centered ``X``, ``y``.

    Converged when the largest coefficient change in a sweep is below ``tol``.
    If ``history`` is a list, the objective after each sweep is appended.
    """
    if lam < 0:
        raise InputError(f"penalty must be non-negative, got {lam}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    G = X.T @ X / n
    c = X.T @ y / n
    diag = np.diag(G).copy()
    beta = np.zeros(p) if beta0 is None else np.array(beta0, dtype=float)
    active = diag > 0
    gap = math.inf
    for _ in range(max_sweeps):
        gap = 0.0
        for j in range(p):
            if not active[j]:
                continue
            old = beta[j]
            z = c[j] - G[j] @ beta + diag[j] * old
            new = math.copysign(max(abs(z) - lam, 0.0), z) / diag[j]
            if new != old:
                beta[j] = new
                gap = max(gap, abs(new - old))
        if history is not None:
            history.append(objective(X, y, beta, lam))
        if gap < tol:
            return beta
    raise ConvergenceError(f"coordinate descent did not converge in {max_sweeps} sweeps", gap=gap)


def kkt_violation(X, y, beta, lam, zero_tol=0.0):
    """Largest violation of the LASSO stationarity conditions.

    For zero coefficients the gradient must satisfy ``|g_j| <= lam``; for
    nonzero ones ``g_j = lam * sign(b_j)``, with ``g = X^T r / n``.
    """
    n = len(y)
    g = X.T @ (y - X @ beta) / n
    viol = 0.0
    for j, b in enumerate(beta):
        if abs(b) <= zero_tol:
            viol = max(viol, abs(g[j]) - lam)
        else:
            viol = max(viol, abs(g[j] - lam * math.copysign(1.0, b)))
    return max(viol, 0.0)


def lambda_max(X, y):
    Xc = X - X.mean(axis=0)
    yc = y - y.mean()
    return float(np.max(np.abs(Xc.T @ yc)) / len(y))


def lambda_grid(lmax, size=100, ratio=1e-4):
    return np.exp(np.linspace(math.log(lmax), math.log(lmax * ratio), size))


@dataclass
class LassoPath:
    lambdas: np.ndarray
    coefficients: np.ndarray  # (len(lambdas), p)
    intercepts: np.ndarray

    @property
    def nonzero_counts(self):
        return (self.coefficients != 0).sum(axis=1)


def lasso_path(X, y, lambdas, tol=1e-9) -> LassoPath:
    """Warm-started solutions along a descending penalty grid."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    xm, ym = X.mean(axis=0), y.mean()
    Xc, yc = X - xm, y - ym
    beta = np.zeros(X.shape[1])
    coefs = []
    for lam in lambdas:
        beta = lasso_coordinate_descent(Xc, yc, lam, beta0=beta, tol=tol)
        coefs.append(beta.copy())
    coefs = np.array(coefs)
    return LassoPath(np.asarray(lambdas, dtype=float), coefs, ym - coefs @ xm)


@dataclass
class LassoCvResult:
    lambda_star: float
    lambdas: np.ndarray
    cv_rmse: np.ndarray
    codes: tuple
    coefficients: np.ndarray
    intercept: float

    @property
    def selected_support(self):
        return tuple(c for c, b in zip(self.codes, self.coefficients) if b != 0.0)

    def coef(self, code):
        return float(self.coefficients[self.codes.index(code)])


def lasso_fixed(data, lam) -> LassoCvResult:
    """LASSO on the full dataset at a given penalty (no tuning)."""
    path = lasso_path(data.X, data.y, [lam])
    return LassoCvResult(float(lam), np.array([lam]), np.array([np.nan]),
                         tuple(data.feature_codes), path.coefficients[0], float(path.intercepts[0]))


def lasso_cv(data, folds, grid_size=100, ratio=1e-4) -> LassoCvResult:
    """Pick the penalty with the lowest mean held-out RMSE over ``folds``.

    The grid is log-spaced from the full-data ``lambda_max`` down to
    ``lambda_max * ratio``. Ties go to the larger penalty.
    """
    X, y = data.X, data.y
    grid = lambda_grid(lambda_max(X, y), grid_size, ratio)
    errs = np.zeros((folds.k, len(grid)))
    for f, (train, test) in enumerate(folds.splits()):
        if np.ptp(y[train]) == 0.0:
            raise InputError(f"fold {f}: training response is constant")
        path = lasso_path(X[train], y[train], grid)
        pred = path.intercepts[:, None] + path.coefficients @ X[test].T
        errs[f] = np.sqrt(np.mean((pred - y[test]) ** 2, axis=1))
    mean = errs.mean(axis=0)
    best = int(np.argmin(mean))
    full = lasso_path(X, y, grid[: best + 1])
    return LassoCvResult(float(grid[best]), grid, mean, tuple(data.feature_codes),
                         full.coefficients[-1], float(full.intercepts[-1]))


def post_lasso_ols(data, support):
    """Unpenalized OLS refit on the LASSO support."""
    if not support:
        raise InputError("post-LASSO refit needs a non-empty support")
    return ols_fit(data, support)
