"""PCA, principal component regression, PLS and IPW-PLS selection."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySelectionError, InputError
from .numeric import eig_symmetric, qr_least_squares
from .selection import SelectionResult

log = logging.getLogger(__name__)


@dataclass
class PcaModel:
    loadings: np.ndarray  # columns are components
    eigenvalues: np.ndarray
    center: np.ndarray

    @property
    def cumulative_variance(self):
        lam = np.clip(self.eigenvalues, 0.0, None)
        return np.cumsum(lam) / lam.sum()

    def scores(self, X, n_components=None):
        V = self.loadings if n_components is None else self.loadings[:, :n_components]
        return (np.asarray(X) - self.center) @ V


def pca(X) -> PcaModel:
    """Principal axes of the column covariance of ``X``.

    On standardized data this is the correlation matrix. Each loading vector
    is signed so its largest-magnitude entry is positive.
    """
    X = np.asarray(X, dtype=float)
    center = X.mean(axis=0)
    Xc = X - center
    S = Xc.T @ Xc / (X.shape[0] - 1)
    S = 0.5 * (S + S.T)
    vals, V = eig_symmetric(S)
    for a in range(V.shape[1]):
        i = int(np.argmax(np.abs(V[:, a])))
        if V[i, a] < 0:
            V[:, a] = -V[:, a]
    return PcaModel(V, vals, center)


def _pcr_coefficients(X, y, n_components):
    model = pca(X)
    T = model.scores(X, n_components)
    gamma = qr_least_squares(np.column_stack([np.ones(len(y)), T]), y)
    beta = model.loadings[:, :n_components] @ gamma[1:]
    intercept = gamma[0] - model.center @ beta
    return intercept, beta, model


@dataclass
class PcrFit:
    n_components: int
    rmsecv: np.ndarray  # index l-1 holds RMSECV with l components
    codes: tuple
    coefficients: np.ndarray
    intercept: float
    pca: PcaModel
    fitted: np.ndarray = field(repr=False, default=None)

    @property
    def cumulative_variance(self):
        return float(self.pca.cumulative_variance[self.n_components - 1])

    def coef(self, code):
        return float(self.coefficients[self.codes.index(code)])


def pcr_cv_rmse(X, y, folds, max_components):
    errs = np.zeros((folds.k, max_components))
    for f, (train, test) in enumerate(folds.splits()):
        model = pca(X[train])
        T_train = model.scores(X[train])
        T_test = model.scores(X[test])
        for l in range(1, max_components + 1):
            D = np.column_stack([np.ones(len(train)), T_train[:, :l]])
            g = qr_least_squares(D, y[train])
            pred = g[0] + T_test[:, :l] @ g[1:]
            errs[f, l - 1] = math.sqrt(np.mean((y[test] - pred) ** 2))
    return errs.mean(axis=0)


def pcr_fit(data, folds, n_components=None) -> PcrFit:
    """PCR with the component count chosen by minimum RMSECV.

    Passing ``n_components`` forces the count; RMSECV is still reported for
    every candidate. Coefficients are returned per original feature.
    """
    X, y = data.X, data.y
    p = X.shape[1]
    max_l = min(p, min(len(tr) for tr, _ in folds.splits()) - 2)
    rmsecv = pcr_cv_rmse(X, y, folds, max_l)
    if n_components is None:
        n_components = int(np.argmin(rmsecv)) + 1
    elif not 1 <= n_components <= p:
        raise InputError(f"n_components must be in 1..{p}, got {n_components}")
    intercept, beta, model = _pcr_coefficients(X, y, n_components)
    return PcrFit(n_components, rmsecv, tuple(data.feature_codes), beta, float(intercept),
                  model, intercept + X @ beta)


@dataclass
class PlsFit:
    n_components: int
    x_weights: np.ndarray  # (p, A)
    x_loadings: np.ndarray  # (p, A)
    y_loadings: np.ndarray  # (A,)
    scores: np.ndarray  # (n, A)
    coefficients: np.ndarray
    intercept: float

    def predict(self, X):
        return self.intercept + np.asarray(X) @ self.coefficients


def pls_fit(X, y, n_components) -> PlsFit:
    """Single-response PLS by NIPALS deflation."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if not 1 <= n_components <= p:
        raise InputError(f"n_components must be in 1..{p}, got {n_components}")
    xm, ym = X.mean(axis=0), y.mean()
    E, f = X - xm, y - ym
    scale = max(np.linalg.norm(X - xm), 1.0)
    W, P, Q, T = [], [], [], []
    for a in range(n_components):
        w = E.T @ f
        nw = np.linalg.norm(w)
        if nw <= 1e-12 * scale:
            log.warning("PLS stopped after %d of %d components: no covariance left", a, n_components)
            break
        w /= nw
        t = E @ w
        tt = t @ t
        pl = E.T @ t / tt
        q = (f @ t) / tt
        E = E - np.outer(t, pl)
        f = f - q * t
        W.append(w)
        P.append(pl)
        Q.append(q)
        T.append(t)
    if not W:
        raise InputError("no PLS component could be extracted")
    W, P, T = np.array(W).T, np.array(P).T, np.array(T).T
    Q = np.array(Q)
    B = W @ np.linalg.solve(P.T @ W, Q)
    return PlsFit(W.shape[1], W, P, Q, T, B, float(ym - xm @ B))


def pls_cv_rmse(X, y, folds, max_components):
    errs = np.zeros((folds.k, max_components))
    for f, (train, test) in enumerate(folds.splits()):
        for a in range(1, max_components + 1):
            fit = pls_fit(X[train], y[train], a)
            errs[f, a - 1] = math.sqrt(np.mean((y[test] - fit.predict(X[test])) ** 2))
    return errs.mean(axis=0)


def ipw_pls_select(data, folds, max_iterations=50, drop_threshold=None, max_components=10):
    """Iterative predictor weighting PLS.

    Each round fits PLS on the current (re-weighted) predictors with the
    component count picked by CV, computes importances
    ``z_j = |b_j| * sd(x_j)`` normalized to sum to one, multiplies each
    column by its importance and drops predictors whose importance falls
    below ``drop_threshold`` (default ``1 / (10 p)``). Stops after the first
    round that drops nothing, or after ``max_iterations``.
    """
    X = np.array(data.X, dtype=float)
    y = data.y
    p = X.shape[1]
    if drop_threshold is None:
        drop_threshold = 1.0 / (10 * p)
    alive = list(range(p))
    trace = []
    min_train = min(len(tr) for tr, _ in folds.splits())
    for it in range(max_iterations):
        Xa = X[:, alive]
        max_a = max(1, min(len(alive), max_components, min_train - 2))
        ncomp = int(np.argmin(pls_cv_rmse(Xa, y, folds, max_a))) + 1
        fit = pls_fit(Xa, y, ncomp)
        z = np.abs(fit.coefficients) * Xa.std(axis=0, ddof=1)
        if z.sum() <= 0:
            raise EmptySelectionError("IPW-PLS: all importances vanished")
        w = z / z.sum()
        X[:, alive] = Xa * w
        keep = [j for j, wj in zip(alive, w) if not wj < drop_threshold]
        trace.append({
            "iteration": it + 1,
            "n_components": ncomp,
            "weights": {data.feature_codes[j]: float(wj) for j, wj in zip(alive, w)},
            "dropped": [data.feature_codes[j] for j in alive if j not in keep],
        })
        if not keep:
            raise EmptySelectionError("IPW-PLS dropped every predictor")
        if len(keep) == len(alive):
            break
        alive = keep
    selected = tuple(data.feature_codes[j] for j in alive)
    return SelectionResult("ipw_pls", selected, trace)
