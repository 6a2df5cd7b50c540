"""Explicit subset search: exhaustive best subset, AIC stepwise, RFE."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .linear import gaussian_aic, intercept_only_rss, ols
from .numeric import qr_least_squares
from .selection import SelectionResult, SubsetScorer, indices_to_mask, mask_to_indices

__all__ = ["SelectionResult", "SubsetScorer", "SubsetScore", "best_subset", "stepwise_aic", "rfe"]


@dataclass(frozen=True)
class SubsetScore:
    subset: tuple
    cv_rmse: float
    adj_r2: float


def _rss(X, y, cols):
    if not cols:
        return intercept_only_rss(y)
    D = np.column_stack([np.ones(len(y)), X[:, cols]])
    r = y - D @ qr_least_squares(D, y)
    return float(r @ r)


def _subset_key(mask, p):
    """Lexicographic order on the sorted column indices of a subset."""
    return tuple(mask_to_indices(mask, p))


def best_subset(data, folds, max_features=20, scorer=None) -> SelectionResult:
    """Exhaustive search over all non-empty subsets by mean CV RMSE.

    Ties go to the lexicographically smallest subset in schema order. The
    trace lists, per subset size, the best subset by CV RMSE and the best by
    in-sample RSS.
    """
    p = data.p
    if p > max_features:
        raise InputError(f"exhaustive search limited to p <= {max_features}, got {p}")
    scorer = scorer or SubsetScorer(data, folds)
    n = data.n
    tss = intercept_only_rss(data.y)
    best_cv = {}
    best_rss = {}
    for mask in range(1, 1 << p):
        size = bin(mask).count("1")
        score = scorer(mask)
        key = (score, _subset_key(mask, p))
        if size not in best_cv or key < best_cv[size][0]:
            best_cv[size] = (key, mask)
        rss = _rss(data.X, data.y, mask_to_indices(mask, p))
        rkey = (rss, _subset_key(mask, p))
        if size not in best_rss or rkey < best_rss[size][0]:
            best_rss[size] = (rkey, mask)
    winner = min(best_cv.values())[1]
    trace = []
    for size in range(1, p + 1):
        (cv, _), m = best_cv[size]
        (rss, _), mr = best_rss[size]
        df = n - size - 1
        adj = 1.0 - (rss / tss) * (n - 1) / df if df > 0 else float("nan")
        trace.append({
            "size": size,
            "best_cv": SubsetScore(scorer.codes(m), cv, float("nan")),
            "best_rss": SubsetScore(scorer.codes(mr), scorer(mr), adj),
            "rss": rss,
        })
    return SelectionResult("best_subset", scorer.codes(winner), trace)


def stepwise_aic(data, penalty=2.0, start=None) -> SelectionResult:
    """Bidirectional stepwise search on the Gaussian AIC.

    Starts from ``start`` (default: all features). Every step scores each
    single removal and each single addition and takes the lowest-scoring
    move if it beats the current model; otherwise stops. ``penalty`` is the
    per-parameter charge (2 gives AIC, ``log(n)`` gives BIC). The empty
    slope set (intercept only) is a legal state.
    """
    X, y, n, p = data.X, data.y, data.n, data.p
    current = list(range(p)) if start is None else sorted(data.index(start))

    def score(cols):
        return gaussian_aic(_rss(X, y, cols), n, len(cols) + 1, penalty)

    cur = score(current)
    path = [{"move": None, "subset": tuple(data.feature_codes[j] for j in current), "aic": cur}]
    while True:
        moves = [("-", j, [c for c in current if c != j]) for j in current]
        moves += [("+", j, sorted(current + [j])) for j in range(p) if j not in current]
        moves = [m for m in moves if len(m[2]) < n - 2]
        if not moves:
            break
        scored = [(score(cols), i) for i, (_, _, cols) in enumerate(moves)]
        val, i = min(scored)
        if not val < cur:
            break
        sign, j, current = moves[i]
        cur = val
        path.append({"move": f"{sign}{data.feature_codes[j]}",
                     "subset": tuple(data.feature_codes[c] for c in current), "aic": cur})
    return SelectionResult("stepwise", tuple(data.feature_codes[j] for j in current), path)


def elimination_sequence(X, y, order_names=None):
    """Nested sets from recursive elimination by smallest ``|t|``.

    Returns a list ``sets`` where ``sets[s]`` is the surviving column list of
    size ``s`` (``sets[0]`` is empty) and the order in which columns left.
    Ties in ``|t|`` remove the column later in schema order.
    """
    p = X.shape[1]
    current = list(range(p))
    sets = {p: list(current)}
    dropped = []
    while len(current) > 1:
        fit = ols(X[:, current], y, [str(c) for c in current])
        t = np.abs(fit.t_stats)
        low = t.min()
        worst = max(i for i, v in enumerate(t) if v == low)
        dropped.append(current.pop(worst))
        sets[len(current)] = list(current)
    return sets, dropped


def rfe(data, folds, candidate_sizes=None) -> SelectionResult:
    """Recursive feature elimination with the final size chosen by CV.

    Inside each fold the ranking and pruning use only training rows; each
    candidate size is scored on the held-out rows. The chosen size is the
    one with the lowest mean RMSE (ties go to the smaller size) and the
    returned features are the survivors at that size when eliminating on
    the full data.
    """
    X, y, p = data.X, data.y, data.p
    sizes = sorted(set(range(1, p + 1) if candidate_sizes is None else candidate_sizes))
    if not sizes or sizes[0] < 1 or sizes[-1] > p:
        raise InputError(f"candidate sizes must lie in 1..{p}")
    errs = np.zeros((folds.k, len(sizes)))
    for f, (train, test) in enumerate(folds.splits()):
        sets, _ = elimination_sequence(X[train], y[train])
        for i, s in enumerate(sizes):
            cols = sets[s]
            D = np.column_stack([np.ones(len(train)), X[train][:, cols]])
            beta = qr_least_squares(D, y[train])
            pred = beta[0] + X[test][:, cols] @ beta[1:]
            errs[f, i] = math.sqrt(np.mean((y[test] - pred) ** 2))
    mean = errs.mean(axis=0)
    best = sizes[int(np.argmin(mean))]
    sets, dropped = elimination_sequence(X, y)
    selected = tuple(data.feature_codes[j] for j in sorted(sets[best]))
    trace = {
        "cv_rmse": {s: float(v) for s, v in zip(sizes, mean)},
        "elimination_order": [data.feature_codes[j] for j in dropped],
        "size": best,
    }
    return SelectionResult("rfe", selected, trace)
