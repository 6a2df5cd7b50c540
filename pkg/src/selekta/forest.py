"""Regression forests, OOB permutation importance and Boruta.

Tree growing, prediction and importance are compiled with numba. Random
draws inside the kernels come from a counter-based generator: draw ``i`` of
tree ``t`` is ``splitmix64(key, t, i)`` where ``key`` is taken from the
caller's :class:`~selekta.numeric.RngStream`. Tree ``t`` therefore depends
only on the key and its own index, the same guarantee a per-tree substream
gives, without building 500 generator objects per forest.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy import stats

from .errors import InputError
from .selection import SelectionResult

log = logging.getLogger(__name__)

LEAF = -1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


@numba.njit(cache=True)
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@numba.njit(cache=True)
def _uniform(key, stream, counter):
    """Uniform on [0, 1) addressed by ``(key, stream, counter)``."""
    z = _mix(key + _mix(np.uint64(stream) * _GOLDEN + np.uint64(counter)))
    return (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@numba.njit(cache=True)
def _below(key, stream, counter, n):
    """Uniform integer in ``[0, n)``."""
    return min(int(_uniform(key, stream, counter) * n), n - 1)


@numba.njit(cache=True)
def _grow_tree(X, y, order, weight, key, stream, min_node_size, mtry,
               feature, threshold, left, right, value):
    """Grow one tree into preallocated node arrays; returns the node count.

    ``weight[i]`` is how often row ``i`` was drawn into the tree's sample and
    ``order[:, f]`` lists all rows sorted by feature ``f``, so a node's rows
    come out sorted by a linear scan instead of a sort.
    """
    max_nodes = feature.shape[0]
    n, p = X.shape
    member = np.full(n, -1, np.int64)
    idx = np.empty(n, np.int64)
    cnt = 0
    for i in range(n):
        if weight[i] > 0:
            idx[cnt] = i
            member[i] = 0
            cnt += 1
    feats = np.arange(p)
    stack_nodes = np.empty(max_nodes, np.int64)
    stack_lo = np.empty(max_nodes, np.int64)
    stack_hi = np.empty(max_nodes, np.int64)
    stack_nodes[0] = 0
    stack_lo[0] = 0
    stack_hi[0] = cnt
    top = 1
    n_nodes = 1
    counter = 0
    while top > 0:
        top -= 1
        node = stack_nodes[top]
        lo = stack_lo[top]
        hi = stack_hi[top]
        m = 0
        s = 0.0
        for i in range(lo, hi):
            r = idx[i]
            m += weight[r]
            s += weight[r] * y[r]
        value[node] = s / m
        feature[node] = LEAF
        if m < 2 * min_node_size or n_nodes + 2 > max_nodes:
            continue
        pure = True
        for i in range(lo + 1, hi):
            if y[idx[i]] != y[idx[lo]]:
                pure = False
                break
        if pure:
            continue
        # partial Fisher-Yates: the first mtry entries of feats are the candidates
        for c in range(mtry):
            k = c + _below(key, stream, counter, p - c)
            counter += 1
            tmp = feats[c]
            feats[c] = feats[k]
            feats[k] = tmp
        best_gain = -1.0
        best_f = -1
        best_thr = 0.0
        for c in range(mtry):
            f = feats[c]
            wl = 0
            sl = 0.0
            prev = -1
            for q in range(n):
                r = order[q, f]
                if member[r] != node:
                    continue
                if prev >= 0 and X[r, f] != X[prev, f] and wl >= min_node_size \
                        and m - wl >= min_node_size:
                    sr = s - sl
                    gain = sl * sl / wl + sr * sr / (m - wl)
                    if gain > best_gain:
                        best_gain = gain
                        best_f = f
                        best_thr = 0.5 * (X[prev, f] + X[r, f])
                wl += weight[r]
                sl += weight[r] * y[r]
                prev = r
        if best_f < 0 or best_gain <= s * s / m:
            continue
        i = lo
        j = hi - 1
        while i <= j:
            if X[idx[i], best_f] <= best_thr:
                i += 1
            else:
                t = idx[i]
                idx[i] = idx[j]
                idx[j] = t
                j -= 1
        feature[node] = best_f
        threshold[node] = best_thr
        l_node = n_nodes
        r_node = n_nodes + 1
        n_nodes += 2
        left[node] = l_node
        right[node] = r_node
        for q in range(lo, i):
            member[idx[q]] = l_node
        for q in range(i, hi):
            member[idx[q]] = r_node
        stack_nodes[top] = r_node
        stack_lo[top] = i
        stack_hi[top] = hi
        top += 1
        stack_nodes[top] = l_node
        stack_lo[top] = lo
        stack_hi[top] = i
        top += 1
    return n_nodes


@numba.njit(cache=True)
def _grow_forest(X, y, key, bootstrap, min_node_size, mtry, weights,
                 feature, threshold, left, right, value, counts):
    n, p = X.shape
    order = np.empty((n, p), np.int64)
    for f in range(p):
        order[:, f] = np.argsort(X[:, f], kind="mergesort")
    for t in range(weights.shape[0]):
        # stream 2t: bootstrap draws, stream 2t+1: split candidates
        if bootstrap:
            for i in range(n):
                weights[t, _below(key, 2 * t, i, n)] += 1
        else:
            weights[t, :] = 1
        counts[t] = _grow_tree(X, y, order, weights[t], key, 2 * t + 1, min_node_size, mtry,
                               feature[t], threshold[t], left[t], right[t], value[t])


@numba.njit(cache=True)
def _predict_row(x, feature, threshold, left, right, value):
    node = 0
    while feature[node] != LEAF:
        if x[feature[node]] <= threshold[node]:
            node = left[node]
        else:
            node = right[node]
    return value[node]


@numba.njit(cache=True)
def _predict_trees(X, feature, threshold, left, right, value):
    T = feature.shape[0]
    n = X.shape[0]
    out = np.empty((T, n))
    for t in range(T):
        for i in range(n):
            out[t, i] = _predict_row(X[i], feature[t], threshold[t], left[t], right[t], value[t])
    return out


@numba.njit(cache=True)
def _permutation_deltas(X, y, weights, key, feature, threshold, left, right, value):
    """Per tree and feature: OOB MSE after permuting the feature minus OOB MSE."""
    T = feature.shape[0]
    n, p = X.shape
    deltas = np.zeros((T, p))
    rows = np.empty(n, np.int64)
    perm = np.empty(n, np.int64)
    x = np.empty(p)
    used = np.zeros(p, np.bool_)
    for t in range(T):
        m = 0
        for i in range(n):
            if weights[t, i] == 0:
                rows[m] = i
                m += 1
        if m == 0:
            continue
        base = 0.0
        for r in range(m):
            e = y[rows[r]] - _predict_row(X[rows[r]], feature[t], threshold[t], left[t], right[t], value[t])
            base += e * e
        base /= m
        used[:] = False
        for node in range(feature.shape[1]):
            if feature[t, node] >= 0:
                used[feature[t, node]] = True
        for j in range(p):
            if not used[j]:
                continue
            for r in range(m):
                perm[r] = rows[r]
            stream = t * p + j
            for r in range(m - 1, 0, -1):
                k = _below(key, stream, r, r + 1)
                tmp = perm[r]
                perm[r] = perm[k]
                perm[k] = tmp
            err = 0.0
            for r in range(m):
                for c in range(p):
                    x[c] = X[rows[r], c]
                x[j] = X[perm[r], j]
                e = y[rows[r]] - _predict_row(x, feature[t], threshold[t], left[t], right[t], value[t])
                err += e * e
            deltas[t, j] = err / m - base
    return deltas


def _key(rng):
    return np.uint64(rng.bits(1)[0])


@dataclass
class ForestModel:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    node_counts: np.ndarray
    inbag: np.ndarray  # (n_trees, n) times each row was drawn
    min_node_size: int
    mtry: int

    @property
    def n_trees(self):
        return self.feature.shape[0]

    @property
    def oob(self):
        return self.inbag == 0

    def tree_predictions(self, X):
        return _predict_trees(np.ascontiguousarray(X, dtype=float), self.feature, self.threshold,
                              self.left, self.right, self.value)

    def predict(self, X):
        return self.tree_predictions(X).mean(axis=0)

    def used_features(self):
        f = self.feature[self.feature >= 0]
        return np.unique(f)


def default_mtry(p):
    return max(1, p // 3)


def forest_fit(X, y, rng, n_trees=500, mtry=None, min_node_size=5, bootstrap=True) -> ForestModel:
    """Grow a regression forest.

    Each tree sees a size-``n`` bootstrap sample (drawn with replacement)
    and, at every split, ``mtry`` features sampled without replacement. A
    split minimizes the summed squared error of the two children; thresholds
    are midpoints between neighbouring observed values and no child may hold
    fewer than ``min_node_size`` rows (counting bootstrap repeats).
    """
    X = np.ascontiguousarray(X, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    n, p = X.shape
    if min_node_size < 1 or n < min_node_size:
        raise InputError(f"need n >= min_node_size, got n={n}, min_node_size={min_node_size}")
    mtry = default_mtry(p) if mtry is None else int(mtry)
    if not 1 <= mtry <= p:
        raise InputError(f"mtry must lie in 1..{p}, got {mtry}")
    max_nodes = 2 * (n // min_node_size) + 1
    feature = np.full((n_trees, max_nodes), LEAF, dtype=np.int64)
    threshold = np.zeros((n_trees, max_nodes))
    left = np.full((n_trees, max_nodes), -1, dtype=np.int64)
    right = np.full((n_trees, max_nodes), -1, dtype=np.int64)
    value = np.zeros((n_trees, max_nodes))
    counts = np.zeros(n_trees, dtype=np.int64)
    inbag = np.zeros((n_trees, n), dtype=np.int64)
    _grow_forest(X, y, _key(rng), bool(bootstrap), min_node_size, mtry, inbag,
                 feature, threshold, left, right, value, counts)
    return ForestModel(feature, threshold, left, right, value, counts, inbag, min_node_size, mtry)


def permutation_importance(model: ForestModel, X, y, rng) -> np.ndarray:
    """OOB permutation importance in Z-score form.

    For each tree the feature's values are shuffled among that tree's
    out-of-bag rows; the increase in OOB mean squared error is averaged over
    trees and divided by its standard deviation across trees. Trees with no
    OOB rows are skipped; a feature whose increase is identically zero gets
    importance 0.
    """
    X = np.ascontiguousarray(X, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    p = X.shape[1]
    deltas = _permutation_deltas(X, y, model.inbag, _key(rng), model.feature, model.threshold,
                                 model.left, model.right, model.value)
    has_oob = model.oob.any(axis=1)
    if not has_oob.all():
        log.warning("%d trees have no out-of-bag rows and were skipped", int((~has_oob).sum()))
    deltas = deltas[has_oob]
    mean = deltas.mean(axis=0)
    sd = deltas.std(axis=0, ddof=1) if len(deltas) > 1 else np.zeros(p)
    z = np.zeros(p)
    ok = sd > 0
    z[ok] = mean[ok] / sd[ok]
    return z


CONFIRMED, REJECTED, TENTATIVE = "Confirmed", "Rejected", "Tentative"


@dataclass
class BorutaState:
    codes: tuple
    status: dict
    hits: dict
    runs: int = 0
    alpha: float = 0.01
    history: list = field(default_factory=list)

    def with_status(self, status):
        return tuple(c for c in self.codes if self.status[c] == status)


def boruta_decide(hits, runs, alpha, n_undecided):
    """Two-sided binomial decision for one feature.

    Returns ``CONFIRMED`` when ``P(X >= hits) < alpha / n_undecided`` and
    ``REJECTED`` when ``P(X <= hits)`` is below the same bound, with
    ``X ~ Binomial(runs, 0.5)``; otherwise ``TENTATIVE``.
    """
    bound = alpha / max(n_undecided, 1)
    if stats.binom.sf(hits - 1, runs, 0.5) < bound:
        return CONFIRMED
    if stats.binom.cdf(hits, runs, 0.5) < bound:
        return REJECTED
    return TENTATIVE


def boruta(data, rng, max_runs=100, alpha=0.01, n_trees=500, min_node_size=5, min_shadows=5,
           X=None, y=None, codes=None) -> SelectionResult:
    """All-relevant selection against shuffled shadow features.

    Every run appends one freshly shuffled copy of each still-active real
    feature, grows a forest on the doubled design and compares each real
    feature's importance with the best shadow. After each run undecided
    features are tested with :func:`boruta_decide`. Rejected features leave
    the design; the loop ends when nothing is undecided or after
    ``max_runs`` runs. The selection is the Confirmed set.

    When fewer than ``min_shadows`` features remain active, the shadow set
    is doubled until it reaches that size (each copy shuffled on its own),
    so the last few survivors still face several shadows.
    """
    if X is None:
        X, y, codes = data.X, data.y, tuple(data.feature_codes)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    codes = tuple(codes)
    p = X.shape[1]
    state = BorutaState(codes, {c: TENTATIVE for c in codes}, {c: 0 for c in codes}, 0, alpha)
    for run in range(max_runs):
        active = [j for j in range(p) if state.status[codes[j]] != REJECTED]
        undecided = [j for j in active if state.status[codes[j]] == TENTATIVE]
        if not undecided:
            break
        sub = rng.substream(run)
        shadow_rng = sub.substream(0)
        sources = list(active)
        while len(sources) < min_shadows:
            sources += sources
        shadow = np.column_stack([shadow_rng.permutation(X[:, j]) for j in sources])
        design = np.column_stack([X[:, active], shadow])
        model = forest_fit(design, y, sub.substream(1), n_trees=n_trees, min_node_size=min_node_size)
        imp = permutation_importance(model, design, y, sub.substream(2))
        real, shade = imp[: len(active)], imp[len(active):]
        shadow_max = float(shade.max())
        state.runs += 1
        for pos, j in enumerate(active):
            if real[pos] > shadow_max:
                state.hits[codes[j]] += 1
        n_und = len(undecided)
        for j in undecided:
            c = codes[j]
            state.status[c] = boruta_decide(state.hits[c], state.runs, alpha, n_und)
        state.history.append({
            "run": run + 1,
            "shadow_max": shadow_max,
            "importance": {codes[j]: float(real[pos]) for pos, j in enumerate(active)},
        })
    return SelectionResult("boruta", state.with_status(CONFIRMED), state)
