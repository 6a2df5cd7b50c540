import numpy as np
import pytest

from selekta.errors import InputError
from selekta.forest import (CONFIRMED, REJECTED, TENTATIVE, boruta, boruta_decide, default_mtry,
                            forest_fit, permutation_importance)
from selekta.numeric import RngStream


def _planted(seed, n=100, noise=1.0):
    g = np.random.default_rng(seed)
    X = g.normal(size=(n, 6))
    return X, 2 * X[:, 0] + noise * g.normal(size=n)


def test_stump_predicts_training_mean():
    X, y = _planted(0, n=20)
    model = forest_fit(X, y, RngStream(0), n_trees=1, min_node_size=20, bootstrap=False)
    assert np.allclose(model.predict(X), y.mean())
    assert model.node_counts[0] == 1


def test_deterministic_signal_is_learned():
    g = np.random.default_rng(1)
    X = g.normal(size=(100, 6))
    y = X[:, 0].copy()
    model = forest_fit(X, y, RngStream(1))
    r = y - model.predict(X)
    assert 1 - r @ r / np.sum((y - y.mean()) ** 2) > 0.9


def test_same_seed_same_forest():
    X, y = _planted(2)
    a = forest_fit(X, y, RngStream(5), n_trees=50)
    b = forest_fit(X, y, RngStream(5), n_trees=50)
    for field in ("feature", "threshold", "value", "inbag"):
        assert np.array_equal(getattr(a, field), getattr(b, field))
    c = forest_fit(X, y, RngStream(6), n_trees=50)
    assert not np.array_equal(a.threshold, c.threshold)


def test_tree_index_addressing():
    X, y = _planted(3)
    small = forest_fit(X, y, RngStream(5), n_trees=10)
    large = forest_fit(X, y, RngStream(5), n_trees=40)
    assert np.array_equal(small.threshold, large.threshold[:10])


def test_leaves_respect_min_node_size():
    X, y = _planted(4)
    model = forest_fit(X, y, RngStream(0), n_trees=20, min_node_size=7)
    for t in range(model.n_trees):
        w = model.inbag[t]
        leaf_weight = {}
        for i in np.flatnonzero(w):
            node = 0
            while model.feature[t, node] >= 0:
                f = model.feature[t, node]
                node = model.left[t, node] if X[i, f] <= model.threshold[t, node] else model.right[t, node]
            leaf_weight[node] = leaf_weight.get(node, 0) + w[i]
        assert min(leaf_weight.values()) >= 7


def test_thresholds_are_midpoints():
    X, y = _planted(5, n=40)
    model = forest_fit(X, y, RngStream(0), n_trees=5)
    for t in range(5):
        for node in np.flatnonzero(model.feature[t] >= 0):
            f, thr = model.feature[t, node], model.threshold[t, node]
            vals = np.unique(X[:, f])
            # some pair of observed values straddles thr with thr as their midpoint
            partner = 2 * thr - vals[vals <= thr]
            assert np.isclose(partner[:, None], vals[vals > thr][None, :], rtol=0, atol=1e-12).any()


def test_training_fit_beats_constant():
    X, y = _planted(6)
    pred = forest_fit(X, y, RngStream(0), n_trees=50).predict(X)
    assert np.sum((y - pred) ** 2) <= np.sum((y - y.mean()) ** 2)


def test_argument_checks():
    X, y = _planted(7, n=10)
    with pytest.raises(InputError):
        forest_fit(X, y, RngStream(0), min_node_size=11)
    with pytest.raises(InputError):
        forest_fit(X, y, RngStream(0), mtry=7)
    assert default_mtry(12) == 4 and default_mtry(2) == 1


def test_unused_feature_importance_is_zero():
    X, y = _planted(8)
    X = np.column_stack([X, np.zeros(len(y))])
    model = forest_fit(X, y, RngStream(0), n_trees=50)
    z = permutation_importance(model, X, y, RngStream(1))
    assert z[-1] == 0.0


def test_importance_ranks_signal_first():
    top, quiet = 0, 0
    for seed in range(20):
        X, y = _planted(seed)
        model = forest_fit(X, y, RngStream(seed), n_trees=200)
        z = permutation_importance(model, X, y, RngStream(seed + 1000))
        top += int(np.argmax(z) == 0)
        quiet += int(abs(z[3]) < 2)
    assert top >= 19
    assert quiet >= 18


def test_boruta_decision_rule():
    assert boruta_decide(20, 20, 0.01, 1) == CONFIRMED
    assert boruta_decide(0, 20, 0.01, 1) == REJECTED
    assert boruta_decide(10, 20, 0.01, 1) == TENTATIVE
    # Bonferroni: 9 of 9 hits clears 0.01 alone but not 0.01 / 6
    assert boruta_decide(9, 9, 0.01, 1) == CONFIRMED
    assert boruta_decide(9, 9, 0.01, 6) == TENTATIVE


def test_boruta_state_is_consistent():
    X, y = _planted(9)
    res = boruta(None, RngStream(3), max_runs=20, n_trees=100, X=X, y=y,
                 codes=[f"x{j}" for j in range(1, 7)])
    state = res.trace
    assert "x1" in res.selected
    assert set(state.status.values()) <= {CONFIRMED, REJECTED, TENTATIVE}
    assert all(h <= state.runs for h in state.hits.values())
    assert res.selected == state.with_status(CONFIRMED)
