import math

import numpy as np
import pytest

from selekta.dataset import make_folds
from selekta.errors import InputError
from selekta.metaheuristics import (AnnealConfig, GaConfig, acceptance_probability,
                                    anneal_select, ga_select)
from selekta.numeric import RngStream

from conftest import planted


def test_acceptance_probability():
    assert acceptance_probability(1.0, 1.0, 0.5) == 1.0
    assert acceptance_probability(1.0, 0.9, 0.0) == 1.0
    assert acceptance_probability(1.0, 1.2, 0.1) == pytest.approx(math.exp(-2.0))
    assert acceptance_probability(1.0, 1.2, 0.0) == 0.0


@pytest.mark.parametrize("kwargs", [dict(cooling_rate=1.0), dict(iterations=0), dict(max_flips=0),
                                    dict(initial_temperature=-1.0)])
def test_anneal_config_checks(kwargs):
    with pytest.raises(InputError):
        AnnealConfig(**kwargs).validate()


@pytest.mark.parametrize("kwargs", [dict(population_size=1), dict(elitism=50), dict(mutation_rate=2.0)])
def test_ga_config_checks(kwargs):
    with pytest.raises(InputError):
        GaConfig(**kwargs).validate()


def test_anneal_history_and_reproducibility():
    data = planted(1, n=40, p=5)
    folds = make_folds(40, 5, RngStream(0))
    cfg = AnnealConfig(iterations=60)
    a = anneal_select(data, folds, cfg, RngStream(9))
    b = anneal_select(data, folds, cfg, RngStream(9))
    assert a.selected == b.selected and a.trace == b.trace
    hist = a.trace
    assert len(hist) == 60
    assert all(h["accepted"] for h in hist if h["candidate_rmse"] <= h["previous_rmse"])
    best = [h["best_rmse"] for h in hist]
    assert all(y <= x for x, y in zip(best, best[1:]))
    assert hist[1]["temperature"] == pytest.approx(hist[0]["temperature"] * 0.97)


def test_ga_elitism_keeps_best_monotone():
    data = planted(2, n=40, p=6)
    res = ga_select(data, make_folds(40, 5, RngStream(0)), GaConfig(population_size=12, generations=15),
                    RngStream(4))
    best = [h["best_rmse"] for h in res.trace["history"]]
    assert all(y <= x for x, y in zip(best, best[1:]))
    assert res.trace["final_population"].any(axis=1).all()


def test_ga_initial_population_shape():
    data = planted(3, n=40, p=4)
    with pytest.raises(InputError):
        ga_select(data, make_folds(40, 5, RngStream(0)), GaConfig(population_size=4, generations=1),
                  RngStream(0), initial_population=np.ones((3, 4), bool))
