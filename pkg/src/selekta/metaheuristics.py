"""Simulated annealing and genetic-algorithm subset search.

Both minimize the mean CV RMSE of an OLS fit, scored through a shared
:class:`~selekta.selection.SubsetScorer` so every candidate sees the same
folds and repeated subsets are never refit.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InputError
from .selection import SelectionResult, SubsetScorer, indices_to_mask


@dataclass(frozen=True)
class AnnealConfig:
    iterations: int = 500
    initial_temperature: float | None = None  # None: half the starting RMSE
    cooling_rate: float = 0.97
    max_flips: int = 3
    restart_after: int | None = None

    def validate(self):
        if self.iterations < 1 or self.max_flips < 1:
            raise InputError("iterations and max_flips must be positive")
        if not 0.0 < self.cooling_rate < 1.0:
            raise InputError("cooling_rate must lie in (0, 1)")
        if self.initial_temperature is not None and self.initial_temperature < 0:
            raise InputError("initial_temperature must be non-negative")
        if self.restart_after is not None and self.restart_after < 1:
            raise InputError("restart_after must be positive")

    def as_dict(self):
        return asdict(self)


def acceptance_probability(old, new, temperature):
    """Metropolis rule; exactly 1 when the candidate is no worse."""
    if new <= old:
        return 1.0
    if temperature <= 0.0:
        return 0.0
    return math.exp(-(new - old) / temperature)


def _flip(mask, p, rng, max_flips):
    while True:
        k = int(rng.integers(1, min(max_flips, p) + 1))
        out = mask
        for j in rng.choice(p, size=k, replace=False):
            out ^= 1 << int(j)
        if out:
            return out


def anneal_select(data, folds, config=None, rng=None, scorer=None) -> SelectionResult:
    """Simulated annealing over feature subsets.

    Starts from a random non-empty subset. Each iteration flips between 1 and
    ``max_flips`` memberships (redrawing if the result is empty), accepts the
    candidate with :func:`acceptance_probability`, then multiplies the
    temperature by ``cooling_rate``. With ``restart_after`` set, the walk
    jumps back to the best subset after that many iterations without a new
    best. Returns the best subset ever seen.
    """
    config = config or AnnealConfig()
    config.validate()
    scorer = scorer or SubsetScorer(data, folds)
    p = data.p
    current = 0
    while current == 0:
        current = indices_to_mask(np.flatnonzero(rng.random(p) < 0.5))
    cur_score = scorer(current)
    best, best_score = current, cur_score
    T = 0.5 * cur_score if config.initial_temperature is None else config.initial_temperature
    stagnant = 0
    history = []
    for it in range(config.iterations):
        cand = _flip(current, p, rng, config.max_flips)
        score = scorer(cand)
        previous = cur_score
        prob = acceptance_probability(previous, score, T)
        accepted = prob >= 1.0 or rng.random() < prob
        if accepted:
            current, cur_score = cand, score
        if cur_score < best_score:
            best, best_score = current, cur_score
            stagnant = 0
        else:
            stagnant += 1
        if config.restart_after and stagnant >= config.restart_after:
            current, cur_score = best, best_score
            stagnant = 0
        history.append({"iteration": it + 1, "candidate_rmse": score, "previous_rmse": previous,
                        "accepted": accepted, "temperature": T, "best_rmse": best_score})
        T *= config.cooling_rate
    return SelectionResult("sa", scorer.codes(best), history)


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 50
    generations: int = 100
    crossover_rate: float = 0.8
    mutation_rate: float = 0.05
    elitism: int = 2
    tournament_size: int = 3

    def validate(self):
        if self.population_size < 2 or self.generations < 1 or self.tournament_size < 1:
            raise InputError("population_size >= 2, generations >= 1, tournament_size >= 1 required")
        if not 0 <= self.elitism < self.population_size:
            raise InputError("elitism must be smaller than the population")
        for name in ("crossover_rate", "mutation_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InputError(f"{name} must lie in [0, 1]")

    def as_dict(self):
        return asdict(self)


def _repair(bits, rng):
    if not bits.any():
        bits[int(rng.integers(0, len(bits)))] = True
    return bits


def _mask(bits):
    return indices_to_mask(np.flatnonzero(bits))


def ga_select(data, folds, config=None, rng=None, scorer=None, initial_population=None) -> SelectionResult:
    """Genetic algorithm over binary feature chromosomes.

    Fitness is the negative mean CV RMSE. Parents come from tournaments of
    ``tournament_size``; children are built by uniform crossover (with
    probability ``crossover_rate``, otherwise a copy of the first parent)
    followed by per-gene bit-flip mutation. The ``elitism`` best
    chromosomes pass unchanged; empty chromosomes get one random gene
    switched on. Each generation draws from its own substream of ``rng``.
    Returns the best chromosome ever evaluated.
    """
    config = config or GaConfig()
    config.validate()
    scorer = scorer or SubsetScorer(data, folds)
    p = data.p
    N = config.population_size
    init = rng.substream(0)
    if initial_population is None:
        pop = init.random((N, p)) < 0.5
        for row in pop:
            _repair(row, init)
    else:
        pop = np.array(initial_population, dtype=bool)
        if pop.shape != (N, p):
            raise InputError(f"initial population must have shape {(N, p)}")
    fit = np.array([scorer(_mask(c)) for c in pop])
    i0 = int(np.argmin(fit))
    best, best_score = _mask(pop[i0]), float(fit[i0])
    history = [{"generation": 0, "best_rmse": best_score, "mean_rmse": float(fit.mean())}]
    for g in range(1, config.generations + 1):
        gen = rng.substream(g)
        order = np.argsort(fit, kind="stable")
        children = [pop[i].copy() for i in order[: config.elitism]]
        while len(children) < N:
            a = _tournament(fit, config.tournament_size, gen)
            b = _tournament(fit, config.tournament_size, gen)
            if gen.random() < config.crossover_rate:
                take = gen.random(p) < 0.5
                child = np.where(take, pop[a], pop[b])
            else:
                child = pop[a].copy()
            child ^= gen.random(p) < config.mutation_rate
            children.append(_repair(child, gen))
        pop = np.array(children)
        fit = np.array([scorer(_mask(c)) for c in pop])
        i = int(np.argmin(fit))
        if fit[i] < best_score:
            best, best_score = _mask(pop[i]), float(fit[i])
        history.append({"generation": g, "best_rmse": best_score, "mean_rmse": float(fit.mean())})
    return SelectionResult("ga", scorer.codes(best), {"history": history, "final_population": pop})


def _tournament(fit, size, rng):
    picks = rng.integers(0, len(fit), size=size)
    return int(picks[np.argmin(fit[picks])])
