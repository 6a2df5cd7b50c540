"""Simulated annealing and a genetic algorithm over feature subsets."""
from selekta.metaheuristics import AnnealConfig, GaConfig, anneal_select, ga_select
from selekta.numeric import RngStream
from selekta.selection import SubsetScorer

from _common import SEED, folds, panel

data = panel()
plan = folds(data)
# one scorer, so both searches share cached CV scores
scorer = SubsetScorer(data, plan)
root = RngStream(SEED)

sa = anneal_select(data, plan, AnnealConfig(iterations=500), root.substream(2), scorer)
accepted = sum(h["accepted"] for h in sa.trace)
print(f"SA: {accepted}/{len(sa.trace)} moves accepted, "
      f"final T {sa.trace[-1]['temperature']:.2e}, best RMSE {sa.trace[-1]['best_rmse']:.4f}")
print("SA keeps:", " ".join(sa.selected))

ga = ga_select(data, plan, GaConfig(), root.substream(3), scorer)
hist = ga.trace["history"]
for h in hist[:: len(hist) // 5]:
    print(f"  generation {h['generation']:3d}: best {h['best_rmse']:.4f}, mean {h['mean_rmse']:.4f}")
print("GA keeps:", " ".join(ga.selected))
print(f"distinct subsets scored: {len(scorer.cache)} of {2 ** data.p - 1}")
