"""Exhaustive best subset, AIC stepwise and recursive elimination."""
from selekta.subsets import best_subset, rfe, stepwise_aic

from _common import folds, panel

data = panel()
plan = folds(data)

res = best_subset(data, plan)
print("best subset by size (CV RMSE):")
for row in res.trace:
    s = row["best_cv"]
    print(f"  {row['size']:2d}  {s.cv_rmse:.4f}  {' '.join(s.subset)}")
print("winner:", " ".join(res.selected))

step = stepwise_aic(data)
print("\nstepwise from the full model:")
for move in step.trace:
    print(f"  {move['move'] or 'start':6s} AIC {move['aic']:.4f}")
print("stepwise keeps:", " ".join(step.selected))

elim = rfe(data, plan)
print("\nRFE elimination order:", " ".join(elim.trace["elimination_order"]))
print(f"RFE keeps {elim.trace['size']}:", " ".join(elim.selected))
