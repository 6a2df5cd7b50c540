"""LMG decomposition of the full-model R2."""
from selekta.filters import lmg_importance
from selekta.report import emit_relaimpo

from _common import panel

data = panel()
ri = lmg_importance(data)
print(f"full-model R2 = {ri.r2_full:.4f}, shares sum to {ri.lmg.sum():.4f}\n")
for code in ri.ranking():
    share = ri.normalized[ri.codes.index(code)]
    print(f"  {code:5s} {share:6.2f}%  {'#' * int(round(share))}")

# the CSV form rounds so that the column adds to exactly 100
print("\n" + emit_relaimpo(ri))
