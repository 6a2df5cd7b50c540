"""Correlation filter at |r| > 0.75 and the two ways of breaking a pair."""
from selekta.filters import correlation_filter
from selekta.numeric import pearson_correlation

from _common import panel

data = panel()
C = pearson_correlation(data.X, data.feature_codes)
codes = data.feature_codes

for rule in ("caret", "member"):
    res = correlation_filter(C, codes, cutoff=0.75, mean_rule=rule)
    for rem in res.removed:
        a, b = rem.pair
        means = ", ".join(f"{c} {m:.3f}" for c, m in rem.means.items())
        print(f"[{rule}] pair {a}/{b} r = {rem.r:.3f}; mean |r|: {means}; drop {rem.code}")
    print(f"[{rule}] kept {len(res.kept)}: {' '.join(res.kept)}\n")
