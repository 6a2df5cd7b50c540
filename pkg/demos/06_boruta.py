"""Boruta on a planted model, then on the panel."""
import numpy as np

from selekta.forest import boruta
from selekta.numeric import RngStream

from _common import SEED, panel

# y depends on x1 only; the other five columns are noise.
g = np.random.default_rng(1)
X = g.normal(size=(100, 6))
y = 2 * X[:, 0] + g.normal(size=100)
res = boruta(None, RngStream(1), X=X, y=y, codes=[f"x{j}" for j in range(1, 7)])
state = res.trace
print(f"planted model, {state.runs} runs")
for c in state.codes:
    print(f"  {c}: {state.status[c]:9s} hits {state.hits[c]}")

data = panel()
res = boruta(data, RngStream(SEED).substream(1))
state = res.trace
print(f"\npanel, {state.runs} runs")
for c in state.codes:
    print(f"  {c:4s}: {state.status[c]:9s} hits {state.hits[c]}")
print("confirmed:", " ".join(res.selected) or "none")
