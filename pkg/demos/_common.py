# Shared setup for the demo scripts: the synthetic 1990-2021 panel whose
# sample correlations equal the published ones.
from selekta.dataset import make_folds, standardize, surrogate_table
from selekta.numeric import RngStream

SEED = 20211990


def panel():
    return standardize(surrogate_table(SEED))


def folds(data, k=5):
    # substream 0 of the top-level seed is reserved for the fold plan
    return make_folds(data.n, k, RngStream(SEED).substream(0))
