"""Shared pieces for wrapper selectors: the result record and a CV scorer."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linear import cv_rmse


@dataclass
class SelectionResult:
    method: str
    selected: tuple
    trace: object = field(default_factory=list)


def mask_to_indices(mask, p):
    return [j for j in range(p) if mask >> j & 1]


def indices_to_mask(indices):
    m = 0
    for j in indices:
        m |= 1 << int(j)
    return m


class SubsetScorer:
    """Mean held-out RMSE of OLS on a feature subset, cached by bitmask.

    One scorer is tied to one fold plan, so every subset evaluated through
    it is compared on the same splits.
    """

    def __init__(self, data, folds):
        self.data = data
        self.folds = folds
        self.p = data.p
        self.cache = {}

    def __call__(self, mask):
        mask = int(mask)
        if mask <= 0:
            raise ValueError("empty subset has no fitness")
        hit = self.cache.get(mask)
        if hit is None:
            cols = mask_to_indices(mask, self.p)
            hit = cv_rmse(self.data.X[:, cols], self.data.y, self.folds)
            self.cache[mask] = hit
        return hit

    def codes(self, mask):
        return tuple(self.data.feature_codes[j] for j in mask_to_indices(mask, self.p))

    @staticmethod
    def bits(mask, p):
        return np.array([(mask >> j) & 1 for j in range(p)], dtype=bool)
