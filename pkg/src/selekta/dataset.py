"""Indicator schema, CSV ingestion, standardization and CV folds."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ContractError, InputError, LoadError, ZeroVarianceError
from .numeric import RngStream


@dataclass(frozen=True)
class Variable:
    code: str
    description: str
    unit: str
    source: str


RESPONSE = "REC"
YEAR = "YEAR"

SCHEMA = (
    Variable("REC", "Renewable energy consumption", "% of total final energy consumption", "WDI"),
    Variable("CO2", "CO2 emission per capita", "annual % change", "OWID"),
    Variable("DINV", "Gross fixed capital formation", "% of GDP", "INSTAT"),
    Variable("EG", "Real gross domestic product", "annual % change", "INSTAT"),
    Variable("EXR", "Period average exchange rate USD/MGA", "annual % change", "BFM"),
    Variable("FDEV", "Domestic credit to private sector", "% of GDP", "BFM"),
    Variable("FDI", "Foreign direct investment, net inflows", "% of GDP", "BFM"),
    Variable("INC", "Gross disposable private income", "% of GDP", "INSTAT"),
    Variable("IND", "Industry value added", "annual % change", "INSTAT"),
    Variable("INFL", "Period average consumer price index", "annual % change", "INSTAT"),
    Variable("TOUR", "Number of tourist arrivals", "annual % change", "INSTAT"),
    Variable("TR", "Exports plus imports of goods and non-factor services", "% of GDP", "BFM"),
    Variable("URB", "Urban population", "annual % change", "WDI"),
)

FEATURES = tuple(v.code for v in SCHEMA if v.code != RESPONSE)


def check_schema(schema=SCHEMA):
    codes = [v.code for v in schema]
    if len(codes) != 13:
        raise ContractError(f"schema must have 13 variables, got {len(codes)}")
    if len(set(codes)) != len(codes):
        raise ContractError("schema codes are not unique")
    if codes.count(RESPONSE) != 1:
        raise ContractError(f"schema must contain {RESPONSE} exactly once")


@dataclass
class RawTable:
    years: np.ndarray
    columns: dict  # code -> float array, schema order

    @property
    def n(self):
        return len(self.years)


@dataclass
class StandardizedDataset:
    """Response and regressors scaled to mean 0, sample sd 1.

    ``means``/``sds`` are keyed by variable code (response included) and
    invert the transform.
    """

    years: np.ndarray
    y: np.ndarray
    X: np.ndarray
    feature_codes: tuple
    means: dict = field(default_factory=dict)
    sds: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    def index(self, codes):
        pos = {c: i for i, c in enumerate(self.feature_codes)}
        try:
            return [pos[c] for c in codes]
        except KeyError as exc:
            raise InputError(f"unknown feature code {exc.args[0]!r}") from None

    def columns(self, codes):
        return self.X[:, self.index(codes)]

    def order(self, codes):
        """``codes`` re-sorted into dataset column order."""
        idx = sorted(self.index(codes))
        return tuple(self.feature_codes[i] for i in idx)

    def destandardize(self, code, values):
        return np.asarray(values) * self.sds[code] + self.means[code]

    def subset_rows(self, rows):
        return StandardizedDataset(self.years[rows], self.y[rows], self.X[rows],
                                   self.feature_codes, self.means, self.sds)


def load_csv(path, schema=SCHEMA) -> RawTable:
    """Read a UTF-8 indicator CSV with a ``YEAR`` column and all schema codes.

    Columns may appear in any order; extra columns are ignored. Row numbers
    in errors count data rows from 1 (the header is row 0).
    """
    check_schema(schema)
    codes = [v.code for v in schema]
    path = Path(path)
    if not path.exists():
        raise LoadError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise LoadError("empty file", row=0) from None
        for code in [YEAR] + codes:
            if code not in header:
                raise LoadError(f"missing column {code}", row=0, column=code)
        pos = {h: i for i, h in enumerate(header)}
        years, values = [], {c: [] for c in codes}
        for r, row in enumerate(reader, start=1):
            if not any(cell.strip() for cell in row):
                continue
            if len(row) < len(header):
                raise LoadError("short row", row=r)
            years.append(_parse_year(row[pos[YEAR]], r))
            for c in codes:
                values[c].append(_parse_number(row[pos[c]], r, c))
    if not years:
        raise LoadError("no data rows")
    years = np.array(years, dtype=int)
    if len(set(years.tolist())) != len(years):
        raise LoadError("duplicate year", column=YEAR)
    order = np.argsort(years, kind="stable")
    years = years[order]
    gaps = np.flatnonzero(np.diff(years) != 1)
    if gaps.size:
        raise LoadError(f"missing year after {years[gaps[0]]}", column=YEAR)
    cols = {c: np.array(values[c])[order] for c in codes}
    return RawTable(years, cols)


def _parse_year(cell, r):
    try:
        return int(cell.strip())
    except ValueError:
        raise LoadError(f"bad year {cell!r}", row=r, column=YEAR) from None


def _parse_number(cell, r, code):
    try:
        v = float(cell.strip())
    except ValueError:
        raise LoadError(f"non-numeric cell {cell!r}", row=r, column=code) from None
    if not math.isfinite(v):
        raise LoadError(f"non-finite cell {cell!r}", row=r, column=code)
    return v


def standardize(raw: RawTable, response=RESPONSE) -> StandardizedDataset:
    """Center and scale every column using the sample (n-1) standard deviation."""
    means, sds, scaled = {}, {}, {}
    for code, col in raw.columns.items():
        m = col.mean()
        c = col - m
        s = math.sqrt(float(c @ c) / (len(col) - 1))
        if s == 0.0 or s < 1e-13 * max(1.0, abs(m)):
            raise ZeroVarianceError(code)
        z = c / s
        # second pass removes the O(eps) residual mean of the first
        z -= z.mean()
        means[code], sds[code], scaled[code] = m, s, z
    features = tuple(c for c in raw.columns if c != response)
    X = np.column_stack([scaled[c] for c in features])
    if X.shape[0] < X.shape[1] + 2:
        raise InputError(f"need n >= p + 2 rows, got n={X.shape[0]}, p={X.shape[1]}")
    return StandardizedDataset(raw.years.copy(), scaled[response], X, features, means, sds)


def load_dataset(path) -> StandardizedDataset:
    return standardize(load_csv(path))


def from_arrays(X, y, codes=None, first_year=1) -> StandardizedDataset:
    """Standardized dataset from raw arrays, for synthetic experiments.

    Features default to ``x1 .. xp``; rows get consecutive years.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise InputError(f"expected X (n, p) and y (n,), got {X.shape} and {y.shape}")
    codes = tuple(codes) if codes is not None else tuple(f"x{j + 1}" for j in range(X.shape[1]))
    if len(codes) != X.shape[1] or RESPONSE in codes or len(set(codes)) != len(codes):
        raise InputError("feature codes must be distinct, one per column, and not the response")
    columns = {RESPONSE: y.copy()}
    columns.update({c: X[:, j].copy() for j, c in enumerate(codes)})
    return standardize(RawTable(np.arange(first_year, first_year + len(y)), columns))


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: np.ndarray
    seed: int | None = None

    def splits(self):
        """Yield ``(train_rows, test_rows)`` for each fold in index order."""
        for f in range(self.k):
            test = np.flatnonzero(self.assignment == f)
            train = np.flatnonzero(self.assignment != f)
            yield train, test

    def sizes(self):
        return np.bincount(self.assignment, minlength=self.k)


def make_folds(n: int, k: int, rng: RngStream) -> FoldPlan:
    """Shuffle rows and deal them into ``k`` folds of near-equal size."""
    if not 2 <= k <= n:
        raise InputError(f"fold count must satisfy 2 <= k <= n, got k={k}, n={n}")
    perm = rng.permutation(n)
    assignment = np.empty(n, dtype=int)
    assignment[perm] = np.arange(n) % k
    return FoldPlan(k, assignment, rng.seed)


# Pearson correlations published for the 1990-2021 indicator panel (3 d.p.),
# lower triangle in schema order. Used to build the surrogate dataset.
PUBLISHED_CORRELATION = """\
1
-0.344 1
0.502 -0.200 1
-0.395 0.460 0.168 1
-0.010 0.142 -0.042 -0.130 1
0.107 0.000 -0.463 -0.272 0.076 1
0.153 0.010 0.274 0.035 -0.275 -0.087 1
-0.112 0.150 -0.272 -0.169 0.055 0.164 -0.092 1
-0.449 0.496 -0.003 0.818 -0.046 -0.188 0.094 -0.036 1
0.369 -0.135 0.181 -0.184 0.549 -0.056 -0.234 0.033 -0.133 1
-0.124 0.439 0.270 0.745 0.092 -0.412 -0.145 -0.111 0.655 0.076 1
-0.428 0.135 0.071 0.468 -0.012 -0.112 0.591 -0.200 0.398 -0.215 0.119 1
0.490 -0.082 0.171 -0.081 -0.270 0.326 0.359 -0.229 -0.017 -0.040 0.042 -0.090 1
"""


def published_correlation() -> np.ndarray:
    """13x13 correlation matrix (response first, then regressors in schema order)."""
    rows = [list(map(float, line.split())) for line in PUBLISHED_CORRELATION.strip().splitlines()]
    C = np.zeros((13, 13))
    for i, r in enumerate(rows):
        C[i, :len(r)] = r
    return C + C.T - np.eye(13)


def surrogate_table(seed=20211990, first_year=1990, n=32) -> RawTable:
    """Synthetic panel whose sample correlation equals the published matrix.

    Gaussian draws are whitened to an exactly identity sample covariance and
    then coloured with the Cholesky factor of the published correlations.
    Values are on a standardized scale; they are not the real indicators.
    """
    C = published_correlation()
    rng = RngStream(seed)
    Z = rng.normal(size=(n, 13))
    Z -= Z.mean(axis=0)
    L = np.linalg.cholesky(Z.T @ Z / (n - 1))
    W = np.linalg.solve(L, Z.T).T
    X = W @ np.linalg.cholesky(C).T
    years = np.arange(first_year, first_year + n)
    codes = [v.code for v in SCHEMA]
    return RawTable(years, {c: X[:, i].copy() for i, c in enumerate(codes)})


def write_csv(raw: RawTable, path, digits=10):
    codes = list(raw.columns)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([YEAR] + codes)
        for i, year in enumerate(raw.years):
            w.writerow([int(year)] + [f"{raw.columns[c][i]:.{digits}f}" for c in codes])
