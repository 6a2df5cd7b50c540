import os
from pathlib import Path

import numpy as np
import pytest

from selekta.dataset import from_arrays, load_dataset, standardize, surrogate_table

DATA_DIR = Path(__file__).parent / "data"
REFERENCE_ENV = "SELEKTA_REFERENCE_CSV"

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def reference_csv():
    """Path of the published 1990-2021 panel, or None when it is not installed."""
    env = os.environ.get(REFERENCE_ENV)
    if env:
        return Path(env) if Path(env).is_file() else None
    path = DATA_DIR / "reference.csv"
    return path if path.is_file() else None


@pytest.fixture(scope="session")
def surrogate():
    return standardize(surrogate_table())


@pytest.fixture(scope="session")
def _reference_dataset():
    path = reference_csv()
    if path is None:
        pytest.skip(f"published dataset not found (set {REFERENCE_ENV} or add tests/data/reference.csv)")
    return load_dataset(path)


def planted(seed, n=60, p=6, beta=None, noise=1.0):
    """Synthetic dataset with y = X beta + noise; beta defaults to (2, 0, ..., 0)."""
    g = np.random.default_rng(seed)
    X = g.normal(size=(n, p))
    b = np.zeros(p) if beta is None else np.asarray(beta, dtype=float)
    if beta is None:
        b[0] = 2.0
    y = X @ b + noise * g.normal(size=n)
    return from_arrays(X, y)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
