import numpy as np
import pytest

from selekta.dataset import (FEATURES, RESPONSE, from_arrays, load_csv, make_folds,
                             published_correlation, standardize, surrogate_table, write_csv)
from selekta.errors import InputError, LoadError, ZeroVarianceError
from selekta.numeric import RngStream, pearson_correlation

HEADER = "YEAR," + ",".join((RESPONSE,) + FEATURES)


def _write(tmp_path, rows, header=HEADER):
    path = tmp_path / "data.csv"
    path.write_text(header + "\n" + "\n".join(rows) + "\n")
    return path


def _rows(n=5, start=2000):
    g = np.random.default_rng(0)
    return [",".join([str(start + i)] + [f"{v:.6f}" for v in g.normal(size=13)]) for i in range(n)]


def test_schema_order():
    assert RESPONSE == "REC"
    assert FEATURES == ("CO2", "DINV", "EG", "EXR", "FDEV", "FDI", "INC", "IND", "INFL", "TOUR",
                        "TR", "URB")


def test_load_roundtrip(tmp_path):
    raw = surrogate_table()
    path = tmp_path / "s.csv"
    write_csv(raw, path)
    back = load_csv(path)
    assert np.array_equal(back.years, raw.years)
    for code in raw.columns:
        assert np.allclose(back.columns[code], raw.columns[code], atol=1e-9)


def test_rows_sorted_by_year(tmp_path):
    rows = _rows()
    back = load_csv(_write(tmp_path, rows[::-1]))
    assert list(back.years) == list(range(2000, 2005))


def test_missing_column(tmp_path):
    header = HEADER.replace(",URB", "")
    rows = [r.rsplit(",", 1)[0] for r in _rows()]
    with pytest.raises(LoadError, match="URB"):
        load_csv(_write(tmp_path, rows, header))


def test_non_numeric_cell_cites_row_and_column(tmp_path):
    rows = _rows()
    cells = rows[2].split(",")
    cells[4] = "n/a"
    rows[2] = ",".join(cells)
    with pytest.raises(LoadError) as info:
        load_csv(_write(tmp_path, rows))
    assert info.value.column == "EG"
    assert info.value.row is not None


@pytest.mark.parametrize("years", [(2000, 2001, 2001, 2002, 2003), (2000, 2001, 2003, 2004, 2005)])
def test_duplicate_or_gap_year(tmp_path, years):
    rows = [str(y) + r[4:] for y, r in zip(years, _rows())]
    with pytest.raises(LoadError):
        load_csv(_write(tmp_path, rows))


def test_standardize_oracle():
    raw = surrogate_table()
    data = standardize(raw)
    for j, code in enumerate(data.feature_codes):
        col = raw.columns[code]
        ref = (col - col.mean()) / col.std(ddof=1)
        assert np.allclose(data.X[:, j], ref, atol=1e-13)
    assert np.allclose(data.X.mean(axis=0), 0.0, atol=1e-15)
    assert np.allclose(data.X.std(axis=0, ddof=1), 1.0, atol=1e-13)
    assert np.allclose(data.destandardize("REC", data.y), raw.columns["REC"], atol=1e-12)


def test_zero_variance():
    X = np.random.default_rng(0).normal(size=(10, 2))
    X[:, 1] = 4.0
    with pytest.raises(ZeroVarianceError, match="x2"):
        from_arrays(X, np.arange(10.0))


def test_too_few_rows():
    g = np.random.default_rng(0)
    with pytest.raises(InputError):
        from_arrays(g.normal(size=(4, 3)), g.normal(size=4))


def test_folds_sizes_and_partition():
    plan = make_folds(32, 5, RngStream(20211990))
    assert sorted(plan.sizes().tolist(), reverse=True) == [7, 7, 6, 6, 6]
    seen = np.concatenate([test for _, test in plan.splits()])
    assert sorted(seen.tolist()) == list(range(32))
    for train, test in plan.splits():
        assert not set(train) & set(test)
        assert len(train) + len(test) == 32


def test_folds_reproducible_and_bounds():
    a = make_folds(20, 4, RngStream(1)).assignment
    assert np.array_equal(a, make_folds(20, 4, RngStream(1)).assignment)
    for k in (1, 21):
        with pytest.raises(InputError):
            make_folds(20, k, RngStream(1))


def test_surrogate_reproduces_published_correlations():
    raw = surrogate_table()
    data = standardize(raw)
    C = pearson_correlation(np.column_stack([data.y, data.X]))
    assert np.allclose(C, published_correlation(), atol=1e-12)
    assert raw.n == 32 and raw.years[0] == 1990 and raw.years[-1] == 2021
