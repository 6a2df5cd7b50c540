import csv
import io
import json
from decimal import Decimal

import numpy as np
import pytest

from selekta.errors import InputError
from selekta.filters import RelativeImportance
from selekta.report import (MINUS, ComparisonRow, PipelineConfig, SummaryCell, emit_comparison,
                            emit_relaimpo, emit_summary, rounded_shares, run_pipeline, write_bundle)

ROWS = [
    ComparisonRow("Mod1", 12, 0.70631, 13.0, 62.92361, 83.44391),
    ComparisonRow("Mod5", 7, 0.73601, 5.57, 56.98331, 70.17491),
    ComparisonRow("Mod6", 8, 0.74231, 6.18091, 56.85321, 71.51051),
]
QUICK = dict(methods=("full", "corr", "lasso", "stepwise"), lmg=True)


def test_comparison_csv_columns_and_precision():
    out = emit_comparison(ROWS)
    rows = list(csv.reader(io.StringIO(out["csv"])))
    assert rows[0] == ["model", "n_regressors", "adj_r2", "cp", "aic", "bic"]
    assert rows[2] == ["Mod5", "7", "0.736010", "5.570000", "56.983310", "70.174910"]


def test_comparison_best_markers():
    out = emit_comparison(ROWS)
    lines = out["text"].splitlines()
    assert "5.5700*" in lines[2] and "70.1749*" in lines[2]
    assert "0.7423*" in lines[3] and "56.8532*" in lines[3]
    assert "*" not in lines[1]
    payload = json.loads(out["json"])
    assert payload["rows"][1]["best"] == ["cp", "bic"]
    assert payload["rows"][2]["best"] == ["adj_r2", "aic"]


def test_comparison_needs_rows():
    with pytest.raises(InputError):
        emit_comparison([])


def test_summary_signs_and_stars():
    cells = [SummaryCell("Mod1", "TR", MINUS, "***"), SummaryCell("Mod1", "INFL", "+", "*"),
             SummaryCell("Mod1", "EG", "", "")]
    out = emit_summary(cells, ("EG", "INFL", "TR"))
    row = list(csv.reader(io.StringIO(out["csv"])))[1]
    assert row == ["Mod1", "", "+*", "−***"]
    assert json.loads(out["json"])["rows"][0]["cells"]["TR"] == {"sign": MINUS, "significance": "***"}


def test_relaimpo_shares_sum_exactly():
    g = np.random.default_rng(0)
    for _ in range(50):
        lmg = g.random(12) * g.random()
        ri = RelativeImportance(tuple(f"f{j}" for j in range(12)), lmg, float(lmg.sum()))
        rows = list(csv.reader(io.StringIO(emit_relaimpo(ri))))
        assert rows[0] == ["feature", "share_percent"]
        shares = [Decimal(r[1]) for r in rows[1:]]
        assert sum(shares) == Decimal("100.000000")
        assert shares == sorted(shares, reverse=True)


def test_rounded_shares_are_within_one_unit():
    units, unit = rounded_shares([1.0, 1.0, 1.0])
    assert units.sum() == 100 * unit
    assert sorted(units.tolist()) == [33333333, 33333333, 33333334]


def test_pipeline_on_surrogate(surrogate):
    bundle = run_pipeline(surrogate, PipelineConfig(**QUICK))
    assert [m.model_id for m in bundle.models] == ["Mod1", "Mod3", "Mod4", "Mod6"]
    assert bundle.comparison[0].cp == pytest.approx(13.0)
    lasso = bundle.models[2]
    assert lasso.stars is False
    cells = {(c.model_id, c.code): c for c in bundle.summary}
    assert all(cells[("Mod4", c)].significance == "" for c in lasso.subset)
    assert cells[("Mod1", "TR")].text == MINUS + "***"


def test_pins_override_search(surrogate):
    config = PipelineConfig(methods=("full", "best_subset"), pins={"best_subset": ("TR", "DINV")},
                            lmg=False)
    bundle = run_pipeline(surrogate, config)
    assert bundle.models[1].subset == ("DINV", "TR")
    with pytest.raises(InputError):
        run_pipeline(surrogate, PipelineConfig(pins={"pcr": ("TR",)}))
    with pytest.raises(InputError):
        run_pipeline(surrogate, PipelineConfig(pins={"sa": ("NOPE",)}))


def test_write_bundle_is_complete(surrogate, tmp_path):
    bundle = run_pipeline(surrogate, PipelineConfig(**QUICK))
    names = write_bundle(bundle, tmp_path / "out")
    expected = {f"{stem}.{ext}" for stem in ("comparison", "summary") for ext in ("txt", "csv", "json")}
    expected |= {"relaimpo.csv", "correlation.csv", "manifest.json", "models.txt"}
    assert set(names) == expected
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == sorted(expected)
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["config"]["seed"] == 20211990
