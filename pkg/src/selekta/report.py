"""End-to-end pipeline and the table/CSV/JSON emitters.

Model numbering follows the published model summary: Mod1 full OLS,
Mod2 PCR, Mod3 correlation filter, Mod4 LASSO, Mod5 best subset, Mod6
stepwise, Mod7 RFE, Mod8 IPW-PLS, Mod9 Boruta, Mod10 simulated annealing,
Mod11 genetic algorithm.

Random substreams of the top-level seed: 0 folds, 1 Boruta, 2 SA, 3 GA.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import RESPONSE, load_dataset, make_folds
from .errors import InputError
from .filters import correlation_filter, lmg_importance
from .forest import boruta
from .lasso import lasso_cv, lasso_fixed, post_lasso_ols
from .latent import ipw_pls_select, pcr_fit
from .linear import criteria, info_criteria, ols_fit, significance_stars
from .metaheuristics import AnnealConfig, GaConfig, anneal_select, ga_select
from .numeric import RngStream, pearson_correlation
from .selection import SubsetScorer
from .subsets import best_subset, rfe, stepwise_aic

MODELS = (
    ("Mod1", "full"),
    ("Mod2", "pcr"),
    ("Mod3", "corr"),
    ("Mod4", "lasso"),
    ("Mod5", "best_subset"),
    ("Mod6", "stepwise"),
    ("Mod7", "rfe"),
    ("Mod8", "ipw_pls"),
    ("Mod9", "boruta"),
    ("Mod10", "sa"),
    ("Mod11", "ga"),
)
METHOD_IDS = {m: i for i, m in MODELS}
METHODS = tuple(m for _, m in MODELS)
PINNABLE = set(METHODS) - {"full", "pcr"}

STREAM_FOLDS, STREAM_BORUTA, STREAM_SA, STREAM_GA = 0, 1, 2, 3
DEFAULT_SEED = 20211990
MINUS = "−"


@dataclass
class PipelineConfig:
    seed: int = DEFAULT_SEED
    folds: int = 5
    methods: tuple = METHODS
    pins: dict = field(default_factory=dict)  # method -> tuple of codes
    pcr_components: int | None = None
    lasso_lambda: float | None = None
    lasso_grid: int = 100
    corr_cutoff: float = 0.75
    corr_mean_rule: str = "caret"
    ipw_max_iterations: int = 50
    ipw_drop_threshold: float | None = None
    boruta_max_runs: int = 100
    boruta_alpha: float = 0.01
    boruta_trees: int = 500
    anneal: AnnealConfig = field(default_factory=AnnealConfig)
    ga: GaConfig = field(default_factory=GaConfig)
    lmg: bool = True

    def validate(self, codes):
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise InputError(f"unknown method(s): {', '.join(unknown)}")
        for method, subset in self.pins.items():
            if method not in PINNABLE:
                raise InputError(f"cannot pin a subset for {method!r}")
            bad = [c for c in subset if c not in codes]
            if bad or not subset:
                raise InputError(f"pin for {method!r} has invalid codes: {bad or 'empty'}")
        self.anneal.validate()
        self.ga.validate()

    def as_dict(self):
        return {
            "seed": self.seed,
            "folds": self.folds,
            "methods": list(self.methods),
            "pins": {m: list(s) for m, s in sorted(self.pins.items())},
            "pcr_components": self.pcr_components,
            "lasso_lambda": self.lasso_lambda,
            "lasso_grid": self.lasso_grid,
            "corr_cutoff": self.corr_cutoff,
            "corr_mean_rule": self.corr_mean_rule,
            "ipw_max_iterations": self.ipw_max_iterations,
            "ipw_drop_threshold": self.ipw_drop_threshold,
            "boruta_max_runs": self.boruta_max_runs,
            "boruta_alpha": self.boruta_alpha,
            "boruta_trees": self.boruta_trees,
            "anneal": self.anneal.as_dict(),
            "ga": self.ga.as_dict(),
            "lmg": self.lmg,
        }


@dataclass
class ModelResult:
    model_id: str
    method: str
    subset: tuple
    fit: object  # OlsFit of the refit (None for PCR)
    coefficients: dict  # displayed coefficient per code
    stars: bool  # whether significance is reported
    criteria: object
    n_regressors: int
    adj_r2: float
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ComparisonRow:
    model_id: str
    n_regressors: int
    adj_r2: float
    cp: float
    aic: float
    bic: float


@dataclass(frozen=True)
class SummaryCell:
    model_id: str
    code: str
    sign: str  # "+", MINUS or "" when absent
    significance: str  # "", "*", "**", "***"

    @property
    def text(self):
        return self.sign + self.significance


@dataclass
class ReportBundle:
    models: list
    comparison: list
    summary: list
    relaimpo: object
    correlation: np.ndarray
    correlation_codes: tuple
    manifest: dict


def _pcr_result(data, pcr, full):
    n = data.n
    resid = data.y - pcr.fitted
    rss = float(resid @ resid)
    k = pcr.n_components + 1
    tss = float(np.sum((data.y - data.y.mean()) ** 2))
    adj = 1.0 - (rss / (n - k)) / (tss / (n - 1))
    crit = criteria(rss, n, k, full.sigma_hat ** 2)
    coefs = dict(zip(pcr.codes, pcr.coefficients.tolist()))
    return ModelResult(METHOD_IDS["pcr"], "pcr", tuple(pcr.codes), None, coefs, False, crit,
                       len(pcr.codes), adj,
                       {"n_components": pcr.n_components,
                        "cumulative_variance": pcr.cumulative_variance,
                        "rmsecv": pcr.rmsecv.tolist()})


def _refit(method, data, subset, full, details=None, coefficients=None, stars=True):
    fit = ols_fit(data, subset)
    coefs = dict(zip(fit.subset, fit.coefficients.tolist())) if coefficients is None else coefficients
    return ModelResult(METHOD_IDS[method], method, fit.subset, fit, coefs, stars,
                       info_criteria(fit, full), len(fit.subset), fit.adj_r2, details or {})


def run_models(data, config: PipelineConfig):
    """Run the selected methods in the fixed order; returns ``(models, lmg)``."""
    codes = tuple(data.feature_codes)
    config.validate(codes)
    root = RngStream(config.seed)
    folds = make_folds(data.n, config.folds, root.substream(STREAM_FOLDS))
    scorer = SubsetScorer(data, folds)
    full = ols_fit(data, codes)
    pins = config.pins
    run = set(config.methods)
    models = []

    def selected(method, search):
        if method in pins:
            return data.order(pins[method]), {"pinned": True}
        result = search()
        return result.selected, {"pinned": False, "selected": list(result.selected)}

    if "full" in run:
        models.append(_refit("full", data, codes, full))
    if "pcr" in run:
        models.append(_pcr_result(data, pcr_fit(data, folds, config.pcr_components), full))
    if "corr" in run:
        if "corr" in pins:
            subset, det = data.order(pins["corr"]), {"pinned": True}
        else:
            C = pearson_correlation(data.X, codes)
            res = correlation_filter(C, codes, config.corr_cutoff, config.corr_mean_rule)
            subset = res.kept
            det = {"pinned": False, "removed": [
                {"code": r.code, "pair": list(r.pair), "r": r.r, "mean_abs_r": r.means}
                for r in res.removed]}
        models.append(_refit("corr", data, subset, full, det))
    if "lasso" in run:
        if "lasso" in pins:
            subset = data.order(pins["lasso"])
            fit = ols_fit(data, subset)
            coefs = dict(zip(fit.subset, fit.coefficients.tolist()))
            det = {"pinned": True}
        else:
            if config.lasso_lambda is not None:
                res = lasso_fixed(data, config.lasso_lambda)
            else:
                res = lasso_cv(data, folds, config.lasso_grid)
            subset = res.selected_support
            if not subset:
                raise InputError("LASSO selected no features; cannot refit")
            coefs = {c: res.coef(c) for c in subset}
            det = {"pinned": False, "lambda": res.lambda_star}
        m = _refit("lasso", data, subset, full, det, coefficients=coefs, stars=False)
        models.append(m)
    if "best_subset" in run:
        subset, det = selected("best_subset", lambda: best_subset(data, folds, scorer=scorer))
        models.append(_refit("best_subset", data, subset, full, det))
    if "stepwise" in run:
        subset, det = selected("stepwise", lambda: stepwise_aic(data))
        if not subset:
            raise InputError("stepwise search ended at the intercept-only model; cannot refit")
        models.append(_refit("stepwise", data, subset, full, det))
    if "rfe" in run:
        subset, det = selected("rfe", lambda: rfe(data, folds))
        models.append(_refit("rfe", data, subset, full, det))
    if "ipw_pls" in run:
        subset, det = selected("ipw_pls", lambda: ipw_pls_select(
            data, folds, config.ipw_max_iterations, config.ipw_drop_threshold))
        models.append(_refit("ipw_pls", data, subset, full, det))
    if "boruta" in run:
        subset, det = selected("boruta", lambda: boruta(
            data, root.substream(STREAM_BORUTA), config.boruta_max_runs, config.boruta_alpha,
            config.boruta_trees))
        if not subset:
            raise InputError("Boruta confirmed no features; cannot refit")
        models.append(_refit("boruta", data, subset, full, det))
    if "sa" in run:
        subset, det = selected("sa", lambda: anneal_select(
            data, folds, config.anneal, root.substream(STREAM_SA), scorer))
        models.append(_refit("sa", data, subset, full, det))
    if "ga" in run:
        subset, det = selected("ga", lambda: ga_select(
            data, folds, config.ga, root.substream(STREAM_GA), scorer))
        models.append(_refit("ga", data, subset, full, det))
    lmg = lmg_importance(data) if config.lmg else None
    return models, lmg


def comparison_rows(models):
    return [ComparisonRow(m.model_id, m.n_regressors, m.adj_r2, m.criteria.cp, m.criteria.aic,
                          m.criteria.bic) for m in models]


def summary_cells(models, codes):
    cells = []
    for m in models:
        for c in codes:
            if c not in m.coefficients:
                cells.append(SummaryCell(m.model_id, c, "", ""))
                continue
            b = m.coefficients[c]
            sign = "+" if b > 0 else MINUS if b < 0 else ""
            sig = ""
            if m.stars and m.fit is not None:
                sig = significance_stars(float(m.fit.p_values[m.fit.subset.index(c)]))
            cells.append(SummaryCell(m.model_id, c, sign, sig))
    return cells


def run_pipeline(data, config: PipelineConfig, input_path=None) -> ReportBundle:
    models, lmg = run_models(data, config)
    C = pearson_correlation(np.column_stack([data.y, data.X]))
    manifest = {
        "tool": "selekta",
        "version": __version__,
        "input": None if input_path is None else str(input_path),
        "input_sha256": None if input_path is None else _sha256(input_path),
        "n": data.n,
        "config": config.as_dict(),
        "models": [{"model": m.model_id, "method": m.method, "subset": list(m.subset),
                    "details": _jsonable(m.details)} for m in models],
    }
    return ReportBundle(models, comparison_rows(models), summary_cells(models, data.feature_codes),
                        lmg, C, (RESPONSE,) + tuple(data.feature_codes), manifest)


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _r6(x):
    x = float(x)
    if not math.isfinite(x):
        return None
    v = round(x, 6)
    return 0.0 if v == 0 else v


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _r6(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def dumps(obj):
    return json.dumps(_jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def _csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


COMPARISON_COLUMNS = ("model", "n_regressors", "adj_r2", "cp", "aic", "bic")


def best_flags(rows):
    """Per row, the columns holding the column optimum (max adj_r2, min cp/aic/bic)."""
    if not rows:
        return []
    best = {
        "adj_r2": max(round(r.adj_r2, 4) for r in rows),
        "cp": min(round(r.cp, 4) for r in rows),
        "aic": min(round(r.aic, 4) for r in rows),
        "bic": min(round(r.bic, 4) for r in rows),
    }
    return [[c for c in best if round(getattr(r, c), 4) == best[c]] for r in rows]


def emit_comparison(rows):
    """Render the comparison table; returns a dict with ``text``, ``csv`` and ``json``."""
    if not rows:
        raise InputError("comparison needs at least one row")
    flags = best_flags(rows)
    table = [COMPARISON_COLUMNS]
    for r in rows:
        table.append((r.model_id, r.n_regressors, f"{r.adj_r2:.6f}", f"{r.cp:.6f}",
                      f"{r.aic:.6f}", f"{r.bic:.6f}"))
    lines = [f"{'model':<8}{'n_regressors':>13}{'adj_r2':>12}{'cp':>12}{'aic':>12}{'bic':>12}"]
    for r, fl in zip(rows, flags):
        cells = []
        for c in ("adj_r2", "cp", "aic", "bic"):
            s = f"{getattr(r, c):.4f}" + ("*" if c in fl else " ")
            cells.append(f"{s:>12}")
        lines.append(f"{r.model_id:<8}{r.n_regressors:>13}" + "".join(cells))
    lines.append("* best value in column (max adj_r2, min cp/aic/bic)")
    payload = {
        "columns": list(COMPARISON_COLUMNS),
        "rows": [{"model": r.model_id, "n_regressors": r.n_regressors, "adj_r2": r.adj_r2,
                  "cp": r.cp, "aic": r.aic, "bic": r.bic, "best": fl} for r, fl in zip(rows, flags)],
    }
    return {"text": "\n".join(lines) + "\n", "csv": _csv(table), "json": dumps(payload)}


def emit_summary(cells, codes):
    """Models x features grid of coefficient sign and significance stars."""
    models = list(dict.fromkeys(c.model_id for c in cells))
    grid = {(c.model_id, c.code): c for c in cells}
    width = max(6, max(len(c) for c in codes) + 1)
    lines = [f"{'model':<8}" + "".join(f"{c:>{width}}" for c in codes)]
    table = [("model",) + tuple(codes)]
    for m in models:
        row = [grid[(m, c)].text if (m, c) in grid else "" for c in codes]
        lines.append(f"{m:<8}" + "".join(f"{v:>{width}}" for v in row))
        table.append((m,) + tuple(row))
    lines.append("* p<0.1, ** p<0.05, *** p<0.01; blank = not in model")
    payload = {
        "features": list(codes),
        "rows": [{"model": m, "cells": {c: {"sign": grid[(m, c)].sign,
                                              "significance": grid[(m, c)].significance}
                                          for c in codes if (m, c) in grid}} for m in models],
    }
    return {"text": "\n".join(lines) + "\n", "csv": _csv(table), "json": dumps(payload)}


def rounded_shares(shares, decimals=6):
    """Round percentages so the printed values add up to exactly 100.

    Largest-remainder rounding in units of ``10**-decimals``.
    """
    shares = np.asarray(shares, dtype=float)
    unit = 10 ** decimals
    scaled = shares / shares.sum() * 100 * unit
    floor = np.floor(scaled).astype(np.int64)
    short = 100 * unit - int(floor.sum())
    order = sorted(range(len(shares)), key=lambda i: (-(scaled[i] - floor[i]), i))
    for i in order[:short]:
        floor[i] += 1
    return floor, unit


def emit_relaimpo(ri, decimals=6):
    """Two-column CSV (feature, share_percent), largest share first."""
    units, unit = rounded_shares(ri.normalized, decimals)
    order = sorted(range(len(ri.codes)), key=lambda j: (-ri.lmg[j], j))
    rows = [("feature", "share_percent")]
    for j in order:
        whole, frac = divmod(int(units[j]), unit)
        rows.append((ri.codes[j], f"{whole}.{frac:0{decimals}d}"))
    return _csv(rows)


def emit_correlation(C, codes):
    rows = [("",) + tuple(codes)]
    for c, row in zip(codes, C):
        rows.append((c,) + tuple(f"{v:.6f}" for v in row))
    return _csv(rows)


def render_fit(fit, model_id="model"):
    """Coefficient display with standard errors, stars and the diagnostic line."""
    lines = [f"{model_id}: {RESPONSE} on {len(fit.subset)} regressors"]
    for code, b, se, p in zip(fit.subset, fit.coefficients, fit.standard_errors, fit.p_values):
        lines.append(f"  {code:<6}{b:>12.6f}  ({se:.5f}){significance_stars(p)}")
    df1, df2 = fit.f_df
    lines.append(f"  T = {fit.n}  adj_R2 = {fit.adj_r2:.4f}  F({df1},{df2}) = {fit.f_stat:.4f}"
                 f"{significance_stars(fit.f_pvalue)}  sigma_hat = {fit.sigma_hat:.5f}"
                 f"  DW = {fit.dw:.6f}")
    return "\n".join(lines) + "\n"


def bundle_files(bundle: ReportBundle):
    files = {}
    comp = emit_comparison(bundle.comparison)
    summ = emit_summary(bundle.summary, bundle.correlation_codes[1:])
    for ext in ("txt", "csv", "json"):
        key = "text" if ext == "txt" else ext
        files[f"comparison.{ext}"] = comp[key]
        files[f"summary.{ext}"] = summ[key]
    if bundle.relaimpo is not None:
        files["relaimpo.csv"] = emit_relaimpo(bundle.relaimpo)
    files["correlation.csv"] = emit_correlation(bundle.correlation, bundle.correlation_codes)
    files["models.txt"] = "".join(render_fit(m.fit, m.model_id) + "\n"
                                  for m in bundle.models if m.fit is not None)
    files["manifest.json"] = dumps(bundle.manifest)
    return files


def write_bundle(bundle: ReportBundle, out_dir):
    """Write every output file, or none of them if anything fails."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = bundle_files(bundle)
    tmp = Path(tempfile.mkdtemp(prefix=".selekta-", dir=out))
    try:
        for name, text in files.items():
            (tmp / name).write_text(text, encoding="utf-8")
        for name in files:
            (tmp / name).replace(out / name)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    return sorted(files)


def run_to_directory(input_path, config: PipelineConfig, out_dir):
    data = load_dataset(input_path)
    bundle = run_pipeline(data, config, input_path)
    return bundle, write_bundle(bundle, out_dir)
