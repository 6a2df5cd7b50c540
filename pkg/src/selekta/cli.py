"""Command-line entry point.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dataset import load_dataset, surrogate_table, write_csv
from .errors import InputError, NumericalError
from .filters import correlation_filter, lmg_importance
from .linear import info_criteria, ols_fit
from .numeric import pearson_correlation
from .report import (DEFAULT_SEED, METHOD_IDS, METHODS, PipelineConfig, emit_correlation,
                     emit_relaimpo, render_fit, run_to_directory)

MODEL_ALIASES = {mid.lower(): m for m, mid in METHOD_IDS.items()}


def _method(name):
    key = name.strip().lower()
    if key in METHODS:
        return key
    if key in MODEL_ALIASES:
        return MODEL_ALIASES[key]
    raise InputError(f"unknown model or method {name!r}")


def _codes(text):
    return tuple(c.strip().upper() for c in text.split(",") if c.strip())


def parse_pins(items):
    pins = {}
    for item in items or ():
        if "=" not in item:
            raise InputError(f"--pin-subset expects MODEL=F1,F2,..., got {item!r}")
        model, codes = item.split("=", 1)
        pins[_method(model)] = _codes(codes)
    return pins


def build_parser():
    parser = argparse.ArgumentParser(prog="selekta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the selection methods and write every table")
    run.add_argument("--input", required=True, type=Path)
    run.add_argument("--seed", type=int, default=DEFAULT_SEED)
    run.add_argument("--folds", type=int, default=5)
    run.add_argument("--methods", default=",".join(METHODS),
                     help="comma list of methods or model ids (default: all)")
    run.add_argument("--pin-subset", action="append", metavar="MODEL=F1,F2,...")
    run.add_argument("--lasso-lambda", type=float)
    run.add_argument("--pcr-components", type=int)
    run.add_argument("--corr-cutoff", type=float, default=0.75)
    run.add_argument("--corr-mean-rule", choices=("caret", "member"), default="caret")
    run.add_argument("--no-lmg", action="store_true")
    run.add_argument("--out", required=True, type=Path)

    lmg = sub.add_parser("lmg", help="LMG relative importance shares as CSV")
    lmg.add_argument("--input", required=True, type=Path)

    corr = sub.add_parser("corr", help="correlation matrix and the filter's removals")
    corr.add_argument("--input", required=True, type=Path)
    corr.add_argument("--cutoff", type=float, default=0.75)
    corr.add_argument("--mean-rule", choices=("caret", "member"), default="caret")

    fit = sub.add_parser("fit", help="OLS refit of one subset")
    fit.add_argument("--input", required=True, type=Path)
    fit.add_argument("--subset", required=True, help="comma list of feature codes")

    sur = sub.add_parser("surrogate", help="write a synthetic table with the published correlations")
    sur.add_argument("--out", required=True, type=Path)
    sur.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def _run(args, out):
    methods = tuple(dict.fromkeys(_method(m) for m in args.methods.split(",") if m.strip()))
    methods = tuple(m for m in METHODS if m in methods)
    config = PipelineConfig(seed=args.seed, folds=args.folds, methods=methods,
                            pins=parse_pins(args.pin_subset), pcr_components=args.pcr_components,
                            lasso_lambda=args.lasso_lambda, corr_cutoff=args.corr_cutoff,
                            corr_mean_rule=args.corr_mean_rule, lmg=not args.no_lmg)
    _, files = run_to_directory(args.input, config, args.out)
    out.write("".join(f"{args.out / f}\n" for f in files))


def _fit(args, out):
    data = load_dataset(args.input)
    full = ols_fit(data, data.feature_codes)
    fit = ols_fit(data, _codes(args.subset))
    ic = info_criteria(fit, full)
    out.write(render_fit(fit, "fit"))
    out.write(f"  Cp = {ic.cp:.4f}  AIC = {ic.aic:.4f}  BIC = {ic.bic:.4f}\n")


def _corr(args, out):
    data = load_dataset(args.input)
    codes = tuple(data.feature_codes)
    C = pearson_correlation(data.X, codes)
    out.write(emit_correlation(C, codes))
    res = correlation_filter(C, codes, args.cutoff, args.mean_rule)
    for r in res.removed:
        out.write(f"# removed {r.code}: |r({r.pair[0]},{r.pair[1]})| = {abs(r.r):.3f}\n")


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            _run(args, out)
        elif args.command == "lmg":
            out.write(emit_relaimpo(lmg_importance(load_dataset(args.input))))
        elif args.command == "corr":
            _corr(args, out)
        elif args.command == "fit":
            _fit(args, out)
        elif args.command == "surrogate":
            write_csv(surrogate_table(args.seed), args.out)
    except InputError as exc:
        print(f"selekta: input error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"selekta: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
