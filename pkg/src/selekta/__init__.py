"""Feature selection and linear-regression workbench for a 12-driver
renewable-energy panel: OLS diagnostics, eleven selection strategies and
the comparison/summary tables built on them."""

__version__ = "0.1.0"

from .dataset import FEATURES, RESPONSE, load_csv, load_dataset, make_folds, standardize
from .errors import InputError, NumericalError, SelektaError
from .linear import durbin_watson, info_criteria, ols_fit
from .numeric import RngStream

__all__ = [
    "FEATURES",
    "RESPONSE",
    "InputError",
    "NumericalError",
    "RngStream",
    "SelektaError",
    "durbin_watson",
    "info_criteria",
    "load_csv",
    "load_dataset",
    "make_folds",
    "ols_fit",
    "standardize",
]
