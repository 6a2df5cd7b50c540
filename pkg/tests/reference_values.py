"""Published numbers for the 1990-2021 renewable-energy panel.

Subsets are the regressor sets of the eleven published model displays;
criteria are the published comparison table (Mod3, PCR, has no row there).
"""

FULL_COEFFICIENTS = {
    "CO2": (-0.119419, 0.13561),
    "DINV": (0.374359, 0.14309),
    "EG": (0.0478255, 0.27362),
    "EXR": (-0.0303502, 0.15094),
    "FDEV": (0.352481, 0.16190),
    "FDI": (0.553816, 0.20506),
    "INC": (-0.101220, 0.11670),
    "IND": (-0.307435, 0.18947),
    "INFL": (0.269445, 0.12920),
    "TOUR": (0.262536, 0.21919),
    "TR": (-0.618646, 0.19683),
    "URB": (0.0133764, 0.17221),
}
FULL_ADJ_R2 = 0.7063
FULL_SIGMA = 0.54194
FULL_DW = 1.411028
FULL_F = 7.2127

ALL = tuple(FULL_COEFFICIENTS)
SUBSETS = {
    "full": ALL,
    "corr": tuple(c for c in ALL if c != "EG"),
    "lasso": ("DINV", "FDEV", "FDI", "IND", "INFL", "TR", "URB"),
    "best_subset": ("DINV", "FDEV", "FDI", "IND", "INFL", "TOUR", "TR"),
    "stepwise": ("CO2", "DINV", "FDEV", "FDI", "IND", "INFL", "TOUR", "TR"),
    "rfe": ("DINV", "EG", "FDEV", "FDI", "IND", "INFL", "TR", "URB"),
    "ipw_pls": ("CO2", "DINV", "EG", "IND", "INFL", "TR", "URB"),
    "boruta": ("DINV", "EG", "FDI", "IND", "INFL", "TR", "URB"),
    "sa": ("CO2", "FDI", "INC", "INFL", "TOUR", "TR"),
    "ga": ("EG", "FDI", "TOUR", "URB"),
}

# method -> (n_regressors, adj_r2, cp, aic, bic)
CRITERIA = {
    "full": (12, 0.7063, 13.0000, 62.9236, 83.4439),
    "corr": (11, 0.7205, 11.0306, 60.9750, 80.0296),
    "lasso": (7, 0.7315, 5.9383, 57.5250, 70.7166),
    "best_subset": (7, 0.7360, 5.5700, 56.9833, 70.1749),
    "stepwise": (8, 0.7423, 6.1809, 56.8532, 71.5105),
    "rfe": (8, 0.7267, 7.3997, 58.7297, 73.3870),
    "ipw_pls": (7, 0.6520, 12.4390, 65.8299, 79.0215),
    "boruta": (7, 0.7021, 8.3438, 60.8544, 74.0460),
    "sa": (6, 0.5642, 19.0973, 72.3350, 84.0609),
    "ga": (4, 0.3182, 40.6754, 85.1166, 93.9110),
}

LASSO_LAMBDA = 0.07686471
LMG_R2 = 0.82
