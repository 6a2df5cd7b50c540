"""LASSO: the coefficient path, a CV-chosen penalty and the post-LASSO refit."""
import numpy as np

from selekta.lasso import lambda_grid, lambda_max, lasso_cv, lasso_fixed, lasso_path
from selekta.linear import info_criteria, ols_fit

from _common import folds, panel

data = panel()
lmax = lambda_max(data.X, data.y)
grid = lambda_grid(lmax, 12, 1e-2)
path = lasso_path(data.X, data.y, grid)
print("lambda      nonzero  support")
for lam, beta in zip(grid, path.coefficients):
    support = [c for c, b in zip(data.feature_codes, beta) if b != 0]
    print(f"{lam:9.5f}  {len(support):7d}  {' '.join(support)}")

cv = lasso_cv(data, folds(data))
best = int(np.argmin(cv.cv_rmse))
print(f"\nCV picks lambda = {cv.lambda_star:.6f} (RMSE {cv.cv_rmse[best]:.4f})")
print("support:", " ".join(cv.selected_support))

# A fixed penalty bypasses the CV search entirely.
fixed = lasso_fixed(data, 0.07686471)
print("lambda = 0.07686471 support:", " ".join(fixed.selected_support))

refit = ols_fit(data, fixed.selected_support)
ic = info_criteria(refit, ols_fit(data, data.feature_codes))
print(f"post-LASSO OLS: adj R2 {refit.adj_r2:.4f}, Cp {ic.cp:.4f}, AIC {ic.aic:.4f}, BIC {ic.bic:.4f}")
