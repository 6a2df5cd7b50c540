"""Principal component regression, PLS and iterative predictor weighting."""
from selekta.latent import ipw_pls_select, pcr_fit, pls_fit

from _common import folds, panel

data = panel()
plan = folds(data)

pcr = pcr_fit(data, plan)
print("PCR RMSECV by component count:")
for l, r in enumerate(pcr.rmsecv, start=1):
    mark = " <" if l == pcr.n_components else ""
    print(f"  {l:2d}  {r:.4f}  cum. variance {pcr.pca.cumulative_variance[l - 1]:.1%}{mark}")
print("PCR coefficients on the original drivers:")
print("  " + "  ".join(f"{c} {b:+.3f}" for c, b in zip(pcr.codes, pcr.coefficients)))

forced = pcr_fit(data, plan, n_components=6)
print(f"\nwith 6 components: {forced.cumulative_variance:.2%} of the variance")

pls = pls_fit(data.X, data.y, 3)
print(f"\nPLS, 3 components, first weight vector: "
      + " ".join(f"{c}:{w:+.2f}" for c, w in zip(data.feature_codes, pls.x_weights[:, 0])))

ipw = ipw_pls_select(data, plan)
for step in ipw.trace:
    print(f"IPW round {step['iteration']}: {step['n_components']} components, "
          f"dropped {step['dropped'] or 'nothing'}")
print("IPW-PLS keeps:", " ".join(ipw.selected))
