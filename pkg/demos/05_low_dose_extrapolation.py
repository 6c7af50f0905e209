"""Low-dose percentiles and the delta-method safe-dose bound.

The percentile inverts a dose-response curve at a target probability,
on the total-risk scale or, when a background response exists, the
extra-risk scale.  Fitted curves get a conservative lower confidence
bound on the estimated percentile.
"""

import numpy as np

import bioassay as ba
from bioassay.fitting import RegressionDataset, fit_least_squares
from bioassay.lowdose import PercentileQuery, percentile, vsd_upper_limit

# -- percentiles across the curve family -----------------------------------------
print("doses at small response probabilities (total risk):")
for model, theta in [
    ("one-hit", (1.0,)),
    ("multi-hit", (2.0, 1.0)),
    ("weibull-cdf", (1.0, 2.0)),
    ("multistage", (0.0, 1.0, 1.0)),
]:
    row = [
        percentile(PercentileQuery(model, theta, p, risk_type="total"))
        for p in (0.001, 0.01, 0.1)
    ]
    print(f"  {model:12s} " + "  ".join(f"L({p}) = {v:.5f}" for p, v in zip((0.001, 0.01, 0.1), row)))

# -- background response switches the default to extra risk ---------------------------
bg_theta = (0.3, 1.0)
q = PercentileQuery("multistage", bg_theta, 0.05)
lp = percentile(q)
f0 = ba.evaluate("multistage", 0.0, bg_theta)
f = ba.evaluate("multistage", lp, bg_theta)
print(f"\nbackground F(0) = {f0:.4f}; extra-risk 5% dose = {lp:.5f}")
print(f"  check: (F(L) - F(0)) / (1 - F(0)) = {(f - f0) / (1 - f0):.6f}")

# -- conservative bound from a fitted curve ----------------------------------------------
rng = np.random.default_rng(12)
xs = np.linspace(0.1, 3.0, 400)
ys = np.asarray(ba.evaluate("one-hit", xs, [1.0])) + 0.05 * rng.standard_normal(400)
fit = fit_least_squares("one-hit", RegressionDataset(xs, ys), [0.5])
res = vsd_upper_limit(PercentileQuery("one-hit", (1.0,), 0.1, risk_type="total"), fit, 0.975)
print(f"\nfitted rate = {fit.theta_hat[0]:.4f}")
print(f"L_0.1 at the estimate = {res.lp:.5f} (SE {res.se:.5f})")
print(f"97.5% conservative dose bound = {res.vsd:.5f} (method: {res.method})")
