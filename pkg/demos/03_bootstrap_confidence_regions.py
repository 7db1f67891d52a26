"""Block bootstrap for the covariance max-deviation and its confidence region.

Slides overlapping windows over one realization, reads off the empirical
distribution of scaled block deviations, extracts exact order-statistic
quantiles, and checks simultaneous coverage of the true covariance over a
small Monte-Carlo loop.

Run: python demos/03_bootstrap_confidence_regions.py
"""

import numpy as np

from lrdcov import (SimulationPlan, confidence_region, covariance_blocks,
                    default_block_length, precision_blocks, process_truth,
                    quantile, simulate_multidimensional, toeplitz_spec)

spec = toeplitz_spec(beta=2.0, p=3, truncation=1_000_000)
truth = process_truth(spec, lags=1)
n = 1000
l = default_block_length(n)
print(f"n = {n}, block length l = floor(n^(2/3)) = {l}")

batch = simulate_multidimensional(SimulationPlan(spec, n, seed=99,
                                                 copies_requested=100))

X = batch.data[0]
dist = covariance_blocks(X, l)
print(f"{len(dist)} covariance windows; quantiles "
      f"[0.5, 0.9, 0.95] = {[round(quantile(dist, q), 3) for q in (0.5, 0.9, 0.95)]}")
prec = precision_blocks(X, l)
print(f"precision windows: 0.9-quantile = {quantile(prec, 0.9):.3f}")

alpha = 0.1
covered = 0
for k in range(batch.copies):
    Xk = batch.data[k]
    region = confidence_region(Xk.T @ Xk / n, covariance_blocks(Xk, l), n, alpha)
    covered += region.contains(truth.sigma)
print(f"simultaneous coverage of Sigma at 1 - alpha = {1 - alpha}: "
      f"{covered / batch.copies:.2f} over {batch.copies} replicates")
