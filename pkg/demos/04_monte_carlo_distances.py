"""One Monte-Carlo grid cell: Gaussian approximation vs block bootstrap.

Simulates replicate copies, computes the scaled covariance and precision
errors, draws the matching Gaussian reference samples from closed-form
covariances, takes one random bootstrap window per copy, and prints the
Kolmogorov/Wasserstein-1 distances plus QQ data, as the experiment harness
does for every cell.

Run: python demos/04_monte_carlo_distances.py
"""

import tempfile
from pathlib import Path

from lrdcov import run_cell, toeplitz_spec

n, p, beta, replicates = 500, 5, 2.0, 200
spec = toeplitz_spec(beta, p, truncation=n * n)

with tempfile.TemporaryDirectory() as tmp:
    results, skipped = run_cell(spec, n, replicates=replicates, seed=20240817,
                                output_dir=tmp)
    print(f"cell n = {n}, p = {p}, beta = {beta}, {replicates} replicates")
    for r in results:
        print(f"  {r.kind:9s} KS = {r.ks:.3f}  W1 = {r.w1:.3f}")
    for s in skipped:
        print(f"  {s.kind}: skipped ({s.reason})")
    sidecars = sorted(f.name for f in Path(tmp).iterdir())
    print("plot sidecars:", ", ".join(sidecars))
    qq = (Path(tmp) / f"qq_n{n}_p{p}_b{beta:g}_cov_ga.csv").read_text().splitlines()
    print("qq head:", qq[:4])
