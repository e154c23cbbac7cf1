"""Writes returns_30x504.csv: a one-market, five-sector factor model.

Assets from the same sector are interleaved so that contiguous blocks do not
line up with sectors.
"""
import numpy as np

rng = np.random.default_rng(2024)
T, n, m = 504, 30, 5
sectors = np.repeat(np.arange(m), n // m)
market = rng.standard_normal(T) * 0.010
sector = rng.standard_normal((T, m)) * 0.007
beta = rng.uniform(0.6, 1.4, n)
load = rng.uniform(0.6, 1.2, n)
returns = (np.outer(market, beta) + sector[:, sectors] * load
           + rng.standard_normal((T, n)) * rng.uniform(0.006, 0.015, n))
order = rng.permutation(n)
returns = returns[:, order]
labels = [f"S{sectors[j]}A{j:02d}" for j in order]

with open("returns_30x504.csv", "w") as f:
    f.write(",".join(labels) + "\n")
    for row in returns:
        f.write(",".join(f"{x:.10g}" for x in row) + "\n")
