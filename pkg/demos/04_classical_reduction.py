"""
Recovering the classical statistics
===================================

If the manifold distances are replaced by Euclidean ones (every rho = 1) and
the medoid by the column means, the Riemannian covariance and correlation are
exactly the population covariance and Pearson correlation.
"""

import numpy as np

import riemstats as rs

rng = np.random.default_rng(1)
x = rng.normal(size=(40, 4)) @ rng.normal(size=(4, 4))
table = rs.DataTable.from_array(x)

cov = rs.covariance(table, rs.FrechetMean.arithmetic(table), rho=np.ones(table.n))
R = rs.correlation_matrix(cov)

print("max |S - cov|     :", np.abs(cov.S - np.cov(x, rowvar=False, bias=True)).max())
print("max |R - corrcoef|:", np.abs(R - np.corrcoef(x, rowvar=False)).max())

# with the real manifold distances the numbers move, but stay valid correlations
res = rs.run(table, rs.PipelineConfig(k=5))
print("\nRiemannian R with k=5:")
print(np.round(res.R, 3))
print("min eigenvalue of S:", np.linalg.eigvalsh(res.cov.S).min())
