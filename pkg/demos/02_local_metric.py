"""
Local scales and manifold distances
===================================

Every point calibrates its own bandwidth from its k nearest neighbors. The
resulting fuzzy graph gives edge lengths -ln(mu), which we extend to all
pairs either by shortest paths or by the single-linkage merge height.
"""

import numpy as np

import riemstats as rs
from riemstats.neighbors import pairwise_euclidean

table = rs.load_students()
k = 3

nbrs = rs.exact_knn(table, k)
scales = rs.compute_local_scales(nbrs, k)
graph = rs.fuzzy_memberships(nbrs, scales)

for lab, r, s in zip(table.row_labels, scales.rho, scales.sigma):
    print(f"{lab:8s} rho={r:.3f} sigma={s:.4f}")

geo = rs.umap_distance_matrix(graph, "geodesic", "euclidean_bridge", table)
mm = rs.umap_distance_matrix(graph, "minimax", "euclidean_bridge", table)
eu = pairwise_euclidean(table.values)

print("\nbridging edges added:", geo.bridges)

# manifold vs Euclidean distances from the first student
i = 0
print(f"\nfrom {table.row_labels[i]}:")
for j in range(table.n):
    print(f"  {table.row_labels[j]:8s} euclid={eu[i, j]:.3f} geodesic={geo.values[i, j]:.3f} minimax={mm.values[i, j]:.3f}")

assert np.all(mm.values <= geo.values)
