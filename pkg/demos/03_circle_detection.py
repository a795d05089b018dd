"""
Detecting a loop with Čech complexes
====================================

Points sampled around a circle. As the ball radius grows, components merge
(b0 drops to 1), a loop appears (b1 = 1), and finally triangles fill it in.
"""

import numpy as np

from riemstats.topology import nerve_consistency_check, sweep

rng = np.random.default_rng(0)
t = np.sort(rng.uniform(0, 2 * np.pi, 40))
pts = np.column_stack([np.cos(t), np.sin(t)]) + rng.normal(0, 0.03, (40, 2))

print(" eps     V    E    T   b0  b1")
for row in sweep(pts, np.linspace(0.05, 1.2, 24)):
    print(" %.3f %4d %4d %4d %4d %3d" % (row["epsilon"], row["vertices"], row["edges"], row["triangles"], row["b0"], row["b1"]))

# the union of balls and the complex agree on connectivity
for eps in (0.05, 0.1, 0.3):
    print(eps, nerve_consistency_check(pts, eps, trials=5000, seed=1))
